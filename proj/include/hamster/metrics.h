// Copyright 2026 The Hamster Wheel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAMSTER_METRICS_H
#define HAMSTER_METRICS_H

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hamster/protocol.h"
#include "hamster/rng.h"
#include "hamster/tomography.h"

namespace hamster {

enum class Partition { A, B };

/// Transposes the indices of one subsystem (A is the most significant qubit).
Eigen::Matrix4cd partial_transpose(const DensityMatrix &rho, Partition partition = Partition::A);

/// Absolute sum of the negative eigenvalues of the partial transpose.
double negativity(const DensityMatrix &rho);

/// (||rho^T_A||_1 - 1) / 2, evaluated through singular values.
double negativity_trace_norm(const DensityMatrix &rho);

/// <target|rho|target> for a normalized pure target.
double fidelity_pure(const DensityMatrix &rho, const Eigen::Vector4cd &target);

/// Ideal teleported state for each discriminator at hop count m.
std::vector<Eigen::Vector4cd> variant_targets(size_t m, std::span<const Discriminator> discriminators);

struct WeightedVariant {
    Eigen::Vector4cd state;
    double weight;
};

/// sum_k w_k |v_k><v_k|; weights must sum to one.
DensityMatrix mixed_variant_density(std::span<const WeightedVariant> variants);

struct BootstrapResult {
    double point_estimate = 0;
    std::vector<double> resamples;  // ascending
    double ci_low = 0;
    double ci_high = 0;
    double epsilon = 0;
};

/// 1-indexed positions (ceil(0.025 N), floor(0.975 N)) of the percentile
/// interval in the ordered resamples.
std::pair<size_t, size_t> bootstrap_ci_indices(size_t n);

/// Multinomial resample of every setting at its original shot count.
CountsTable resample_counts(const CountsTable &table, Rng &rng);

using CountsEstimator = std::function<double(std::span<const CountsTable>)>;

/// Percentile bootstrap over one or more counts tables (several tables for
/// post-selection buckets, each resampled independently). Each resample uses
/// its own stream derived from one draw of `rng`, so the result depends only on
/// (tables, N, rng state).
BootstrapResult bootstrap_ci(
    std::span<const CountsTable> tables, const CountsEstimator &estimator, size_t resample_count, Rng &rng);

BootstrapResult bootstrap_ci(
    const CountsTable &table,
    const std::function<double(const CountsTable &)> &estimator,
    size_t resample_count,
    Rng &rng);

}  // namespace hamster

#endif
