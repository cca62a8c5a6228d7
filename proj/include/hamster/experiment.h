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

#ifndef HAMSTER_EXPERIMENT_H
#define HAMSTER_EXPERIMENT_H

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hamster/config.h"
#include "hamster/protocol.h"
#include "hamster/tomography.h"

namespace hamster {

struct VariantResult {
    Discriminator discriminator;
    double weight = 0;      // fraction of trajectories in this bucket
    uint64_t shots = 0;     // tomography shots that landed in the bucket
    bool missing = true;    // some setting received no shots
    double negativity = 0;
    double fidelity = 0;

    bool operator==(const VariantResult &) const = default;
};

struct ResultRow {
    size_t m = 0;
    CorrectionMode mode = CorrectionMode::DYNAMIC;
    double negativity = 0;
    double neg_err = 0;
    double fidelity = 0;
    double fid_err = 0;
    uint64_t trajectories = 0;
    double seconds = 0;
    std::vector<VariantResult> variants;  // post-selection only

    bool operator==(const ResultRow &) const = default;
};

/// Trajectory-averaged reduced state of (axis, holder) for one hop count.
struct TrajectoryAverage {
    Eigen::Matrix4cd all = Eigen::Matrix4cd::Zero();
    std::array<Eigen::Matrix4cd, 4> buckets{};  // indexed by Discriminator::index()
    std::array<uint64_t, 4> bucket_counts{};
    uint64_t trajectories = 0;
};

/// Runs config.trajectories noisy protocol runs at hop count m. Trajectory t
/// uses the stream derived from (seed, m, t); results are summed in index
/// order so the outcome is independent of the thread count.
TrajectoryAverage simulate_trajectories(const ExperimentConfig &config, size_t m);

/// Tomography and metrics for one hop count.
ResultRow evaluate_point(const ExperimentConfig &config, size_t m, const TrajectoryAverage &average);

std::vector<ResultRow> run_experiment(const ExperimentConfig &config);

struct NoiseFit {
    NoiseModel model;
    double achieved_negativity = 0;
    size_t evaluations = 0;
};

/// Bisection on p2 (with p1 = p1_ratio * p2) so that the exact-probability
/// negativity at `at_hops` matches `target`. Uses the same trajectory streams
/// for every evaluation.
NoiseFit calibrate_noise(
    const ExperimentConfig &base, double target, size_t at_hops, double p1_ratio = 0.1, double tolerance = 1e-3);

}  // namespace hamster

#endif
