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

#include "hamster/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hamster {

Eigen::Matrix4cd partial_transpose(const DensityMatrix &rho, Partition partition) {
    const Eigen::Matrix4cd &m = rho.matrix();
    Eigen::Matrix4cd out;
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            int ia = i >> 1, ib = i & 1, ja = j >> 1, jb = j & 1;
            if (partition == Partition::A) {
                out(i, j) = m(2 * ja + ib, 2 * ia + jb);
            } else {
                out(i, j) = m(2 * ia + jb, 2 * ja + ib);
            }
        }
    }
    return out;
}

double negativity(const DensityMatrix &rho) {
    Eigen::Matrix4cd pt = partial_transpose(rho);
    pt = (pt + pt.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(pt, Eigen::EigenvaluesOnly);
    double total = 0;
    for (int k = 0; k < 4; k++) {
        total += std::min(0.0, solver.eigenvalues()(k));
    }
    return std::abs(total);
}

double negativity_trace_norm(const DensityMatrix &rho) {
    Eigen::Matrix4cd pt = partial_transpose(rho);
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(pt);
    return 0.5 * (svd.singularValues().sum() - 1.0);
}

double fidelity_pure(const DensityMatrix &rho, const Eigen::Vector4cd &target) {
    return (target.adjoint() * rho.matrix() * target)(0, 0).real();
}

std::vector<Eigen::Vector4cd> variant_targets(size_t m, std::span<const Discriminator> discriminators) {
    std::vector<Eigen::Vector4cd> out;
    out.reserve(discriminators.size());
    for (const auto &d : discriminators) {
        out.push_back(byproduct_state(m, d));
    }
    return out;
}

DensityMatrix mixed_variant_density(std::span<const WeightedVariant> variants) {
    if (variants.empty()) {
        throw std::invalid_argument("mixture needs at least one variant");
    }
    double total = 0;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (const auto &v : variants) {
        if (v.weight < 0) {
            throw std::invalid_argument("variant weights must be non-negative");
        }
        total += v.weight;
        rho += v.weight * (v.state * v.state.adjoint());
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("variant weights sum to " + std::to_string(total) + ", expected 1");
    }
    return DensityMatrix(rho);
}

std::pair<size_t, size_t> bootstrap_ci_indices(size_t n) {
    if (n < 2) {
        throw std::invalid_argument("bootstrap needs at least 2 resamples");
    }
    size_t low = (25 * n + 999) / 1000;
    size_t high = (975 * n) / 1000;
    return {std::max<size_t>(low, 1), std::max<size_t>(high, 1)};
}

CountsTable resample_counts(const CountsTable &table, Rng &rng) {
    CountsTable out;
    out.metadata = table.metadata;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        uint64_t shots = table.shots(s);
        if (shots == 0) {
            continue;
        }
        double cumulative[4];
        double acc = 0;
        for (int o = 0; o < 4; o++) {
            acc += static_cast<double>(table.counts[s][o]) / static_cast<double>(shots);
            cumulative[o] = acc;
        }
        for (uint64_t k = 0; k < shots; k++) {
            double u = uniform01(rng);
            int o = 0;
            while (o < 3 && u >= cumulative[o]) {
                o++;
            }
            while (table.counts[s][o] == 0) {
                o--;
            }
            out.counts[s][o]++;
        }
    }
    return out;
}

BootstrapResult bootstrap_ci(
    std::span<const CountsTable> tables, const CountsEstimator &estimator, size_t resample_count, Rng &rng) {
    auto [low_index, high_index] = bootstrap_ci_indices(resample_count);
    if (tables.empty()) {
        throw std::invalid_argument("bootstrap needs at least one counts table");
    }
    uint64_t total = 0;
    for (const auto &t : tables) {
        total += t.total_shots();
    }
    if (total == 0) {
        throw std::invalid_argument("bootstrap needs nonzero shots");
    }

    BootstrapResult result;
    result.point_estimate = estimator(tables);
    uint64_t base = rng();
    result.resamples.resize(resample_count);
    std::vector<CountsTable> drawn(tables.size());
    for (size_t k = 0; k < resample_count; k++) {
        Rng stream = derive_stream(base, {k});
        for (size_t t = 0; t < tables.size(); t++) {
            drawn[t] = resample_counts(tables[t], stream);
        }
        try {
            result.resamples[k] = estimator(drawn);
        } catch (const std::exception &e) {
            throw std::runtime_error("bootstrap resample " + std::to_string(k) + " failed: " + e.what());
        }
    }
    std::sort(result.resamples.begin(), result.resamples.end());
    result.ci_low = result.resamples[low_index - 1];
    result.ci_high = result.resamples[high_index - 1];
    result.epsilon = 0.5 * (result.ci_high - result.ci_low);
    return result;
}

BootstrapResult bootstrap_ci(
    const CountsTable &table,
    const std::function<double(const CountsTable &)> &estimator,
    size_t resample_count,
    Rng &rng) {
    CountsTable tables[1] = {table};
    return bootstrap_ci(
        std::span<const CountsTable>(tables, 1),
        [&](std::span<const CountsTable> t) { return estimator(t[0]); },
        resample_count,
        rng);
}

}  // namespace hamster
