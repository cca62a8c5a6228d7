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

#include <gtest/gtest.h>

#include <cmath>

#include "hamster/metrics.h"
#include "hamster/protocol.h"
#include "oracles.h"

using namespace hamster;

namespace {

oracle::CMat to_cmat(const Eigen::Matrix4cd &m) {
    oracle::CMat out(4, oracle::CVec(4));
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) out[i][j] = m(i, j);
    return out;
}

Eigen::Matrix4cd random_density(Rng &rng, int rank) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(4, rank);
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < rank; j++) a(i, j) = {g(rng), g(rng)};
    Eigen::Matrix4cd rho = a * a.adjoint();
    return rho / rho.trace().real();
}

Eigen::Matrix2cd random_unitary(Rng &rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix2cd a;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) a(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(a);
    return qr.householderQ();
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Vector4cd graph_state() {
    Eigen::Vector4cd v;
    v << 0.5, 0.5, 0.5, -0.5;
    return v;
}

Eigen::Vector4cd bell() {
    Eigen::Vector4cd v;
    v << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
    return v;
}

CountsTable exact_counts(const DensityMatrix &rho, uint64_t shots) {
    // Deterministic rounding of exact probabilities, for fixed inputs.
    auto probs = exact_probabilities(rho, NoiseModel{});
    CountsTable t;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        uint64_t used = 0;
        for (int o = 0; o < 3; o++) used += t.counts[s][o] = std::llround(probs[s][o] * shots);
        t.counts[s][3] = shots - used;
    }
    return t;
}

}  // namespace

TEST(PartialTranspose, Examples) {
    Rng rng(1);
    Eigen::Matrix2cd a = random_density(rng, 4).block<2, 2>(0, 0), b = random_density(rng, 4).block<2, 2>(2, 2);
    a /= a.trace();
    b /= b.trace();
    DensityMatrix prod(kron2(a, b));
    Eigen::Matrix4cd pt = partial_transpose(prod);
    EXPECT_LT((pt - kron2(a.transpose(), b)).norm(), 1e-14);
    EXPECT_GT(oracle::hermitian_eigenvalues(to_cmat(pt)).front(), -1e-12);

    auto g = DensityMatrix::pure(graph_state());
    EXPECT_NEAR(oracle::hermitian_eigenvalues(to_cmat(partial_transpose(g))).front(), -0.5, 1e-12);

    DensityMatrix r(random_density(rng, 3));
    EXPECT_EQ(partial_transpose(DensityMatrix(partial_transpose(r))), r.matrix());
    EXPECT_NEAR(partial_transpose(r, Partition::B).trace().real(), 1.0, 1e-12);
}

TEST(Negativity, Examples) {
    EXPECT_NEAR(negativity(DensityMatrix::pure(graph_state())), 0.5, 1e-12);
    Rng rng(2);
    for (int t = 0; t < 10; t++) {
        Eigen::Vector2cd a = random_density(rng, 1).col(0).head<2>().normalized();
        Eigen::Vector2cd b = random_density(rng, 1).col(1).tail<2>().normalized();
        Eigen::Vector4cd ab;
        ab << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
        EXPECT_NEAR(negativity(DensityMatrix::pure(ab)), 0.0, 1e-12);
    }
    Eigen::Matrix4cd werner = 0.5 * bell() * bell().adjoint() + 0.5 * Eigen::Matrix4cd::Identity() / 4;
    EXPECT_NEAR(oracle::negativity(to_cmat(werner)), 0.125, 1e-12);
    EXPECT_NEAR(negativity(DensityMatrix(werner)), 0.125, 1e-12);
}

TEST(Negativity, FormsAgreeAndMatchOracle) {
    Rng rng(3);
    for (int t = 0; t < 1000; t++) {
        DensityMatrix r(random_density(rng, 1 + t % 4));
        double n = negativity(r);
        EXPECT_NEAR(n, negativity_trace_norm(r), 1e-9);
        EXPECT_NEAR(n, oracle::negativity(to_cmat(r.matrix())), 1e-9);
        EXPECT_GE(n, 0.0);
        EXPECT_LE(n, 0.5 + 1e-12);
    }
}

TEST(Negativity, LocalUnitaryInvariance) {
    Rng rng(4);
    for (int t = 0; t < 200; t++) {
        Eigen::Matrix4cd r = random_density(rng, 1 + t % 4);
        Eigen::Matrix4cd uv = kron2(random_unitary(rng), random_unitary(rng));
        EXPECT_NEAR(negativity(DensityMatrix(r)), negativity(DensityMatrix(uv * r * uv.adjoint())), 1e-9);
    }
    for (size_t m : {3, 4})
        for (int d = 0; d < 4; d++)
            EXPECT_NEAR(negativity(DensityMatrix::pure(byproduct_state(m, {bool(d & 2), bool(d & 1)}))), 0.5, 1e-12);
}

TEST(Fidelity, Examples) {
    auto g = graph_state();
    EXPECT_NEAR(fidelity_pure(DensityMatrix::pure(g), g), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_pure(DensityMatrix(), g), 0.25, 1e-12);
    Eigen::Matrix4cd ih = Eigen::Matrix4cd::Zero();
    double s = 1 / std::sqrt(2.0);
    Eigen::Matrix2cd h;
    h << s, s, s, -s;
    Eigen::Vector4cd hop = kron2(Eigen::Matrix2cd::Identity(), h) * g;
    EXPECT_LT((hop - bell()).norm(), 1e-12);
    EXPECT_NEAR(fidelity_pure(DensityMatrix::pure(hop), g), 0.0, 1e-12);
}

TEST(Fidelity, OneImpliesEqualState) {
    Rng rng(5);
    for (int t = 0; t < 50; t++) {
        Eigen::Vector4cd v = random_density(rng, 1).col(0).normalized();
        auto rho = DensityMatrix::pure(v);
        auto rec = linear_inversion_qst(exact_probabilities(rho, NoiseModel{}));
        double f = fidelity_pure(rec, v);
        ASSERT_NEAR(f, 1.0, 1e-10);
        EXPECT_LT((rec.matrix() - v * v.adjoint()).norm(), 1e-8);
    }
}

TEST(VariantTargets, Examples) {
    std::array<Discriminator, 1> zero{Discriminator{}};
    EXPECT_LT((variant_targets(4, zero)[0] - graph_state()).norm(), 1e-12);
    auto odd = variant_targets(3, zero)[0];
    EXPECT_NEAR(std::abs(odd.dot(bell())), 1.0, 1e-12);

    std::array<Discriminator, 4> all{Discriminator{0, 0}, Discriminator{0, 1}, Discriminator{1, 0}, Discriminator{1, 1}};
    for (size_t m : {5, 6}) {
        auto v = variant_targets(m, all);
        for (int i = 0; i < 4; i++)
            for (int j = 0; j < 4; j++) {
                double f = std::norm(v[i].dot(v[j]));
                if (i == j) {
                    EXPECT_NEAR(f, 1.0, 1e-12);
                } else {
                    EXPECT_LT(f, 1.0 - 1e-6);
                }
            }
    }
}

TEST(MixedVariant, Examples) {
    std::vector<WeightedVariant> one{{graph_state(), 1.0}};
    EXPECT_LT((mixed_variant_density(one).matrix() - graph_state() * graph_state().adjoint()).norm(), 1e-12);

    std::array<Discriminator, 4> all{Discriminator{0, 0}, Discriminator{0, 1}, Discriminator{1, 0}, Discriminator{1, 1}};
    std::vector<WeightedVariant> mix;
    for (auto v : variant_targets(7, all)) mix.push_back({v, 0.25});
    auto rho = mixed_variant_density(mix);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_NEAR(oracle::negativity(to_cmat(rho.matrix())), 0.0, 1e-12);
    EXPECT_NEAR(negativity(rho), 0.0, 1e-12);

    std::vector<WeightedVariant> bad{{graph_state(), 0.7}};
    EXPECT_THROW(mixed_variant_density(bad), std::invalid_argument);
}

TEST(Bootstrap, Indices) {
    EXPECT_EQ(bootstrap_ci_indices(200), std::make_pair(size_t{5}, size_t{195}));
    EXPECT_EQ(bootstrap_ci_indices(1000), std::make_pair(size_t{25}, size_t{975}));
    EXPECT_EQ(bootstrap_ci_indices(41), std::make_pair(size_t{2}, size_t{39}));
    EXPECT_THROW(bootstrap_ci_indices(1), std::invalid_argument);
}

TEST(Bootstrap, ZeroVarianceCounts) {
    CountsTable t;
    for (auto &row : t.counts) row = {100, 0, 0, 0};
    Rng rng(6);
    auto r = bootstrap_ci(t, [](const CountsTable &c) { return double(c.counts[4][0]); }, 200, rng);
    EXPECT_EQ(r.epsilon, 0.0);
    EXPECT_EQ(r.ci_low, 100.0);
}

TEST(Bootstrap, PercentilePositionsAndDeterminism) {
    auto table = exact_counts(DensityMatrix::pure(graph_state()), 1000);
    PipelineOptions opts;
    auto est = [&](const CountsTable &c) { return negativity(reconstruct(c, opts)); };
    Rng a(7), b(7);
    auto ra = bootstrap_ci(table, est, 200, a);
    auto rb = bootstrap_ci(table, est, 200, b);
    EXPECT_EQ(ra.resamples, rb.resamples);
    EXPECT_TRUE(std::is_sorted(ra.resamples.begin(), ra.resamples.end()));
    EXPECT_EQ(ra.ci_low, ra.resamples[4]);
    EXPECT_EQ(ra.ci_high, ra.resamples[194]);
    EXPECT_DOUBLE_EQ(ra.epsilon, (ra.resamples[194] - ra.resamples[4]) / 2);
    EXPECT_DOUBLE_EQ(ra.point_estimate, est(table));
}

TEST(Bootstrap, ResamplesPreserveShots) {
    Rng rng(8);
    CountsTable t;
    for (auto &row : t.counts) row = {10, 0, 30, 60};
    for (int k = 0; k < 50; k++) {
        auto r = resample_counts(t, rng);
        for (size_t s = 0; s < NUM_SETTINGS; s++) {
            EXPECT_EQ(r.shots(s), 100u);
            EXPECT_EQ(r.counts[s][1], 0u);
        }
    }
}

TEST(Bootstrap, EstimatorFailureNamesResample) {
    CountsTable t;
    for (auto &row : t.counts) row = {5, 5, 5, 5};
    Rng rng(9);
    int calls = 0;
    auto est = [&](const CountsTable &) -> double {
        if (++calls == 4) throw std::runtime_error("boom");
        return 0;
    };
    try {
        bootstrap_ci(t, est, 10, rng);
        FAIL();
    } catch (const std::runtime_error &e) {
        EXPECT_NE(std::string(e.what()).find("resample 2"), std::string::npos) << e.what();
    }
}

TEST(Bootstrap, EpsilonShrinksWithShots) {
    // A noisy state keeps the estimator smooth, so epsilon follows 1/sqrt(shots).
    Eigen::Matrix4cd werner = 0.8 * graph_state() * graph_state().adjoint() + 0.2 * Eigen::Matrix4cd::Identity() / 4;
    DensityMatrix rho(werner);
    PipelineOptions opts;
    auto est = [&](const CountsTable &c) { return negativity(reconstruct(c, opts)); };
    double eps[2] = {0, 0};
    const int reps = 10;
    for (int k = 0; k < 2; k++) {
        uint64_t shots = k == 0 ? 1000 : 4000;
        for (int r = 0; r < reps; r++) {
            Rng rng = derive_stream(100 + r, {shots});
            auto t = collect_counts(density_shot_source(rho, NoiseModel{}), shots, rng);
            eps[k] += bootstrap_ci(t, est, 200, rng).epsilon / reps;
        }
    }
    EXPECT_NEAR(eps[0] / eps[1], 2.0, 0.5);
}
