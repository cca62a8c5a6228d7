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

#include <set>

#include "hamster/metrics.h"
#include "hamster/protocol.h"
#include "oracles.h"

using namespace hamster;

namespace {

oracle::CVec to_vec(const StateVector &s) {
    return oracle::CVec(s.amplitudes().begin(), s.amplitudes().end());
}

oracle::CVec to_vec(const Eigen::Vector4cd &v) {
    return oracle::CVec(v.data(), v.data() + 4);
}

WheelConfig noiseless(size_t n, size_t m, CorrectionMode mode = CorrectionMode::POST_SELECTION) {
    WheelConfig c;
    c.n = n;
    c.m = m;
    c.correction_mode = mode;
    return c;
}

std::vector<uint8_t> bits_of(uint64_t v, size_t m) {
    std::vector<uint8_t> out(m);
    for (size_t k = 0; k < m; k++) out[k] = (v >> k) & 1;
    return out;
}

}  // namespace

TEST(InitialState, PhasesAndNorm) {
    auto s3 = build_initial_state(3);
    EXPECT_LT(s3[0b011].real(), 0);
    EXPECT_LT(s3[0b110].real(), 0);
    EXPECT_GT(s3[0b111].real(), 0);
    for (size_t n : {3, 6, 10}) {
        auto s = build_initial_state(n);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
        for (auto a : s.amplitudes()) EXPECT_NEAR(std::abs(a), std::pow(2.0, -double(n) / 2), 1e-12);
        for (size_t i = 0; i < s.dimension(); i++) {
            int parity = 0;
            for (size_t q = 0; q + 1 < n; q++) parity += ((i >> (n - 1 - q)) & 1) & ((i >> (n - 2 - q)) & 1);
            EXPECT_EQ(s[i].real() < 0, parity % 2 == 1);
        }
    }
    EXPECT_THROW(build_initial_state(2), std::invalid_argument);
}

TEST(FinalHolder, Examples) {
    EXPECT_EQ(final_holder(0, 20), 1u);
    EXPECT_EQ(final_holder(9, 20), 10u);
    EXPECT_EQ(final_holder(56, 20), 19u);
    EXPECT_EQ(final_holder(19, 20), 1u);
}

TEST(Discriminator, Examples) {
    std::vector<uint8_t> zeros(6, 0), a{1, 1, 1}, b{1, 0, 1, 0, 1};
    EXPECT_EQ(discriminator(zeros), (Discriminator{false, false}));
    EXPECT_EQ(discriminator(a), (Discriminator{false, true}));
    EXPECT_EQ(discriminator(b), (Discriminator{true, false}));
}

TEST(MeasurementRecord, ParitiesTrackOutcomes) {
    Rng rng(2);
    MeasurementRecord r;
    for (int k = 0; k < 50; k++) {
        r.push(rng() % 2);
        bool z = false, x = false;
        for (size_t i = 0; i < r.size(); i++) (i % 2 == 0 ? z : x) ^= r.outcomes()[i];
        EXPECT_EQ(r.c_z(), z);
        EXPECT_EQ(r.c_x(), x);
    }
}

TEST(Byproduct, Examples) {
    EXPECT_TRUE(byproduct_for(4, {false, false}).is_identity());
    auto one = byproduct_for(1, discriminator(std::vector<uint8_t>{1}));
    EXPECT_EQ(one.name(), "H*Z");
    Eigen::Matrix2cd hz;
    double s = 1 / std::sqrt(2.0);
    hz << s, -s, s, s;
    EXPECT_LT((one.matrix() - hz).norm(), 1e-12);
    auto two = byproduct_for(2, discriminator(std::vector<uint8_t>{0, 1}));
    EXPECT_EQ(two, (ByproductOperator{false, false, true}));
    EXPECT_LT((two.matrix() * two.correction() - Eigen::Matrix2cd::Identity()).norm(), 1e-12);
}

TEST(PerformHop, SingleHopMatchesOracle) {
    Rng rng(1);
    for (bool s : {false, true}) {
        auto cfg = noiseless(3, 1);
        ProtocolRun run = start_protocol(cfg, rng);
        perform_hop(run, s, rng);
        EXPECT_EQ(run.holder, 2u);
        auto want = oracle::byproduct_closed_form(1, s, false);
        auto got = oracle::pair_slice(to_vec(run.final_state()), 3, 0, 2);
        EXPECT_LT(oracle::phase_distance(got, want), 1e-10);
        EXPECT_EQ(run.record.c_z(), s);
        EXPECT_FALSE(run.record.c_x());
    }
}

TEST(RegenerateWheel, FreshLineWithByproduct) {
    Rng rng(3);
    const size_t n = 5;
    for (uint64_t pattern = 0; pattern < 8; pattern++) {
        auto bits = bits_of(pattern, 3);
        ProtocolRun run = start_protocol(noiseless(n, 3), rng);
        for (auto b : bits) perform_hop(run, b != 0, rng);
        ASSERT_EQ(run.holder, 4u);
        // Right before re-entangling, the measured ring qubits are unentangled
        // with the axis.
        auto before = run.final_state();
        for (size_t q : {1, 2, 3}) {
            std::array<size_t, 2> pair{0, q};
            auto rho = reduced_density_matrix(before, pair);
            EXPECT_NEAR(negativity(DensityMatrix(Eigen::Matrix4cd(rho))), 0.0, 1e-12);
        }
        regenerate_wheel(run, rng);
        EXPECT_EQ(run.regenerations, 1u);
        EXPECT_EQ(std::vector<size_t>(run.chain.begin(), run.chain.end()), (std::vector<size_t>{1, 2, 3}));

        // Oracle: (I (x) B) on (0, 4), |+> on 1..3, then CZ 4-1, 1-2, 2-3.
        auto d = discriminator(bits);
        auto pairv = oracle::byproduct_closed_form(3, d.z, d.x);
        oracle::CVec ref(32, 0.0);
        for (size_t a = 0; a < 2; a++)
            for (size_t b = 0; b < 2; b++) ref[(a << 4) | b] = pairv[a * 2 + b];
        for (size_t q : {1, 2, 3}) ref = oracle::apply(oracle::embed(oracle::h(), q, n), ref);
        ref = oracle::apply(oracle::cz(4, 1, n), ref);
        ref = oracle::apply(oracle::cz(1, 2, n), ref);
        ref = oracle::apply(oracle::cz(2, 3, n), ref);
        EXPECT_LT(oracle::phase_distance(to_vec(run.final_state()), ref), 1e-10);
    }
}

TEST(RegenerateWheel, CountMatchesScheduler) {
    for (size_t m = 0; m <= 80; m++) {
        ProtocolRun run = run_protocol(noiseless(20, m));
        size_t want = m <= 18 ? 0 : (m - 18 + 17) / 18;
        EXPECT_EQ(run.regenerations, want) << m;
        EXPECT_EQ(regeneration_count(m, 20), want) << m;
        EXPECT_EQ(run.holder, final_holder(m, 20)) << m;
    }
}

TEST(RunProtocol, ZeroHopsIsGraphState) {
    ProtocolRun run = run_protocol(noiseless(20, 0, CorrectionMode::DYNAMIC));
    DensityMatrix rho(run.teleported_density());
    EXPECT_NEAR(negativity(rho), 0.5, 1e-12);
    EXPECT_NEAR(fidelity_pure(rho, two_qubit_graph_state()), 1.0, 1e-12);
}

TEST(RunProtocol, NoiselessDynamicIsExact) {
    for (size_t m = 0; m <= 60; m++) {
        auto cfg = noiseless(20, m, CorrectionMode::DYNAMIC);
        cfg.seed = m;
        ProtocolRun run = run_protocol(cfg);
        DensityMatrix rho(run.teleported_density());
        EXPECT_NEAR(fidelity_pure(rho, two_qubit_graph_state()), 1.0, 1e-10) << m;
        EXPECT_EQ(run.holder, final_holder(m, 20));
    }
}

TEST(RunProtocol, ExhaustiveByproductSmallWheel) {
    const size_t n = 5;
    Rng rng(7);
    for (size_t m = 0; m <= 8; m++) {
        for (uint64_t v = 0; v < (uint64_t{1} << m); v++) {
            auto bits = bits_of(v, m);
            ProtocolRun run = run_protocol(noiseless(n, m), rng, bits);
            auto d = discriminator(bits);
            auto want = oracle::byproduct_closed_form(m, d.z, d.x);
            auto got = oracle::pair_slice(to_vec(run.final_state()), n, 0, run.holder);
            ASSERT_LT(oracle::phase_distance(got, want), 1e-9) << m << " " << v;
        }
    }
}

TEST(RunProtocol, FourVariantsAndSufficiency) {
    const size_t n = 6, m = 7;
    Rng rng(5);
    std::vector<std::pair<Discriminator, oracle::CVec>> seen;
    for (uint64_t v = 0; v < (uint64_t{1} << m); v++) {
        auto bits = bits_of(v, m);
        ProtocolRun run = run_protocol(noiseless(n, m), rng, bits);
        auto got = oracle::pair_slice(to_vec(run.final_state()), n, 0, run.holder);
        auto d = discriminator(bits);
        bool found = false;
        for (auto &[dd, vec] : seen) {
            if (oracle::phase_distance(vec, got) < 1e-10) {
                EXPECT_EQ(dd, d);
                found = true;
            } else {
                EXPECT_NE(dd, d);
            }
        }
        if (!found) seen.emplace_back(d, got);
        std::array<Discriminator, 1> one{d};
        auto target = variant_targets(m, one)[0];
        EXPECT_LT(oracle::phase_distance(got, to_vec(target)), 1e-10);
    }
    EXPECT_LE(seen.size(), 4u);
}

TEST(RunProtocol, CorrectionIsOutcomeIndependent) {
    const size_t n = 8, m = 23;
    std::optional<Eigen::Matrix4cd> first;
    for (uint64_t seed = 0; seed < 20; seed++) {
        auto cfg = noiseless(n, m, CorrectionMode::DYNAMIC);
        cfg.seed = seed;
        ProtocolRun run = run_protocol(cfg);
        Eigen::Matrix4cd rho = run.teleported_density();
        if (!first) first = rho;
        EXPECT_NEAR(fidelity_pure(DensityMatrix(rho), two_qubit_graph_state()), 1.0, 1e-10);
        EXPECT_LT((rho - *first).norm(), 1e-10);
    }
}

TEST(RunProtocol, ForcedLengthChecked) {
    Rng rng(1);
    std::vector<uint8_t> bits{0, 1};
    EXPECT_THROW(run_protocol(noiseless(5, 3), rng, bits), std::invalid_argument);
}

TEST(RunProtocol, ZeroNoiseModelIsBitIdentical) {
    auto a = noiseless(20, 40, CorrectionMode::DYNAMIC);
    a.seed = 99;
    auto b = a;
    b.noise.midcircuit_readout_errors = false;
    auto ra = run_protocol(a), rb = run_protocol(b);
    EXPECT_EQ(ra.record.outcomes(), rb.record.outcomes());
    EXPECT_EQ(ra.teleported_density(), rb.teleported_density());
}

TEST(RunProtocol, NoiseReducesNegativityMonotonically) {
    NoiseModel noise{0.0005, 0.005, 0.005, 0.005, 0, true};
    const size_t trajectories = 200;
    std::vector<double> means, sems;
    for (size_t m : {0, 9, 18, 56, 100}) {
        Eigen::Matrix4cd avg = Eigen::Matrix4cd::Zero();
        std::vector<double> per;
        for (size_t t = 0; t < trajectories; t++) {
            auto cfg = noiseless(20, m, CorrectionMode::DYNAMIC);
            cfg.noise = noise;
            cfg.seed = t * 1000 + m;
            auto rho = run_protocol(cfg).teleported_density();
            avg += rho;
            per.push_back(fidelity_pure(DensityMatrix(rho), two_qubit_graph_state()));
        }
        avg /= double(trajectories);
        means.push_back(negativity(DensityMatrix(avg)));
        double mu = 0, var = 0;
        for (double f : per) mu += f / trajectories;
        for (double f : per) var += (f - mu) * (f - mu) / (trajectories - 1);
        sems.push_back(std::sqrt(var / trajectories));
    }
    for (size_t i = 1; i < means.size(); i++) {
        EXPECT_LE(means[i], means[i - 1] + sems[i] + sems[i - 1]) << i;
    }
    EXPECT_LT(means.back(), means.front());
}
