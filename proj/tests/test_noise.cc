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

#include "hamster/noise.h"

using namespace hamster;

TEST(GateFault, ZeroRateIsIdentity) {
    Rng rng(1);
    NoiseModel m;
    for (int i = 0; i < 1000; i++) {
        EXPECT_TRUE(sample_gate_fault(m, 1, rng).is_identity());
        EXPECT_TRUE(sample_gate_fault(m, 2, rng).is_identity());
    }
}

TEST(GateFault, FullRateSingleQubitIsUniform) {
    Rng rng(2);
    NoiseModel m{1.0, 0, 0, 0, 0, true};
    std::array<int, 4> hist{};
    const int draws = 30000;
    for (int i = 0; i < draws; i++) {
        auto f = sample_gate_fault(m, 1, rng);
        hist[static_cast<int>(f.paulis[0])]++;
        EXPECT_EQ(f.paulis[1], Pauli::I);
    }
    EXPECT_EQ(hist[0], 0);
    for (int k = 1; k < 4; k++) EXPECT_NEAR(hist[k] / double(draws), 1 / 3.0, 4 * std::sqrt(2.0 / 9 / draws));
}

TEST(GateFault, IdentityFraction) {
    Rng rng(3);
    NoiseModel m{0.12, 0.12, 0, 0, 0, true};
    int ident = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; i++) ident += sample_gate_fault(m, 1, rng).is_identity();
    EXPECT_NEAR(ident / double(draws), 0.88, 0.01);
}

TEST(GateFault, TwoQubitHistogram) {
    Rng rng(4);
    const double p = 0.3;
    NoiseModel m{0, p, 0, 0, 0, true};
    std::array<int, 16> hist{};
    const int draws = 1000000;
    for (int i = 0; i < draws; i++) {
        auto f = sample_gate_fault(m, 2, rng);
        hist[static_cast<int>(f.paulis[0]) * 4 + static_cast<int>(f.paulis[1])]++;
    }
    for (int k = 0; k < 16; k++) {
        double want = k == 0 ? 1 - p : p / 15;
        double sigma = std::sqrt(want * (1 - want) / draws);
        EXPECT_NEAR(hist[k] / double(draws), want, 4 * sigma) << k;
    }
}

TEST(GateFault, StreamAlignmentAcrossRates) {
    Rng a(5), b(5);
    NoiseModel lo{0.01, 0.01, 0, 0, 0, true}, hi{0.5, 0.5, 0, 0, 0, true};
    for (int i = 0; i < 100; i++) {
        sample_gate_fault(lo, 1 + i % 2, a);
        sample_gate_fault(hi, 1 + i % 2, b);
    }
    EXPECT_EQ(a(), b());
}

TEST(Readout, Corruption) {
    Rng rng(6);
    for (int i = 0; i < 100; i++) {
        EXPECT_FALSE(corrupt_readout(false, 0, 0, rng));
        EXPECT_TRUE(corrupt_readout(true, 0, 0, rng));
        EXPECT_TRUE(corrupt_readout(false, 1, 1, rng));
        EXPECT_FALSE(corrupt_readout(true, 1, 1, rng));
    }
    int flips = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; i++) flips += corrupt_readout(false, 0.1, 0.0, rng);
    EXPECT_NEAR(flips / double(draws), 0.1, 0.01);
}

TEST(Calibration, Analytic) {
    auto id = build_calibration(NoiseModel{});
    EXPECT_EQ(id.entries[0][0], 1.0);
    EXPECT_EQ(id.entries[0][1], 0.0);
    EXPECT_EQ(id.entries[1][1], 1.0);

    NoiseModel m{0, 0, 0.05, 0.1, 0, true};
    auto a = build_calibration(m);
    EXPECT_DOUBLE_EQ(a.entries[0][0], 0.95);
    EXPECT_DOUBLE_EQ(a.entries[0][1], 0.1);
    EXPECT_DOUBLE_EQ(a.entries[1][0], 0.05);
    EXPECT_DOUBLE_EQ(a.entries[1][1], 0.9);
    for (int j = 0; j < 2; j++) EXPECT_EQ(a.entries[0][j] + a.entries[1][j], 1.0);

    std::array<CalibrationMatrix, 2> pair{a, a};
    auto k = kron_calibration(pair);
    EXPECT_NEAR(k[0][0], 0.9025, 1e-15);
}

TEST(Calibration, ColumnsSumToOneExactly) {
    Rng rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; i++) {
        NoiseModel m{0, 0, u(rng), u(rng), 0, true};
        auto a = build_calibration(m);
        for (int j = 0; j < 2; j++) EXPECT_EQ(a.entries[0][j] + a.entries[1][j], 1.0);
    }
}

TEST(Calibration, SingularAndEstimated) {
    NoiseModel half{0, 0, 0.5, 0.5, 0, true};
    auto a = build_calibration(half);
    EXPECT_FALSE(a.is_invertible());
    EXPECT_THROW(a.inverse(), std::domain_error);

    Rng rng(8);
    NoiseModel m{0, 0, 0.03, 0.07, 0, true};
    auto est = estimate_calibration(m, 200000, rng);
    EXPECT_NEAR(est.entries[1][0], 0.03, 0.002);
    EXPECT_NEAR(est.entries[0][1], 0.07, 0.002);
    for (int j = 0; j < 2; j++) EXPECT_NEAR(est.entries[0][j] + est.entries[1][j], 1.0, 1e-15);
}

TEST(NoiseModel, Validation) {
    EXPECT_NO_THROW(NoiseModel{}.validate());
    EXPECT_TRUE(NoiseModel{}.is_noiseless());
    EXPECT_THROW((NoiseModel{-0.1, 0, 0, 0, 0, true}.validate()), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0, 1.5, 0, 0, 0, true}.validate()), std::invalid_argument);
    EXPECT_THROW((NoiseModel{0, 0, 0, 0, std::nan(""), true}.validate()), std::invalid_argument);
}
