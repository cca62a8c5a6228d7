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

#ifndef HAMSTER_NOISE_H
#define HAMSTER_NOISE_H

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hamster/rng.h"

namespace hamster {

/// Stochastic Pauli gate faults plus classical readout flips.
struct NoiseModel {
    double p1 = 0;          // depolarizing fault probability per single-qubit gate (and reset)
    double p2 = 0;          // depolarizing fault probability per CZ
    double eps01 = 0;       // P(read 1 | true 0)
    double eps10 = 0;       // P(read 0 | true 1)
    double reset_flip = 0;  // P(reset leaves |1>)
    // When set, mid-circuit X outcomes are read through the same flip channel
    // and the flipped bit is what drives the correction registers.
    bool midcircuit_readout_errors = true;

    bool is_noiseless() const {
        return p1 == 0 && p2 == 0 && eps01 == 0 && eps10 == 0 && reset_flip == 0;
    }
    bool has_gate_noise() const {
        return p1 > 0 || p2 > 0 || reset_flip > 0;
    }
    /// Throws std::invalid_argument when any probability lies outside [0, 1].
    void validate() const;

    bool operator==(const NoiseModel &) const = default;
};

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_name(Pauli p);

/// One Pauli per target of the faulty gate (second entry unused for arity 1).
struct GateFault {
    std::array<Pauli, 2> paulis{Pauli::I, Pauli::I};

    bool is_identity() const {
        return paulis[0] == Pauli::I && paulis[1] == Pauli::I;
    }
};

/// With probability p1 (arity 1) or p2 (arity 2) returns a uniformly chosen
/// non-identity Pauli pattern, otherwise identity. Always consumes exactly two
/// draws so that streams stay aligned across different fault rates.
GateFault sample_gate_fault(const NoiseModel &model, int arity, Rng &rng);

/// Sends `bit` through the asymmetric flip channel. Consumes one draw.
bool corrupt_readout(bool bit, double eps01, double eps10, Rng &rng);

/// Column-stochastic 2x2 confusion matrix; entries[i][j] = P(read i | true j).
struct CalibrationMatrix {
    std::array<std::array<double, 2>, 2> entries{{{1.0, 0.0}, {0.0, 1.0}}};

    double determinant() const {
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
    }
    bool is_invertible() const;
    /// Throws std::domain_error when the matrix is singular.
    std::array<std::array<double, 2>, 2> inverse() const;

    bool operator==(const CalibrationMatrix &) const = default;
};

/// Analytic calibration matrix of the model's readout channel.
CalibrationMatrix build_calibration(const NoiseModel &model);

/// Calibration matrix estimated from `shots` simulated preparations of |0> and
/// of |1> each, read through the model's flip channel.
CalibrationMatrix estimate_calibration(const NoiseModel &model, uint64_t shots, Rng &rng);

/// Kronecker product of per-qubit calibration matrices, first factor most
/// significant. Only used for checks; mitigation never builds it.
std::vector<std::vector<double>> kron_calibration(std::span<const CalibrationMatrix> factors);

}  // namespace hamster

#endif
