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

#include "hamster/noise.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hamster {

namespace {

void check_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must be a probability in [0, 1], got " + std::to_string(p));
    }
}

}  // namespace

void NoiseModel::validate() const {
    check_probability(p1, "p1");
    check_probability(p2, "p2");
    check_probability(eps01, "eps01");
    check_probability(eps10, "eps10");
    check_probability(reset_flip, "reset_flip");
}

char pauli_name(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

GateFault sample_gate_fault(const NoiseModel &model, int arity, Rng &rng) {
    if (arity != 1 && arity != 2) {
        throw std::invalid_argument("fault arity must be 1 or 2");
    }
    double u = uniform01(rng);
    double v = uniform01(rng);
    GateFault fault;
    double p = arity == 1 ? model.p1 : model.p2;
    if (!(u < p)) {
        return fault;
    }
    if (arity == 1) {
        int k = 1 + std::min(2, static_cast<int>(v * 3));
        fault.paulis[0] = static_cast<Pauli>(k);
    } else {
        int k = 1 + std::min(14, static_cast<int>(v * 15));
        fault.paulis[0] = static_cast<Pauli>(k / 4);
        fault.paulis[1] = static_cast<Pauli>(k % 4);
    }
    return fault;
}

bool corrupt_readout(bool bit, double eps01, double eps10, Rng &rng) {
    double u = uniform01(rng);
    double flip = bit ? eps10 : eps01;
    return u < flip ? !bit : bit;
}

bool CalibrationMatrix::is_invertible() const {
    return std::abs(determinant()) > 1e-12;
}

std::array<std::array<double, 2>, 2> CalibrationMatrix::inverse() const {
    double det = determinant();
    if (!is_invertible()) {
        throw std::domain_error("calibration matrix is not invertible (eps01 + eps10 = 1)");
    }
    return {{{entries[1][1] / det, -entries[0][1] / det}, {-entries[1][0] / det, entries[0][0] / det}}};
}

CalibrationMatrix build_calibration(const NoiseModel &model) {
    model.validate();
    CalibrationMatrix a;
    a.entries = {{{1.0 - model.eps01, model.eps10}, {model.eps01, 1.0 - model.eps10}}};
    return a;
}

CalibrationMatrix estimate_calibration(const NoiseModel &model, uint64_t shots, Rng &rng) {
    model.validate();
    if (shots == 0) {
        throw std::invalid_argument("calibration needs at least one shot");
    }
    CalibrationMatrix a;
    for (int truth = 0; truth < 2; truth++) {
        uint64_t ones = 0;
        for (uint64_t k = 0; k < shots; k++) {
            ones += corrupt_readout(truth == 1, model.eps01, model.eps10, rng) ? 1 : 0;
        }
        double f1 = static_cast<double>(ones) / static_cast<double>(shots);
        a.entries[1][truth] = f1;
        a.entries[0][truth] = 1.0 - f1;
    }
    return a;
}

std::vector<std::vector<double>> kron_calibration(std::span<const CalibrationMatrix> factors) {
    std::vector<std::vector<double>> out{{1.0}};
    for (const auto &f : factors) {
        size_t d = out.size();
        std::vector<std::vector<double>> next(2 * d, std::vector<double>(2 * d));
        for (size_t i = 0; i < d; i++) {
            for (size_t j = 0; j < d; j++) {
                for (int a = 0; a < 2; a++) {
                    for (int b = 0; b < 2; b++) {
                        next[2 * i + a][2 * j + b] = out[i][j] * f.entries[a][b];
                    }
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace hamster
