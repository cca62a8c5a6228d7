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

#include "hamster/factored_state.h"

#include <cmath>
#include <stdexcept>

namespace hamster {

namespace {

constexpr double INV_SQRT2 = 0.70710678118654752440;

std::array<Complex, 4> single_matrix(GateKind kind) {
    const Complex i{0.0, 1.0};
    switch (kind) {
        case GateKind::H:
            return {INV_SQRT2, INV_SQRT2, INV_SQRT2, -INV_SQRT2};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y:
            return {0.0, -i, i, 0.0};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::S:
            return {1.0, 0.0, 0.0, i};
        case GateKind::SDG:
            return {1.0, 0.0, 0.0, -i};
        case GateKind::CZ:
            break;
    }
    throw std::invalid_argument("not a single-qubit gate");
}

}  // namespace

FactoredState::FactoredState(size_t num_qubits)
    : block_(0), position_(num_qubits, -1), local_(num_qubits, std::array<Complex, 2>{1.0, 0.0}) {
    if (num_qubits < 1 || num_qubits > MAX_QUBITS) {
        throw std::invalid_argument("qubit count must be in [1, " + std::to_string(MAX_QUBITS) + "]");
    }
}

void FactoredState::check_qubit(size_t q) const {
    if (q >= position_.size()) {
        throw std::invalid_argument("qubit " + std::to_string(q) + " out of range");
    }
}

void FactoredState::attach(size_t q) const {
    if (position_[q] >= 0) {
        return;
    }
    block_.append_qubit(local_[q]);
    position_[q] = static_cast<int>(members_.size());
    members_.push_back(q);
}

void FactoredState::apply(const Gate &gate) {
    gate.validate(num_qubits());
    pending_.push_back(gate);
}

void FactoredState::flush() const {
    for (const Gate &g : pending_) {
        apply_now(g);
    }
    pending_.clear();
}

void FactoredState::materialize(std::initializer_list<size_t> qubits) const {
    // Walk the queue backwards collecting every gate the given qubits depend
    // on; the remaining gates act on other qubits and commute past them.
    std::vector<char> needed(num_qubits(), 0);
    for (size_t q : qubits) {
        needed[q] = 1;
    }
    std::vector<char> take(pending_.size(), 0);
    for (size_t k = pending_.size(); k-- > 0;) {
        const Gate &g = pending_[k];
        bool hit = needed[g.targets[0]] || (g.arity() == 2 && needed[g.targets[1]]);
        if (hit) {
            take[k] = 1;
            needed[g.targets[0]] = 1;
            if (g.arity() == 2) {
                needed[g.targets[1]] = 1;
            }
        }
    }
    std::vector<Gate> rest;
    for (size_t k = 0; k < pending_.size(); k++) {
        if (take[k]) {
            apply_now(pending_[k]);
        } else {
            rest.push_back(pending_[k]);
        }
    }
    pending_ = std::move(rest);
}

void FactoredState::apply_now(const Gate &gate) const {
    if (gate.kind == GateKind::CZ) {
        attach(gate.targets[0]);
        attach(gate.targets[1]);
        block_.apply(Gate::cz(position_[gate.targets[0]], position_[gate.targets[1]]));
        return;
    }
    size_t q = gate.targets[0];
    if (position_[q] >= 0) {
        block_.apply(Gate::single(gate.kind, position_[q]));
        return;
    }
    auto m = single_matrix(gate.kind);
    auto &f = local_[q];
    f = {m[0] * f[0] + m[1] * f[1], m[2] * f[0] + m[3] * f[1]};
}

bool FactoredState::measure(size_t q, Basis basis, std::optional<bool> forced, Rng &rng) {
    check_qubit(q);
    materialize({q});
    if (position_[q] >= 0) {
        size_t pos = position_[q];
        bool outcome = block_.measure_and_remove(pos, basis, forced, rng);
        members_.erase(members_.begin() + pos);
        position_[q] = -1;
        for (size_t k = pos; k < members_.size(); k++) {
            position_[members_[k]] = static_cast<int>(k);
        }
        // Eigenvector of the observed outcome.
        StateVector e = zero_state(1);
        if (outcome) {
            e.apply(Gate::single(GateKind::X, 0));
        }
        if (basis == Basis::X) {
            e.apply(Gate::single(GateKind::H, 0));
        } else if (basis == Basis::Y) {
            e.apply(Gate::single(GateKind::H, 0));
            e.apply(Gate::single(GateKind::S, 0));
        }
        local_[q] = {e[0], e[1]};
        return outcome;
    }
    StateVector single = StateVector::from_amplitudes({local_[q][0], local_[q][1]});
    bool outcome = single.measure(0, basis, forced, rng);
    local_[q] = {single[0], single[1]};
    return outcome;
}

bool FactoredState::reset(size_t q, Rng &rng) {
    bool outcome = measure(q, Basis::Z, std::nullopt, rng);
    local_[q] = {1.0, 0.0};
    return outcome;
}

StateVector FactoredState::global_state() const {
    flush();
    size_t n = num_qubits();
    // Start from the block, append detached factors, then permute into order.
    StateVector combined = block_;
    std::vector<size_t> order = members_;
    for (size_t q = 0; q < n; q++) {
        if (position_[q] < 0) {
            combined.append_qubit(local_[q]);
            order.push_back(q);
        }
    }
    StateVector result(n);
    auto src = combined.amplitudes();
    auto dst = result.amplitudes();
    for (size_t i = 0; i < src.size(); i++) {
        size_t j = 0;
        for (size_t k = 0; k < n; k++) {
            size_t b = (i >> (n - 1 - k)) & 1;
            j |= b << (n - 1 - order[k]);
        }
        dst[j] = src[i];
    }
    return result;
}

Eigen::Matrix4cd FactoredState::pair_density(size_t a, size_t b) const {
    check_qubit(a);
    check_qubit(b);
    if (a == b) {
        throw std::invalid_argument("pair_density needs two distinct qubits");
    }
    materialize({a, b});
    auto local_rho = [&](size_t q) {
        Eigen::Vector2cd v(local_[q][0], local_[q][1]);
        return Eigen::Matrix2cd(v * v.adjoint());
    };
    bool ia = position_[a] >= 0;
    bool ib = position_[b] >= 0;
    if (ia && ib) {
        std::array<size_t, 2> qs{static_cast<size_t>(position_[a]), static_cast<size_t>(position_[b])};
        return reduced_density_matrix(block_, qs);
    }
    Eigen::Matrix2cd ra;
    Eigen::Matrix2cd rb;
    if (ia) {
        std::array<size_t, 1> qs{static_cast<size_t>(position_[a])};
        ra = reduced_density_matrix(block_, qs);
    } else {
        ra = local_rho(a);
    }
    if (ib) {
        std::array<size_t, 1> qs{static_cast<size_t>(position_[b])};
        rb = reduced_density_matrix(block_, qs);
    } else {
        rb = local_rho(b);
    }
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            out.block<2, 2>(2 * i, 2 * j) = ra(i, j) * rb;
        }
    }
    return out;
}

}  // namespace hamster
