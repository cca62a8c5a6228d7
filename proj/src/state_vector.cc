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

#include "hamster/state_vector.h"

#include <cmath>
#include <stdexcept>

namespace hamster {

namespace {

constexpr double INV_SQRT2 = 0.70710678118654752440;
constexpr Complex I_UNIT{0.0, 1.0};

// Eigenvector of the +1 (index 0) and -1 (index 1) eigenvalue for each basis.
std::array<Complex, 2> eigenvector(Basis basis, bool outcome) {
    switch (basis) {
        case Basis::Z:
            return outcome ? std::array<Complex, 2>{0.0, 1.0} : std::array<Complex, 2>{1.0, 0.0};
        case Basis::X:
            return {INV_SQRT2, outcome ? -INV_SQRT2 : INV_SQRT2};
        case Basis::Y:
            return {INV_SQRT2, outcome ? -I_UNIT * INV_SQRT2 : I_UNIT * INV_SQRT2};
    }
    throw std::invalid_argument("unknown basis");
}

// Single-qubit change of basis taking the eigenbasis of `basis` to Z.
Eigen::Matrix2cd basis_rotation(Basis basis) {
    Eigen::Matrix2cd u;
    switch (basis) {
        case Basis::Z:
            u = Eigen::Matrix2cd::Identity();
            break;
        case Basis::X:
            u << INV_SQRT2, INV_SQRT2, INV_SQRT2, -INV_SQRT2;
            break;
        case Basis::Y:
            // H * S^dagger
            u << INV_SQRT2, -I_UNIT * INV_SQRT2, INV_SQRT2, I_UNIT * INV_SQRT2;
            break;
    }
    return u;
}

}  // namespace

char basis_name(Basis b) {
    switch (b) {
        case Basis::X:
            return 'X';
        case Basis::Y:
            return 'Y';
        case Basis::Z:
            return 'Z';
    }
    return '?';
}

Basis parse_basis(char c) {
    switch (c) {
        case 'X':
            return Basis::X;
        case 'Y':
            return Basis::Y;
        case 'Z':
            return Basis::Z;
    }
    throw std::invalid_argument(std::string("invalid basis label '") + c + "'");
}

Gate Gate::single(GateKind kind, size_t q) {
    if (kind == GateKind::CZ) {
        throw std::invalid_argument("CZ needs two targets");
    }
    return Gate{kind, {q, q}};
}

Gate Gate::cz(size_t a, size_t b) {
    return Gate{GateKind::CZ, {a, b}};
}

void Gate::validate(size_t num_qubits) const {
    for (size_t k = 0; k < arity(); k++) {
        if (targets[k] >= num_qubits) {
            throw std::invalid_argument(
                "gate target " + std::to_string(targets[k]) + " out of range for " +
                std::to_string(num_qubits) + " qubits");
        }
    }
    if (kind == GateKind::CZ && targets[0] == targets[1]) {
        throw std::invalid_argument("CZ targets must be distinct");
    }
}

void Graph::validate() const {
    for (size_t k = 0; k < edges.size(); k++) {
        auto [u, v] = edges[k];
        if (u == v || u >= vertex_count || v >= vertex_count) {
            throw std::invalid_argument("invalid edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
        }
        for (size_t j = 0; j < k; j++) {
            auto [a, b] = edges[j];
            if ((a == u && b == v) || (a == v && b == u)) {
                throw std::invalid_argument("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
            }
        }
    }
}

Graph Graph::path(size_t vertex_count) {
    Graph g{vertex_count, {}};
    for (size_t v = 0; v + 1 < vertex_count; v++) {
        g.edges.emplace_back(v, v + 1);
    }
    return g;
}

StateVector::StateVector(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > MAX_QUBITS) {
        throw std::invalid_argument("at most " + std::to_string(MAX_QUBITS) + " qubits are supported");
    }
    amplitudes_.assign(size_t{1} << num_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    size_t n = 0;
    while ((size_t{1} << n) < amplitudes.size()) {
        n++;
    }
    if ((size_t{1} << n) != amplitudes.size() || n > MAX_QUBITS) {
        throw std::invalid_argument("amplitude count must be a power of two");
    }
    StateVector result(0);
    result.num_qubits_ = n;
    result.amplitudes_ = std::move(amplitudes);
    return result;
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::check_qubit(size_t q) const {
    if (q >= num_qubits_) {
        throw std::invalid_argument(
            "qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) + " qubits");
    }
}

template <typename BODY>
static inline void for_each_pair(std::vector<Complex> &amps, size_t b, BODY body) {
    size_t dim = amps.size();
    for (size_t base = 0; base < dim; base += 2 * b) {
        for (size_t i = base; i < base + b; i++) {
            body(amps[i], amps[i + b]);
        }
    }
}

void StateVector::apply(const Gate &gate) {
    gate.validate(num_qubits_);
    switch (gate.kind) {
        case GateKind::H:
            for_each_pair(amplitudes_, bit(gate.targets[0]), [](Complex &a0, Complex &a1) {
                Complex s = a0 + a1;
                Complex d = a0 - a1;
                a0 = s * INV_SQRT2;
                a1 = d * INV_SQRT2;
            });
            break;
        case GateKind::X:
            for_each_pair(amplitudes_, bit(gate.targets[0]), [](Complex &a0, Complex &a1) {
                std::swap(a0, a1);
            });
            break;
        case GateKind::Y:
            for_each_pair(amplitudes_, bit(gate.targets[0]), [](Complex &a0, Complex &a1) {
                Complex t0{a1.imag(), -a1.real()};  // -i * a1
                Complex t1{-a0.imag(), a0.real()};  // i * a0
                a0 = t0;
                a1 = t1;
            });
            break;
        case GateKind::Z:
            for_each_pair(amplitudes_, bit(gate.targets[0]), [](Complex &, Complex &a1) {
                a1 = -a1;
            });
            break;
        case GateKind::S:
            for_each_pair(amplitudes_, bit(gate.targets[0]), [](Complex &, Complex &a1) {
                a1 = Complex{-a1.imag(), a1.real()};
            });
            break;
        case GateKind::SDG:
            for_each_pair(amplitudes_, bit(gate.targets[0]), [](Complex &, Complex &a1) {
                a1 = Complex{a1.imag(), -a1.real()};
            });
            break;
        case GateKind::CZ: {
            size_t b0 = bit(gate.targets[0]);
            size_t b1 = bit(gate.targets[1]);
            size_t hi = std::max(b0, b1);
            size_t lo = std::min(b0, b1);
            size_t dim = amplitudes_.size();
            for (size_t a = hi; a < dim; a += 2 * hi) {
                for (size_t b = a + lo; b < a + hi; b += 2 * lo) {
                    for (size_t c = b; c < b + lo; c++) {
                        amplitudes_[c] = -amplitudes_[c];
                    }
                }
            }
            break;
        }
    }
}

void StateVector::apply_single(size_t q, const std::array<Complex, 4> &m) {
    check_qubit(q);
    for_each_pair(amplitudes_, bit(q), [&](Complex &a0, Complex &a1) {
        Complex n0 = m[0] * a0 + m[1] * a1;
        Complex n1 = m[2] * a0 + m[3] * a1;
        a0 = n0;
        a1 = n1;
    });
}

double StateVector::probability_of_one(size_t q, Basis basis) const {
    check_qubit(q);
    auto e = eigenvector(basis, true);
    Complex c0 = std::conj(e[0]);
    Complex c1 = std::conj(e[1]);
    size_t b = bit(q);
    double total = 0;
    size_t dim = amplitudes_.size();
    if (basis == Basis::Z) {
        for (size_t base = b; base < dim; base += 2 * b) {
            for (size_t i = base; i < base + b; i++) {
                total += std::norm(amplitudes_[i]);
            }
        }
        return total;
    }
    for (size_t base = 0; base < dim; base += 2 * b) {
        for (size_t i = base; i < base + b; i++) {
            total += std::norm(c0 * amplitudes_[i] + c1 * amplitudes_[i + b]);
        }
    }
    return total;
}

bool StateVector::choose_outcome(double p1, std::optional<bool> forced, Rng &rng) const {
    constexpr double MIN_FORCED_PROBABILITY = 1e-14;
    if (forced.has_value()) {
        double p = *forced ? p1 : 1.0 - p1;
        if (p < MIN_FORCED_PROBABILITY) {
            throw std::invalid_argument("forced measurement outcome has zero probability");
        }
        return *forced;
    }
    return uniform01(rng) < p1;
}

bool StateVector::measure(size_t q, Basis basis, std::optional<bool> forced, Rng &rng) {
    double p1 = probability_of_one(q, basis);
    bool outcome = choose_outcome(p1, forced, rng);
    double p = outcome ? p1 : 1.0 - p1;
    double scale = 1.0 / std::sqrt(p);
    auto e = eigenvector(basis, outcome);
    Complex c0 = std::conj(e[0]);
    Complex c1 = std::conj(e[1]);
    Complex u0 = e[0] * scale;
    Complex u1 = e[1] * scale;
    for_each_pair(amplitudes_, bit(q), [&](Complex &a0, Complex &a1) {
        Complex c = c0 * a0 + c1 * a1;
        a0 = u0 * c;
        a1 = u1 * c;
    });
    return outcome;
}

bool StateVector::reset(size_t q, Rng &rng) {
    bool outcome = measure(q, Basis::Z, std::nullopt, rng);
    if (outcome) {
        apply(Gate::single(GateKind::X, q));
    }
    return outcome;
}

bool StateVector::measure_and_remove(size_t q, Basis basis, std::optional<bool> forced, Rng &rng) {
    double p1 = probability_of_one(q, basis);
    bool outcome = choose_outcome(p1, forced, rng);
    double p = outcome ? p1 : 1.0 - p1;
    double scale = 1.0 / std::sqrt(p);
    auto e = eigenvector(basis, outcome);
    Complex c0 = std::conj(e[0]) * scale;
    Complex c1 = std::conj(e[1]) * scale;
    size_t b = bit(q);
    size_t dim = amplitudes_.size();
    std::vector<Complex> next(dim / 2);
    size_t j = 0;
    for (size_t base = 0; base < dim; base += 2 * b) {
        for (size_t i = base; i < base + b; i++) {
            next[j++] = c0 * amplitudes_[i] + c1 * amplitudes_[i + b];
        }
    }
    amplitudes_ = std::move(next);
    num_qubits_--;
    return outcome;
}

void StateVector::append_qubit(const std::array<Complex, 2> &factor) {
    if (num_qubits_ + 1 > MAX_QUBITS) {
        throw std::invalid_argument("register is full");
    }
    size_t dim = amplitudes_.size();
    std::vector<Complex> next(2 * dim);
    for (size_t i = 0; i < dim; i++) {
        next[2 * i] = amplitudes_[i] * factor[0];
        next[2 * i + 1] = amplitudes_[i] * factor[1];
    }
    amplitudes_ = std::move(next);
    num_qubits_++;
}

StateVector zero_state(size_t n) {
    if (n < 1 || n > MAX_QUBITS) {
        throw std::invalid_argument("qubit count must be in [1, " + std::to_string(MAX_QUBITS) + "]");
    }
    return StateVector(n);
}

StateVector apply_gate(StateVector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

StateVector build_graph_state(const Graph &graph) {
    graph.validate();
    StateVector state = zero_state(graph.vertex_count);
    for (size_t v = 0; v < graph.vertex_count; v++) {
        state.apply(Gate::single(GateKind::H, v));
    }
    for (auto [u, v] : graph.edges) {
        state.apply(Gate::cz(u, v));
    }
    return state;
}

Eigen::MatrixXcd reduced_density_matrix(const StateVector &state, std::span<const size_t> qubits) {
    size_t n = state.num_qubits();
    size_t k = qubits.size();
    std::vector<bool> kept(n, false);
    for (size_t q : qubits) {
        if (q >= n) {
            throw std::invalid_argument("qubit " + std::to_string(q) + " out of range");
        }
        if (kept[q]) {
            throw std::invalid_argument("duplicate qubit index " + std::to_string(q));
        }
        kept[q] = true;
    }
    size_t sub_dim = size_t{1} << k;
    size_t rest_dim = size_t{1} << (n - k);

    // Bit shift of each qubit in the full index (MSB ordering).
    std::vector<size_t> kept_shift;
    for (size_t q : qubits) {
        kept_shift.push_back(n - 1 - q);
    }
    std::vector<size_t> rest_shift;
    for (size_t q = 0; q < n; q++) {
        if (!kept[q]) {
            rest_shift.push_back(n - 1 - q);
        }
    }

    Eigen::MatrixXcd columns(sub_dim, rest_dim);
    auto amps = state.amplitudes();
    for (size_t i = 0; i < amps.size(); i++) {
        size_t s = 0;
        for (size_t sh : kept_shift) {
            s = (s << 1) | ((i >> sh) & 1);
        }
        size_t r = 0;
        for (size_t sh : rest_shift) {
            r = (r << 1) | ((i >> sh) & 1);
        }
        columns(s, r) = amps[i];
    }
    Eigen::MatrixXcd rho = columns * columns.adjoint();
    return (rho + rho.adjoint()) * 0.5;
}

std::vector<double> exact_distribution(
    const StateVector &state, std::span<const size_t> qubits, std::span<const Basis> bases) {
    if (qubits.size() != bases.size()) {
        throw std::invalid_argument("need exactly one basis label per qubit");
    }
    Eigen::MatrixXcd rho = reduced_density_matrix(state, qubits);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
    for (Basis b : bases) {
        Eigen::Matrix2cd r = basis_rotation(b);
        Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
        for (Eigen::Index i = 0; i < u.rows(); i++) {
            for (Eigen::Index j = 0; j < u.cols(); j++) {
                next.block(i * 2, j * 2, 2, 2) = u(i, j) * r;
            }
        }
        u = next;
    }
    Eigen::MatrixXcd rotated = u * rho * u.adjoint();
    std::vector<double> probs(rotated.rows());
    for (Eigen::Index i = 0; i < rotated.rows(); i++) {
        probs[i] = std::max(0.0, rotated(i, i).real());
    }
    return probs;
}

double overlap_magnitude(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vector sizes differ");
    }
    Complex dot = 0;
    for (size_t i = 0; i < a.size(); i++) {
        dot += std::conj(a[i]) * b[i];
    }
    return std::abs(dot);
}

double distance_up_to_phase(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vector sizes differ");
    }
    Complex dot = 0;
    for (size_t i = 0; i < a.size(); i++) {
        dot += std::conj(a[i]) * b[i];
    }
    Complex phase = std::abs(dot) > 0 ? std::conj(dot) / std::abs(dot) : Complex(1);
    double d2 = 0;
    for (size_t i = 0; i < a.size(); i++) {
        d2 += std::norm(a[i] - phase * b[i]);
    }
    return std::sqrt(d2);
}

}  // namespace hamster
