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

#ifndef HAMSTER_STATE_VECTOR_H
#define HAMSTER_STATE_VECTOR_H

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hamster/rng.h"

namespace hamster {

using Complex = std::complex<double>;

constexpr size_t MAX_QUBITS = 24;

enum class GateKind { H, X, Y, Z, S, SDG, CZ };

/// Measurement / tomography basis for a single qubit.
enum class Basis { X, Y, Z };

char basis_name(Basis b);
Basis parse_basis(char c);

struct Gate {
    GateKind kind;
    std::array<size_t, 2> targets;

    static Gate single(GateKind kind, size_t q);
    static Gate cz(size_t a, size_t b);

    size_t arity() const {
        return kind == GateKind::CZ ? 2 : 1;
    }
    /// Throws std::invalid_argument unless the gate has the right number of
    /// distinct targets and all of them are below `num_qubits`.
    void validate(size_t num_qubits) const;
};

/// Simple undirected graph used to build graph states.
struct Graph {
    size_t vertex_count = 0;
    std::vector<std::pair<size_t, size_t>> edges;

    void validate() const;
    static Graph path(size_t vertex_count);
};

/// Dense statevector.
///
/// Qubit ordering: qubit 0 is the most significant bit of the amplitude index,
/// so for two qubits the amplitudes are ordered |00>, |01>, |10>, |11> with the
/// left label belonging to qubit 0. Every module uses this convention.
class StateVector {
   public:
    /// |0...0> on `num_qubits` qubits. Zero qubits is allowed internally and
    /// represents the scalar 1.
    explicit StateVector(size_t num_qubits);

    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t dimension() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    std::span<Complex> amplitudes() {
        return amplitudes_;
    }
    const Complex &operator[](size_t index) const {
        return amplitudes_[index];
    }

    double norm_squared() const;

    void apply(const Gate &gate);

    /// Applies an arbitrary 2x2 matrix (row-major) to qubit `q`.
    void apply_single(size_t q, const std::array<Complex, 4> &matrix);

    /// Probability that measuring `q` in `basis` yields outcome 1 (the -1
    /// eigenvalue).
    double probability_of_one(size_t q, Basis basis) const;

    /// Projective measurement in place. Outcome 0 is the +1 eigenstate
    /// (|0>, |+>, |+i>). With `forced` set the outcome is not sampled; a
    /// forced outcome with zero probability throws std::invalid_argument.
    bool measure(size_t q, Basis basis, std::optional<bool> forced, Rng &rng);

    bool measure_x(size_t q, std::optional<bool> forced, Rng &rng) {
        return measure(q, Basis::X, forced, rng);
    }
    bool measure_z(size_t q, std::optional<bool> forced, Rng &rng) {
        return measure(q, Basis::Z, forced, rng);
    }

    /// Measures in Z and flips to |0> on outcome 1. Returns the measured bit.
    bool reset(size_t q, Rng &rng);

    /// Measures `q` and removes it from the register, leaving the
    /// (num_qubits - 1)-qubit conditional state of the remaining qubits in their
    /// original relative order.
    bool measure_and_remove(size_t q, Basis basis, std::optional<bool> forced, Rng &rng);

    /// Tensors a new qubit in state `factor` onto the least significant end.
    void append_qubit(const std::array<Complex, 2> &factor);

   private:
    size_t bit(size_t q) const {
        return size_t{1} << (num_qubits_ - 1 - q);
    }
    void check_qubit(size_t q) const;
    bool choose_outcome(double p1, std::optional<bool> forced, Rng &rng) const;

    size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// |0...0> on 1 <= n <= MAX_QUBITS qubits.
StateVector zero_state(size_t n);

/// Returns a copy of `state` with `gate` applied.
StateVector apply_gate(StateVector state, const Gate &gate);

/// Product over edges of CZ applied to |+>^|V|.
StateVector build_graph_state(const Graph &graph);

/// Partial trace onto `qubits`, listed from most to least significant in the
/// output index. Indices must be distinct and valid.
Eigen::MatrixXcd reduced_density_matrix(const StateVector &state, std::span<const size_t> qubits);

/// Born-rule distribution of measuring `qubits[i]` in `bases[i]`, all other
/// qubits traced out. Output index ordering matches `qubits`.
std::vector<double> exact_distribution(
    const StateVector &state, std::span<const size_t> qubits, std::span<const Basis> bases);

/// |<a|b>|, the global-phase-insensitive overlap of two equal-size vectors.
double overlap_magnitude(std::span<const Complex> a, std::span<const Complex> b);

/// min over phases theta of || a - e^{i theta} b ||.
double distance_up_to_phase(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace hamster

#endif
