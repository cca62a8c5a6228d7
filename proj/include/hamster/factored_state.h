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

#ifndef HAMSTER_FACTORED_STATE_H
#define HAMSTER_FACTORED_STATE_H

#include <array>
#include <initializer_list>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hamster/state_vector.h"

namespace hamster {

/// A pure state stored as one dense entangled block plus single-qubit product
/// factors for every qubit outside the block.
///
/// Qubits join the block when a two-qubit gate first touches them and leave it
/// when they are measured, since a projective measurement leaves the measured
/// qubit in a product state. The represented state is always exactly the
/// state of the full register; only the storage is factored. This keeps the
/// dense block no larger than the set of qubits that are actually entangled at
/// any moment.
///
/// Gates are queued and only applied once a measurement or query needs them,
/// so a qubit joins the block as late as possible.
class FactoredState {
   public:
    explicit FactoredState(size_t num_qubits);

    size_t num_qubits() const {
        return position_.size();
    }
    /// Applies every queued gate.
    void flush() const;
    /// Number of qubits currently held in the dense block (queued gates are
    /// not counted until applied).
    size_t block_size() const {
        return block_.num_qubits();
    }
    bool in_block(size_t q) const {
        return position_[q] >= 0;
    }

    void apply(const Gate &gate);
    bool measure(size_t q, Basis basis, std::optional<bool> forced, Rng &rng);
    bool reset(size_t q, Rng &rng);

    /// Full 2^n statevector in canonical qubit order.
    StateVector global_state() const;

    /// Reduced density matrix of the ordered pair (a, b); a is the most
    /// significant index.
    Eigen::Matrix4cd pair_density(size_t a, size_t b) const;

   private:
    void check_qubit(size_t q) const;
    void attach(size_t q) const;
    void apply_now(const Gate &gate) const;
    void materialize(std::initializer_list<size_t> qubits) const;

    // Storage is mutable because applying queued gates does not change the
    // represented state.
    mutable StateVector block_;
    mutable std::vector<int> position_;    // block position per qubit, -1 when detached
    mutable std::vector<size_t> members_;  // qubit held at each block position
    mutable std::vector<std::array<Complex, 2>> local_;  // factor for detached qubits
    mutable std::vector<Gate> pending_;
};

}  // namespace hamster

#endif
