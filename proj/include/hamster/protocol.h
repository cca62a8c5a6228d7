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

#ifndef HAMSTER_PROTOCOL_H
#define HAMSTER_PROTOCOL_H

#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamster/factored_state.h"
#include "hamster/noise.h"
#include "hamster/state_vector.h"

namespace hamster {

enum class CorrectionMode { DYNAMIC, POST_SELECTION };

std::string to_string(CorrectionMode mode);
CorrectionMode parse_correction_mode(const std::string &text);

/// Qubit 0 is the axis; qubits 1..n-1 form the ring. Qubit 1 holds the
/// teleported half of the pair at the start.
struct WheelConfig {
    size_t n = 20;
    size_t m = 0;
    CorrectionMode correction_mode = CorrectionMode::DYNAMIC;
    NoiseModel noise;
    uint64_t seed = 0;

    void validate() const;
};

/// Parity pair (odd-hop parity, even-hop parity) of the outcome record.
struct Discriminator {
    bool z = false;
    bool x = false;

    auto operator<=>(const Discriminator &) const = default;
    int index() const {
        return (z ? 2 : 0) + (x ? 1 : 0);
    }
};

/// Outcome bits s_1..s_m with the running parity registers. c_Z accumulates
/// odd-indexed hops and c_X even-indexed hops (hops are 1-indexed).
class MeasurementRecord {
   public:
    void push(bool outcome);

    size_t size() const {
        return outcomes_.size();
    }
    const std::vector<uint8_t> &outcomes() const {
        return outcomes_;
    }
    bool c_z() const {
        return c_z_;
    }
    bool c_x() const {
        return c_x_;
    }

   private:
    std::vector<uint8_t> outcomes_;
    bool c_z_ = false;
    bool c_x_ = false;
};

Discriminator discriminator(const MeasurementRecord &record);
Discriminator discriminator(std::span<const uint8_t> outcomes);

/// H^h Z^z X^x acting on the teleported qubit.
struct ByproductOperator {
    bool h_parity = false;
    bool z_power = false;
    bool x_power = false;

    bool operator==(const ByproductOperator &) const = default;

    bool is_identity() const {
        return !h_parity && !z_power && !x_power;
    }
    Eigen::Matrix2cd matrix() const;
    /// The adjoint X^x Z^z H^h, which undoes the byproduct.
    Eigen::Matrix2cd correction() const;
    std::string name() const;
};

ByproductOperator byproduct_for(size_t m, Discriminator d);

/// Qubit holding the teleported half after m hops on an n-qubit wheel:
/// (m mod (n - 1)) + 1.
size_t final_holder(size_t m, size_t n);

/// Number of wheel regenerations performed by a run of m hops.
size_t regeneration_count(size_t m, size_t n);

/// Path graph state on qubits 0-1-...-(n-1), n >= 3.
StateVector build_initial_state(size_t n);

struct ProtocolRun {
    WheelConfig config;
    MeasurementRecord record;
    size_t holder = 1;
    FactoredState state;
    std::deque<size_t> chain;           // entangled successors of the holder, in hop order
    std::vector<size_t> leg_measured;   // ring qubits measured this leg, in order
    size_t regenerations = 0;
    bool corrected = false;

    explicit ProtocolRun(const WheelConfig &cfg) : config(cfg), state(cfg.n) {}

    size_t hops() const {
        return record.size();
    }
    /// Reduced density matrix of (axis, holder).
    Eigen::Matrix4cd teleported_density() const {
        return state.pair_density(0, holder);
    }
    /// Full n-qubit statevector (canonical ordering).
    StateVector final_state() const {
        return state.global_state();
    }
};

/// Prepares the initial chain. Only the ring qubits the first leg will use
/// (min(n - 2, m) links past qubit 1) are entangled; the rest stay in |0>.
ProtocolRun start_protocol(const WheelConfig &config, Rng &rng);

/// One teleportation hop: X-measures the holder and advances to its chain
/// successor, regenerating the wheel first when the chain is exhausted.
void perform_hop(ProtocolRun &run, std::optional<bool> forced, Rng &rng);

/// Resets the qubits measured during the last leg, rotates them to |+>, and
/// CZ-chains them onto the holder in measurement order. `links` limits how
/// many are re-entangled; by default all of them are.
void regenerate_wheel(ProtocolRun &run, Rng &rng, std::optional<size_t> links = std::nullopt);

/// Applies the adjoint byproduct to the holder.
void apply_correction(ProtocolRun &run, Rng &rng);

/// Full run with a stream derived from config.seed.
ProtocolRun run_protocol(const WheelConfig &config);

/// Full run on the given stream. `forced`, when non-empty, fixes the true
/// outcome of each hop and must have exactly config.m entries.
ProtocolRun run_protocol(const WheelConfig &config, Rng &rng, std::span<const uint8_t> forced = {});

/// (I (x) H^m Z^z X^x)|phi(P2)>.
Eigen::Vector4cd byproduct_state(size_t m, Discriminator d);

/// The two-qubit graph state (|00> + |01> + |10> - |11>) / 2.
Eigen::Vector4cd two_qubit_graph_state();

}  // namespace hamster

#endif
