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

#include "hamster/protocol.h"

#include <algorithm>
#include <stdexcept>

namespace hamster {

namespace {

constexpr double INV_SQRT2 = 0.70710678118654752440;

GateKind pauli_gate(Pauli p) {
    switch (p) {
        case Pauli::X:
            return GateKind::X;
        case Pauli::Y:
            return GateKind::Y;
        case Pauli::Z:
            return GateKind::Z;
        case Pauli::I:
            break;
    }
    throw std::logic_error("identity has no gate");
}

// Applies a gate followed by the model's fault draw for that gate.
void noisy_gate(ProtocolRun &run, const Gate &gate, Rng &rng) {
    run.state.apply(gate);
    const NoiseModel &noise = run.config.noise;
    if (noise.is_noiseless()) {
        return;
    }
    GateFault fault = sample_gate_fault(noise, static_cast<int>(gate.arity()), rng);
    for (size_t k = 0; k < gate.arity(); k++) {
        if (fault.paulis[k] != Pauli::I) {
            run.state.apply(Gate::single(pauli_gate(fault.paulis[k]), gate.targets[k]));
        }
    }
}

void noisy_reset(ProtocolRun &run, size_t q, Rng &rng) {
    run.state.reset(q, rng);
    const NoiseModel &noise = run.config.noise;
    if (noise.is_noiseless()) {
        return;
    }
    if (uniform01(rng) < noise.reset_flip) {
        run.state.apply(Gate::single(GateKind::X, q));
    }
    GateFault fault = sample_gate_fault(noise, 1, rng);
    if (!fault.is_identity()) {
        run.state.apply(Gate::single(pauli_gate(fault.paulis[0]), q));
    }
}

size_t links_for_leg(const ProtocolRun &run) {
    size_t leg = run.config.n - 2;
    size_t hops = run.hops();
    if (run.config.m > hops) {
        return std::min(leg, run.config.m - hops);
    }
    return leg;
}

}  // namespace

std::string to_string(CorrectionMode mode) {
    return mode == CorrectionMode::DYNAMIC ? "dynamic" : "post_selection";
}

CorrectionMode parse_correction_mode(const std::string &text) {
    if (text == "dynamic") {
        return CorrectionMode::DYNAMIC;
    }
    if (text == "post_selection") {
        return CorrectionMode::POST_SELECTION;
    }
    throw std::invalid_argument("unknown correction mode '" + text + "' (expected dynamic or post_selection)");
}

void WheelConfig::validate() const {
    if (n < 3 || n > MAX_QUBITS) {
        throw std::invalid_argument("wheel needs 3 <= n <= " + std::to_string(MAX_QUBITS) + " qubits");
    }
    noise.validate();
}

void MeasurementRecord::push(bool outcome) {
    outcomes_.push_back(outcome ? 1 : 0);
    // Hop index is 1-based: odd hops feed c_Z, even hops feed c_X.
    if (outcomes_.size() % 2 == 1) {
        c_z_ ^= outcome;
    } else {
        c_x_ ^= outcome;
    }
}

Discriminator discriminator(std::span<const uint8_t> outcomes) {
    Discriminator d;
    for (size_t k = 0; k < outcomes.size(); k++) {
        bool s = outcomes[k] != 0;
        if (k % 2 == 0) {
            d.z ^= s;
        } else {
            d.x ^= s;
        }
    }
    return d;
}

Discriminator discriminator(const MeasurementRecord &record) {
    return discriminator(std::span<const uint8_t>(record.outcomes()));
}

Eigen::Matrix2cd ByproductOperator::matrix() const {
    Eigen::Matrix2cd h;
    h << INV_SQRT2, INV_SQRT2, INV_SQRT2, -INV_SQRT2;
    Eigen::Matrix2cd z;
    z << 1, 0, 0, -1;
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
    if (h_parity) {
        u = u * h;
    }
    if (z_power) {
        u = u * z;
    }
    if (x_power) {
        u = u * x;
    }
    return u;
}

Eigen::Matrix2cd ByproductOperator::correction() const {
    return matrix().adjoint();
}

std::string ByproductOperator::name() const {
    if (is_identity()) {
        return "I";
    }
    std::string s;
    auto add = [&](const char *g) {
        if (!s.empty()) {
            s += "*";
        }
        s += g;
    };
    if (h_parity) {
        add("H");
    }
    if (z_power) {
        add("Z");
    }
    if (x_power) {
        add("X");
    }
    return s;
}

ByproductOperator byproduct_for(size_t m, Discriminator d) {
    return ByproductOperator{m % 2 == 1, d.z, d.x};
}

size_t final_holder(size_t m, size_t n) {
    if (n < 3) {
        throw std::invalid_argument("wheel needs at least 3 qubits");
    }
    return m % (n - 1) + 1;
}

size_t regeneration_count(size_t m, size_t n) {
    size_t leg = n - 2;
    if (m <= leg) {
        return 0;
    }
    return (m - leg + leg - 1) / leg;
}

StateVector build_initial_state(size_t n) {
    if (n < 3) {
        throw std::invalid_argument("initial chain needs n >= 3; use build_graph_state for the pair");
    }
    return build_graph_state(Graph::path(n));
}

ProtocolRun start_protocol(const WheelConfig &config, Rng &rng) {
    config.validate();
    ProtocolRun run(config);
    size_t links = std::min(config.n - 2, config.m);
    size_t last = 1 + links;
    for (size_t q = 0; q <= last; q++) {
        noisy_gate(run, Gate::single(GateKind::H, q), rng);
    }
    for (size_t q = 0; q < last; q++) {
        noisy_gate(run, Gate::cz(q, q + 1), rng);
    }
    run.holder = 1;
    for (size_t q = 2; q <= last; q++) {
        run.chain.push_back(q);
    }
    return run;
}

void regenerate_wheel(ProtocolRun &run, Rng &rng, std::optional<size_t> links) {
    if (!run.chain.empty()) {
        throw std::logic_error("regenerate_wheel called while the current chain still has qubits");
    }
    size_t count = std::min(links.value_or(run.leg_measured.size()), run.leg_measured.size());
    if (count == 0) {
        throw std::logic_error("no measured ring qubits available to regenerate the wheel");
    }
    std::vector<size_t> fresh(run.leg_measured.begin(), run.leg_measured.begin() + count);
    for (size_t q : fresh) {
        noisy_reset(run, q, rng);
    }
    for (size_t q : fresh) {
        noisy_gate(run, Gate::single(GateKind::H, q), rng);
    }
    size_t prev = run.holder;
    for (size_t q : fresh) {
        noisy_gate(run, Gate::cz(prev, q), rng);
        prev = q;
    }
    run.chain.assign(fresh.begin(), fresh.end());
    run.leg_measured.clear();
    run.regenerations++;
}

void perform_hop(ProtocolRun &run, std::optional<bool> forced, Rng &rng) {
    if (run.corrected) {
        throw std::logic_error("cannot hop after the final correction was applied");
    }
    if (run.chain.empty()) {
        regenerate_wheel(run, rng, links_for_leg(run));
    }
    const NoiseModel &noise = run.config.noise;
    bool outcome = run.state.measure(run.holder, Basis::X, forced, rng);
    if (!noise.is_noiseless() && noise.midcircuit_readout_errors) {
        outcome = corrupt_readout(outcome, noise.eps01, noise.eps10, rng);
    }
    run.record.push(outcome);
    run.leg_measured.push_back(run.holder);
    run.holder = run.chain.front();
    run.chain.pop_front();
}

void apply_correction(ProtocolRun &run, Rng &rng) {
    if (run.corrected) {
        return;
    }
    ByproductOperator b = byproduct_for(run.hops(), discriminator(run.record));
    // (H^h Z^z X^x)^dagger = X^x Z^z H^h: H acts first.
    if (b.h_parity) {
        noisy_gate(run, Gate::single(GateKind::H, run.holder), rng);
    }
    if (b.z_power) {
        noisy_gate(run, Gate::single(GateKind::Z, run.holder), rng);
    }
    if (b.x_power) {
        noisy_gate(run, Gate::single(GateKind::X, run.holder), rng);
    }
    run.corrected = true;
}

ProtocolRun run_protocol(const WheelConfig &config, Rng &rng, std::span<const uint8_t> forced) {
    if (!forced.empty() && forced.size() != config.m) {
        throw std::invalid_argument("forced outcome string must have exactly m entries");
    }
    ProtocolRun run = start_protocol(config, rng);
    for (size_t k = 0; k < config.m; k++) {
        std::optional<bool> f;
        if (!forced.empty()) {
            f = forced[k] != 0;
        }
        perform_hop(run, f, rng);
    }
    if (config.correction_mode == CorrectionMode::DYNAMIC) {
        apply_correction(run, rng);
    }
    return run;
}

ProtocolRun run_protocol(const WheelConfig &config) {
    Rng rng = derive_stream(config.seed, {});
    return run_protocol(config, rng);
}

Eigen::Vector4cd two_qubit_graph_state() {
    Eigen::Vector4cd v;
    v << 0.5, 0.5, 0.5, -0.5;
    return v;
}

Eigen::Vector4cd byproduct_state(size_t m, Discriminator d) {
    Eigen::Matrix2cd u = byproduct_for(m, d).matrix();
    Eigen::Matrix4cd full = Eigen::Matrix4cd::Zero();
    full.block<2, 2>(0, 0) = u;
    full.block<2, 2>(2, 2) = u;
    return full * two_qubit_graph_state();
}

}  // namespace hamster
