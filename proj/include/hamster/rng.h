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

#ifndef HAMSTER_RNG_H
#define HAMSTER_RNG_H

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hamster {

/// Random stream used everywhere randomness is consumed. Every consumer takes
/// the stream explicitly so that trajectories are reproducible and can run in
/// parallel without sharing state.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Derives an independent stream from a base seed and a path of integer keys
/// (for example `{m, trajectory}`). The derivation is a splitmix64 chain, so the
/// same path always yields the same stream regardless of scheduling.
Rng derive_stream(uint64_t seed, std::initializer_list<uint64_t> path);

uint64_t splitmix64(uint64_t x);

}  // namespace hamster

#endif
