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

#ifndef HAMSTER_CONFIG_H
#define HAMSTER_CONFIG_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hamster/noise.h"
#include "hamster/protocol.h"

namespace hamster {

enum class OutputFormat { CSV, JSON };

struct ExperimentConfig {
    size_t n = 20;
    std::vector<size_t> hops{9, 18, 56};
    CorrectionMode mode = CorrectionMode::DYNAMIC;
    uint64_t shots = 1000;         // per tomography setting
    uint64_t trajectories = 200;   // noise trajectories per hop count
    NoiseModel noise;
    uint64_t bootstrap = 200;      // bootstrap resample count
    uint64_t seed = 1;
    std::string output;            // empty: standard output
    OutputFormat format = OutputFormat::CSV;
    bool exact = false;            // exact probabilities instead of sampled shots
    uint64_t calibration_shots = 0;  // 0: analytic calibration matrices
    bool record_timing = true;
    uint64_t threads = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    bool operator==(const ExperimentConfig &) const = default;
};

std::string to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string &text);

/// Parses `a,b,c` with optional inclusive ranges `a-b`.
std::vector<size_t> parse_hop_list(const std::string &text);
std::string format_hop_list(const std::vector<size_t> &hops);

/// Sets one key. Unknown keys and malformed values throw
/// std::invalid_argument.
void set_config_value(ExperimentConfig &config, const std::string &key, const std::string &value);

/// Flat `key = value` text; `#` starts a comment. Errors carry the line number.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// Canonical key/value listing. Feeding it back through set_config_value
/// reproduces the configuration exactly.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig &config);
std::string format_config(const ExperimentConfig &config);

}  // namespace hamster

#endif
