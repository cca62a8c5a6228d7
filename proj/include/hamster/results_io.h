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

#ifndef HAMSTER_RESULTS_IO_H
#define HAMSTER_RESULTS_IO_H

#include <string>
#include <utility>
#include <vector>

#include "hamster/config.h"
#include "hamster/experiment.h"

namespace hamster {

constexpr const char *CSV_HEADER = "m,mode,negativity,neg_err,fidelity,fid_err,trajectories,seconds";

struct ResultsFile {
    ExperimentConfig config;
    std::vector<ResultRow> rows;
};

/// Renders rows with a configuration echo. Reals are written with 6
/// significant digits.
std::string emit_results(const ExperimentConfig &config, const std::vector<ResultRow> &rows, OutputFormat format);

/// Writes to `path`, throwing std::runtime_error when it cannot be written.
void write_results_file(
    const std::string &path, const ExperimentConfig &config, const std::vector<ResultRow> &rows, OutputFormat format);

ResultsFile parse_results_csv(const std::string &text);
ResultsFile parse_results_json(const std::string &text);
ResultsFile parse_results(const std::string &text);  // detects the format

}  // namespace hamster

#endif
