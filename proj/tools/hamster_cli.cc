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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hamster/config.h"
#include "hamster/experiment.h"
#include "hamster/results_io.h"

using namespace hamster;

namespace {

void apply_overrides(ExperimentConfig &config, const std::vector<std::string> &sets) {
    for (const auto &kv : sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        }
        set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"hamster wheel teleportation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    bool exact = false;
    std::optional<uint64_t> seed;
    std::string out_path;
    std::string format;
    std::vector<std::string> sets;

    auto *run = app.add_subcommand("run", "sweep hop counts and emit results");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_flag("--exact", exact, "exact probabilities instead of sampled shots");
    run->add_option("--seed", seed, "override the seed");
    run->add_option("--out", out_path, "output path (default: stdout)");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--set", sets, "override a config key, key=value");

    double target = 0;
    size_t at_hops = 0;
    double p1_ratio = 0.1;
    double tolerance = 1e-3;
    auto *cal = app.add_subcommand("calibrate-noise", "fit p2 so the negativity at a hop count hits a target");
    cal->add_option("--target-negativity", target, "target negativity")->required();
    cal->add_option("--at-hops", at_hops, "hop count to fit at")->required();
    cal->add_option("--config", config_path, "base configuration file")->required();
    cal->add_option("--p1-ratio", p1_ratio, "p1 = ratio * p2");
    cal->add_option("--tolerance", tolerance, "negativity tolerance");
    cal->add_option("--set", sets, "override a config key, key=value");

    std::string convert_in;
    auto *conv = app.add_subcommand("convert", "re-emit a results file as csv or json");
    conv->add_option("input", convert_in, "results file")->required();
    conv->add_option("--format", format, "csv or json")->required()->check(CLI::IsMember({"csv", "json"}));
    conv->add_option("--out", out_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            ExperimentConfig config = load_config(config_path);
            apply_overrides(config, sets);
            if (exact) {
                config.exact = true;
            }
            if (seed) {
                config.seed = *seed;
            }
            if (!out_path.empty()) {
                config.output = out_path;
            }
            if (!format.empty()) {
                config.format = parse_output_format(format);
            }
            config.validate();
            auto rows = run_experiment(config);
            if (config.output.empty()) {
                std::cout << emit_results(config, rows, config.format);
            } else {
                write_results_file(config.output, config, rows, config.format);
            }
        } else if (*cal) {
            ExperimentConfig config = load_config(config_path);
            apply_overrides(config, sets);
            config.validate();
            NoiseFit fit = calibrate_noise(config, target, at_hops, p1_ratio, tolerance);
            config.noise = fit.model;
            std::cout << "# fitted at m = " << at_hops << ", negativity = " << fit.achieved_negativity << " after "
                      << fit.evaluations << " evaluations\n";
            std::cout << format_config(config);
        } else if (*conv) {
            ResultsFile file = parse_results(read_file(convert_in));
            std::string text = emit_results(file.config, file.rows, parse_output_format(format));
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out || !(out << text)) {
                    throw std::runtime_error("cannot write '" + out_path + "'");
                }
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
