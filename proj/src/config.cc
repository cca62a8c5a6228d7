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

#include "hamster/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hamster {

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

uint64_t parse_uint(const std::string &key, const std::string &text) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("field '" + key + "': expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

double parse_double(const std::string &key, const std::string &text) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("field '" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no") {
        return false;
    }
    throw std::invalid_argument("field '" + key + "': expected true or false, got '" + text + "'");
}

std::string exact_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

std::string to_string(OutputFormat format) {
    return format == OutputFormat::CSV ? "csv" : "json";
}

OutputFormat parse_output_format(const std::string &text) {
    if (text == "csv") {
        return OutputFormat::CSV;
    }
    if (text == "json") {
        return OutputFormat::JSON;
    }
    throw std::invalid_argument("unknown output format '" + text + "' (expected csv or json)");
}

std::vector<size_t> parse_hop_list(const std::string &text) {
    std::vector<size_t> hops;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        size_t dash = item.find('-');
        if (dash == std::string::npos) {
            hops.push_back(parse_uint("hops", item));
            continue;
        }
        uint64_t lo = parse_uint("hops", trim(item.substr(0, dash)));
        uint64_t hi = parse_uint("hops", trim(item.substr(dash + 1)));
        if (hi < lo) {
            throw std::invalid_argument("field 'hops': empty range '" + item + "'");
        }
        for (uint64_t m = lo; m <= hi; m++) {
            hops.push_back(m);
        }
    }
    if (hops.empty()) {
        throw std::invalid_argument("field 'hops': list is empty");
    }
    return hops;
}

std::string format_hop_list(const std::vector<size_t> &hops) {
    std::string out;
    for (size_t k = 0; k < hops.size(); k++) {
        out += (k ? "," : "") + std::to_string(hops[k]);
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (n < 3 || n > MAX_QUBITS) {
        throw std::invalid_argument("field 'n': must be in [3, " + std::to_string(MAX_QUBITS) + "]");
    }
    if (hops.empty()) {
        throw std::invalid_argument("field 'hops': list is empty");
    }
    if (shots == 0) {
        throw std::invalid_argument("field 'shots': must be positive");
    }
    if (trajectories == 0) {
        throw std::invalid_argument("field 'trajectories': must be positive");
    }
    if (bootstrap < 2) {
        throw std::invalid_argument("field 'bootstrap': must be at least 2");
    }
    if (threads == 0) {
        throw std::invalid_argument("field 'threads': must be positive");
    }
    noise.validate();
}

void set_config_value(ExperimentConfig &c, const std::string &key, const std::string &raw) {
    std::string value = trim(raw);
    if (key == "n") {
        c.n = parse_uint(key, value);
    } else if (key == "hops") {
        c.hops = parse_hop_list(value);
    } else if (key == "mode") {
        c.mode = parse_correction_mode(value);
    } else if (key == "shots") {
        c.shots = parse_uint(key, value);
    } else if (key == "trajectories") {
        c.trajectories = parse_uint(key, value);
    } else if (key == "bootstrap") {
        c.bootstrap = parse_uint(key, value);
    } else if (key == "seed") {
        c.seed = parse_uint(key, value);
    } else if (key == "output") {
        c.output = value;
    } else if (key == "format") {
        c.format = parse_output_format(value);
    } else if (key == "exact") {
        c.exact = parse_bool(key, value);
    } else if (key == "calibration_shots") {
        c.calibration_shots = parse_uint(key, value);
    } else if (key == "record_timing") {
        c.record_timing = parse_bool(key, value);
    } else if (key == "threads") {
        c.threads = parse_uint(key, value);
    } else if (key == "p1") {
        c.noise.p1 = parse_double(key, value);
    } else if (key == "p2") {
        c.noise.p2 = parse_double(key, value);
    } else if (key == "eps01") {
        c.noise.eps01 = parse_double(key, value);
    } else if (key == "eps10") {
        c.noise.eps10 = parse_double(key, value);
    } else if (key == "reset_flip") {
        c.noise.reset_flip = parse_double(key, value);
    } else if (key == "midcircuit_readout_errors") {
        c.noise.midcircuit_readout_errors = parse_bool(key, value);
    } else {
        throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
}

ExperimentConfig parse_config(const std::string &text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            set_config_value(config, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig &c) {
    return {
        {"n", std::to_string(c.n)},
        {"hops", format_hop_list(c.hops)},
        {"mode", to_string(c.mode)},
        {"shots", std::to_string(c.shots)},
        {"trajectories", std::to_string(c.trajectories)},
        {"bootstrap", std::to_string(c.bootstrap)},
        {"seed", std::to_string(c.seed)},
        {"output", c.output},
        {"format", to_string(c.format)},
        {"exact", c.exact ? "true" : "false"},
        {"calibration_shots", std::to_string(c.calibration_shots)},
        {"record_timing", c.record_timing ? "true" : "false"},
        {"threads", std::to_string(c.threads)},
        {"p1", exact_double(c.noise.p1)},
        {"p2", exact_double(c.noise.p2)},
        {"eps01", exact_double(c.noise.eps01)},
        {"eps10", exact_double(c.noise.eps10)},
        {"reset_flip", exact_double(c.noise.reset_flip)},
        {"midcircuit_readout_errors", c.noise.midcircuit_readout_errors ? "true" : "false"},
    };
}

std::string format_config(const ExperimentConfig &config) {
    std::string out;
    for (const auto &[k, v] : config_entries(config)) {
        out += k + " = " + v + "\n";
    }
    return out;
}

}  // namespace hamster
