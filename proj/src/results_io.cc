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

#include "hamster/results_io.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hamster {

namespace {

using json = nlohmann::json;

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double round6(double v) {
    return std::stod(fmt6(v));
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

double parse_real(const std::string &text, size_t line_no) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception &) {
        throw std::invalid_argument("results line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
}

uint64_t parse_count(const std::string &text, size_t line_no) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("results line " + std::to_string(line_no) + ": bad integer '" + text + "'");
    }
    return std::stoull(text);
}

const char *CONFIG_PREFIX = "# config: ";
const char *VARIANT_PREFIX = "# variant: ";
const char *VARIANT_HEADER = "m,z,x,weight,shots,negativity,fidelity";

}  // namespace

std::string emit_results(const ExperimentConfig &config, const std::vector<ResultRow> &rows, OutputFormat format) {
    if (rows.empty()) {
        throw std::invalid_argument("no result rows to emit");
    }
    if (format == OutputFormat::JSON) {
        json out;
        json cfg = json::object();
        for (const auto &[k, v] : config_entries(config)) {
            cfg[k] = v;
        }
        out["config"] = cfg;
        json list = json::array();
        for (const auto &r : rows) {
            json row;
            row["m"] = r.m;
            row["mode"] = to_string(r.mode);
            row["negativity"] = round6(r.negativity);
            row["neg_err"] = round6(r.neg_err);
            row["fidelity"] = round6(r.fidelity);
            row["fid_err"] = round6(r.fid_err);
            row["trajectories"] = r.trajectories;
            row["seconds"] = round6(r.seconds);
            json variants = json::array();
            for (const auto &v : r.variants) {
                json jv;
                jv["z"] = v.discriminator.z ? 1 : 0;
                jv["x"] = v.discriminator.x ? 1 : 0;
                jv["weight"] = round6(v.weight);
                jv["shots"] = v.shots;
                jv["missing"] = v.missing;
                if (!v.missing) {
                    jv["negativity"] = round6(v.negativity);
                    jv["fidelity"] = round6(v.fidelity);
                }
                variants.push_back(jv);
            }
            row["variants"] = variants;
            list.push_back(row);
        }
        out["rows"] = list;
        return out.dump(2) + "\n";
    }

    std::ostringstream out;
    out << "# hamster wheel results\n";
    for (const auto &[k, v] : config_entries(config)) {
        out << CONFIG_PREFIX << k << " = " << v << "\n";
    }
    bool any_variants = false;
    for (const auto &r : rows) {
        any_variants = any_variants || !r.variants.empty();
    }
    if (any_variants) {
        out << VARIANT_PREFIX << VARIANT_HEADER << "\n";
        for (const auto &r : rows) {
            for (const auto &v : r.variants) {
                out << VARIANT_PREFIX << r.m << "," << (v.discriminator.z ? 1 : 0) << ","
                    << (v.discriminator.x ? 1 : 0) << "," << fmt6(v.weight) << "," << v.shots << ",";
                if (v.missing) {
                    out << "missing,missing\n";
                } else {
                    out << fmt6(v.negativity) << "," << fmt6(v.fidelity) << "\n";
                }
            }
        }
    }
    out << CSV_HEADER << "\n";
    for (const auto &r : rows) {
        out << r.m << "," << to_string(r.mode) << "," << fmt6(r.negativity) << "," << fmt6(r.neg_err) << ","
            << fmt6(r.fidelity) << "," << fmt6(r.fid_err) << "," << r.trajectories << "," << fmt6(r.seconds) << "\n";
    }
    return out.str();
}

void write_results_file(
    const std::string &path, const ExperimentConfig &config, const std::vector<ResultRow> &rows, OutputFormat format) {
    std::string text = emit_results(config, rows, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing results to '" + path + "'");
    }
}

ResultsFile parse_results_csv(const std::string &text) {
    ResultsFile file;
    std::vector<std::pair<size_t, VariantResult>> variants;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    bool header = false;
    bool variant_header = false;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.rfind(CONFIG_PREFIX, 0) == 0) {
            std::string body = line.substr(std::string(CONFIG_PREFIX).size());
            size_t eq = body.find(" = ");
            if (eq == std::string::npos) {
                throw std::invalid_argument("results line " + std::to_string(line_no) + ": malformed config echo");
            }
            set_config_value(file.config, body.substr(0, eq), body.substr(eq + 3));
            continue;
        }
        if (line.rfind(VARIANT_PREFIX, 0) == 0) {
            std::string body = line.substr(std::string(VARIANT_PREFIX).size());
            if (body == VARIANT_HEADER) {
                variant_header = true;
                continue;
            }
            if (!variant_header) {
                throw std::invalid_argument("results line " + std::to_string(line_no) + ": variant row before header");
            }
            auto f = split(body, ',');
            if (f.size() != 7) {
                throw std::invalid_argument("results line " + std::to_string(line_no) + ": variant row needs 7 fields");
            }
            VariantResult v;
            size_t m = parse_count(f[0], line_no);
            v.discriminator = {f[1] == "1", f[2] == "1"};
            v.weight = parse_real(f[3], line_no);
            v.shots = parse_count(f[4], line_no);
            v.missing = f[5] == "missing";
            if (!v.missing) {
                v.negativity = parse_real(f[5], line_no);
                v.fidelity = parse_real(f[6], line_no);
            }
            variants.emplace_back(m, v);
            continue;
        }
        if (line[0] == '#') {
            continue;
        }
        if (!header) {
            if (line != CSV_HEADER) {
                throw std::invalid_argument("results line " + std::to_string(line_no) + ": expected header '" +
                                            std::string(CSV_HEADER) + "'");
            }
            header = true;
            continue;
        }
        auto f = split(line, ',');
        if (f.size() != 8) {
            throw std::invalid_argument("results line " + std::to_string(line_no) + ": expected 8 fields");
        }
        ResultRow r;
        r.m = parse_count(f[0], line_no);
        r.mode = parse_correction_mode(f[1]);
        r.negativity = parse_real(f[2], line_no);
        r.neg_err = parse_real(f[3], line_no);
        r.fidelity = parse_real(f[4], line_no);
        r.fid_err = parse_real(f[5], line_no);
        r.trajectories = parse_count(f[6], line_no);
        r.seconds = parse_real(f[7], line_no);
        file.rows.push_back(r);
    }
    if (!header) {
        throw std::invalid_argument("results text has no column header");
    }
    // Variant rows are listed in row order; attach each to the next row with a matching m.
    size_t next = 0;
    for (auto &row : file.rows) {
        while (next < variants.size() && variants[next].first == row.m) {
            row.variants.push_back(variants[next].second);
            next++;
        }
    }
    if (next != variants.size()) {
        throw std::invalid_argument("variant rows do not match the result rows");
    }
    return file;
}

ResultsFile parse_results_json(const std::string &text) {
    json doc = json::parse(text);
    ResultsFile file;
    for (const auto &[k, v] : doc.at("config").items()) {
        set_config_value(file.config, k, v.get<std::string>());
    }
    for (const auto &jr : doc.at("rows")) {
        ResultRow r;
        r.m = jr.at("m").get<size_t>();
        r.mode = parse_correction_mode(jr.at("mode").get<std::string>());
        r.negativity = jr.at("negativity").get<double>();
        r.neg_err = jr.at("neg_err").get<double>();
        r.fidelity = jr.at("fidelity").get<double>();
        r.fid_err = jr.at("fid_err").get<double>();
        r.trajectories = jr.at("trajectories").get<uint64_t>();
        r.seconds = jr.at("seconds").get<double>();
        for (const auto &jv : jr.at("variants")) {
            VariantResult v;
            v.discriminator = {jv.at("z").get<int>() == 1, jv.at("x").get<int>() == 1};
            v.weight = jv.at("weight").get<double>();
            v.shots = jv.at("shots").get<uint64_t>();
            v.missing = jv.at("missing").get<bool>();
            if (!v.missing) {
                v.negativity = jv.at("negativity").get<double>();
                v.fidelity = jv.at("fidelity").get<double>();
            }
            r.variants.push_back(v);
        }
        file.rows.push_back(r);
    }
    return file;
}

ResultsFile parse_results(const std::string &text) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return parse_results_json(text);
    }
    return parse_results_csv(text);
}

}  // namespace hamster
