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

#include "hamster/tomography.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hamster {

namespace {

constexpr double INV_SQRT2 = 0.70710678118654752440;

Eigen::Matrix2cd pauli_matrix(int k) {
    Eigen::Matrix2cd p;
    const Complex i{0.0, 1.0};
    switch (k) {
        case 0:
            p << 1, 0, 0, 1;
            break;
        case 1:
            p << 0, 1, 1, 0;
            break;
        case 2:
            p << 0, -i, i, 0;
            break;
        default:
            p << 1, 0, 0, -1;
            break;
    }
    return p;
}

int pauli_index(Basis b) {
    switch (b) {
        case Basis::X:
            return 1;
        case Basis::Y:
            return 2;
        case Basis::Z:
            return 3;
    }
    return 0;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

Eigen::Matrix2cd rotation_to_z(Basis b) {
    Eigen::Matrix2cd u;
    const Complex i{0.0, 1.0};
    switch (b) {
        case Basis::X:
            u << INV_SQRT2, INV_SQRT2, INV_SQRT2, -INV_SQRT2;
            break;
        case Basis::Y:
            u << INV_SQRT2, -i * INV_SQRT2, INV_SQRT2, i * INV_SQRT2;
            break;
        case Basis::Z:
            u = Eigen::Matrix2cd::Identity();
            break;
    }
    return u;
}

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
        return "";
    }
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string &text, const std::string &context) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("expected a non-negative integer for " + context + ", got '" + text + "'");
    }
    return std::stoull(text);
}

}  // namespace

const std::array<Setting, NUM_SETTINGS> &qst_settings() {
    static const std::array<Setting, NUM_SETTINGS> settings = [] {
        std::array<Setting, NUM_SETTINGS> s{};
        const Basis order[3] = {Basis::X, Basis::Y, Basis::Z};
        for (int a = 0; a < 3; a++) {
            for (int b = 0; b < 3; b++) {
                s[3 * a + b] = {order[a], order[b]};
            }
        }
        return s;
    }();
    return settings;
}

std::string setting_name(const Setting &s) {
    return {basis_name(s[0]), basis_name(s[1])};
}

size_t parse_setting(const std::string &name) {
    const auto &all = qst_settings();
    for (size_t k = 0; k < all.size(); k++) {
        if (setting_name(all[k]) == name) {
            return k;
        }
    }
    throw std::invalid_argument("unknown tomography setting '" + name + "'");
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector4cd &psi) {
    return DensityMatrix(psi * psi.adjoint());
}

Eigen::Vector4d DensityMatrix::eigenvalues() const {
    Eigen::Matrix4cd h = (m_ + m_.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

uint64_t CountsTable::shots(size_t setting) const {
    const auto &c = counts.at(setting);
    return c[0] + c[1] + c[2] + c[3];
}

uint64_t CountsTable::total_shots() const {
    uint64_t total = 0;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        total += shots(s);
    }
    return total;
}

bool CountsTable::has_empty_setting() const {
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        if (shots(s) == 0) {
            return true;
        }
    }
    return false;
}

void write_counts(std::ostream &out, const CountsTable &table) {
    bool uniform = true;
    for (size_t s = 1; s < NUM_SETTINGS; s++) {
        uniform = uniform && table.shots(s) == table.shots(0);
    }
    out << "# shots: ";
    if (uniform) {
        out << table.shots(0);
    } else {
        for (size_t s = 0; s < NUM_SETTINGS; s++) {
            out << (s ? "," : "") << table.shots(s);
        }
    }
    out << "\n";
    for (const auto &[key, value] : table.metadata) {
        if (key.empty() || key == "shots" || key.find_first_of(":\n") != std::string::npos ||
            value.find('\n') != std::string::npos) {
            throw std::invalid_argument("metadata entry '" + key + "' cannot be serialized");
        }
        out << "# " << key << ": " << value << "\n";
    }
    out << "setting,outcome,count\n";
    static const char *OUTCOMES[4] = {"00", "01", "10", "11"};
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        for (int o = 0; o < 4; o++) {
            out << setting_name(qst_settings()[s]) << "," << OUTCOMES[o] << "," << table.counts[s][o] << "\n";
        }
    }
}

std::string write_counts(const CountsTable &table) {
    std::ostringstream out;
    write_counts(out, table);
    return out.str();
}

CountsTable read_counts(std::istream &in) {
    CountsTable table;
    std::vector<uint64_t> declared;
    std::array<std::array<bool, 4>, NUM_SETTINGS> seen{};
    bool header = false;
    std::string line;
    size_t line_no = 0;
    auto fail = [&](const std::string &msg) {
        throw std::invalid_argument("counts line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            if (header) {
                fail("metadata after the column header");
            }
            std::string body = line.size() >= 2 && line[1] == ' ' ? line.substr(2) : line.substr(1);
            size_t colon = body.find(':');
            if (colon == std::string::npos) {
                fail("metadata line needs 'key: value'");
            }
            std::string key = body.substr(0, colon);
            std::string value = body.substr(colon + 1);
            if (!value.empty() && value[0] == ' ') {
                value.erase(0, 1);
            }
            if (key == "shots") {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    declared.push_back(parse_u64(trim(item), "shots"));
                }
                if (declared.size() != 1 && declared.size() != NUM_SETTINGS) {
                    fail("shots must list 1 or 9 values");
                }
            } else {
                table.metadata.emplace_back(key, value);
            }
            continue;
        }
        if (!header) {
            if (line != "setting,outcome,count") {
                fail("expected header 'setting,outcome,count'");
            }
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string setting;
        std::string outcome;
        std::string count;
        if (!std::getline(ss, setting, ',') || !std::getline(ss, outcome, ',') || !std::getline(ss, count)) {
            fail("expected three comma-separated fields");
        }
        size_t s = parse_setting(setting);
        int o = -1;
        if (outcome == "00") {
            o = 0;
        } else if (outcome == "01") {
            o = 1;
        } else if (outcome == "10") {
            o = 2;
        } else if (outcome == "11") {
            o = 3;
        } else {
            fail("invalid outcome '" + outcome + "'");
        }
        if (seen[s][o]) {
            fail("duplicate row for " + setting + "," + outcome);
        }
        seen[s][o] = true;
        table.counts[s][o] = parse_u64(count, "count");
    }
    if (!header) {
        throw std::invalid_argument("counts text has no 'setting,outcome,count' header");
    }
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        uint64_t expected = declared.empty() ? table.shots(s) : declared.size() == 1 ? declared[0] : declared[s];
        if (table.shots(s) != expected) {
            throw std::invalid_argument(
                "counts for setting " + setting_name(qst_settings()[s]) + " sum to " + std::to_string(table.shots(s)) +
                " but the header declares " + std::to_string(expected));
        }
    }
    return table;
}

CountsTable read_counts(const std::string &text) {
    std::istringstream in(text);
    return read_counts(in);
}

SettingProbabilities empirical_probabilities(const CountsTable &table) {
    SettingProbabilities probs;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        uint64_t shots = table.shots(s);
        if (shots == 0) {
            throw std::invalid_argument("setting " + setting_name(qst_settings()[s]) + " has no shots");
        }
        probs[s].resize(4);
        for (int o = 0; o < 4; o++) {
            probs[s][o] = static_cast<double>(table.counts[s][o]) / static_cast<double>(shots);
        }
    }
    return probs;
}

ProbabilityVector rem_correct(std::span<const double> probs, std::span<const CalibrationMatrix> calibration) {
    size_t k = calibration.size();
    if (probs.size() != (size_t{1} << k)) {
        throw std::invalid_argument("probability vector length must be 2^(number of calibration matrices)");
    }
    ProbabilityVector out(probs.begin(), probs.end());
    for (size_t q = 0; q < k; q++) {
        auto inv = calibration[q].inverse();
        size_t b = size_t{1} << (k - 1 - q);
        for (size_t base = 0; base < out.size(); base += 2 * b) {
            for (size_t i = base; i < base + b; i++) {
                double p0 = out[i];
                double p1 = out[i + b];
                out[i] = inv[0][0] * p0 + inv[0][1] * p1;
                out[i + b] = inv[1][0] * p0 + inv[1][1] * p1;
            }
        }
    }
    return out;
}

ProbabilityVector michelot_project(std::span<const double> v) {
    if (v.empty()) {
        throw std::invalid_argument("cannot project an empty vector");
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("cannot project a vector with non-finite entries");
        }
    }
    double sum = std::accumulate(v.begin(), v.end(), 0.0);
    bool nonnegative = std::all_of(v.begin(), v.end(), [](double x) { return x >= 0; });
    if (nonnegative && std::abs(sum - 1.0) <= 8 * 2.220446049250313e-16 * static_cast<double>(v.size())) {
        return ProbabilityVector(v.begin(), v.end());
    }

    // Project onto the hyperplane of the active coordinates, drop coordinates
    // that went negative, and repeat until none do.
    std::vector<bool> active(v.size(), true);
    ProbabilityVector x(v.size(), 0.0);
    while (true) {
        double s = 0;
        size_t count = 0;
        for (size_t i = 0; i < v.size(); i++) {
            if (active[i]) {
                s += v[i];
                count++;
            }
        }
        double shift = (s - 1.0) / static_cast<double>(count);
        bool dropped = false;
        for (size_t i = 0; i < v.size(); i++) {
            if (!active[i]) {
                x[i] = 0;
                continue;
            }
            x[i] = v[i] - shift;
            if (x[i] < 0) {
                active[i] = false;
                x[i] = 0;
                dropped = true;
            }
        }
        if (!dropped) {
            return x;
        }
    }
}

DensityMatrix linear_inversion_qst(const SettingProbabilities &probs) {
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        if (probs[s].size() != 4) {
            throw std::invalid_argument("missing or malformed probabilities for setting " +
                                        setting_name(qst_settings()[s]));
        }
    }
    // expectation[i][j] = <sigma_i (x) sigma_j>, index 0 is the identity.
    double expectation[4][4] = {};
    expectation[0][0] = 1.0;
    const auto &settings = qst_settings();
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        const auto &p = probs[s];
        int a = pauli_index(settings[s][0]);
        int b = pauli_index(settings[s][1]);
        expectation[a][b] += p[0] - p[1] - p[2] + p[3];
        expectation[a][0] += (p[0] + p[1] - p[2] - p[3]) / 3.0;
        expectation[0][b] += (p[0] - p[1] + p[2] - p[3]) / 3.0;
    }
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            rho += 0.25 * expectation[i][j] * kron(pauli_matrix(i), pauli_matrix(j));
        }
    }
    return DensityMatrix(rho);
}

std::vector<double> smolin_project_spectrum(std::span<const double> eigenvalues) {
    size_t d = eigenvalues.size();
    std::vector<size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return eigenvalues[a] > eigenvalues[b]; });
    std::vector<double> sorted(d);
    for (size_t k = 0; k < d; k++) {
        sorted[k] = eigenvalues[order[k]];
    }

    double accumulated = 0;
    size_t i = d;
    while (i > 0 && sorted[i - 1] + accumulated / static_cast<double>(i) < 0) {
        accumulated += sorted[i - 1];
        sorted[i - 1] = 0;
        i--;
    }
    for (size_t j = 0; j < i; j++) {
        sorted[j] += accumulated / static_cast<double>(i);
    }

    std::vector<double> out(d);
    for (size_t k = 0; k < d; k++) {
        out[order[k]] = sorted[k];
    }
    return out;
}

DensityMatrix smolin_project(const DensityMatrix &rho) {
    Eigen::Matrix4cd h = (rho.matrix() + rho.matrix().adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
    Eigen::Vector4d values = solver.eigenvalues();
    if (values.minCoeff() >= 0) {
        return DensityMatrix(h);
    }
    std::vector<double> spectrum(values.data(), values.data() + 4);
    auto projected = smolin_project_spectrum(spectrum);
    Eigen::Vector4d d(projected[0], projected[1], projected[2], projected[3]);
    const Eigen::Matrix4cd &v = solver.eigenvectors();
    Eigen::Matrix4cd out = v * d.cast<Complex>().asDiagonal() * v.adjoint();
    return DensityMatrix((out + out.adjoint()) * 0.5);
}

DensityMatrix reconstruct(const SettingProbabilities &raw, const PipelineOptions &options) {
    SettingProbabilities cleaned;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        if (raw[s].size() != 4) {
            throw std::invalid_argument("missing probabilities for setting " + setting_name(qst_settings()[s]));
        }
        ProbabilityVector p = raw[s];
        if (options.rem) {
            p = rem_correct(p, options.calibration);
        }
        cleaned[s] = michelot_project(p);
    }
    return smolin_project(linear_inversion_qst(cleaned));
}

DensityMatrix reconstruct(const CountsTable &table, const PipelineOptions &options) {
    return reconstruct(empirical_probabilities(table), options);
}

SettingProbabilities exact_probabilities(const DensityMatrix &rho, const NoiseModel &readout) {
    SettingProbabilities probs;
    CalibrationMatrix a = build_calibration(readout);
    const auto &settings = qst_settings();
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        Eigen::Matrix4cd u = kron(rotation_to_z(settings[s][0]), rotation_to_z(settings[s][1]));
        Eigen::Matrix4cd rotated = u * rho.matrix() * u.adjoint();
        ProbabilityVector p(4);
        for (int o = 0; o < 4; o++) {
            p[o] = std::max(0.0, rotated(o, o).real());
        }
        // Readout channel A (x) A applied qubit-wise.
        ProbabilityVector out(4, 0.0);
        for (int truth = 0; truth < 4; truth++) {
            for (int read = 0; read < 4; read++) {
                out[read] += a.entries[read >> 1][truth >> 1] * a.entries[read & 1][truth & 1] * p[truth];
            }
        }
        probs[s] = out;
    }
    return probs;
}

ShotSource density_shot_source(const DensityMatrix &rho, const NoiseModel &readout) {
    SettingProbabilities truth = exact_probabilities(rho, NoiseModel{});
    return [truth, readout](size_t setting, Rng &rng) -> uint8_t {
        const auto &p = truth[setting];
        double u = uniform01(rng);
        uint8_t outcome = 3;
        double acc = 0;
        for (uint8_t o = 0; o < 4; o++) {
            acc += p[o];
            if (u < acc) {
                outcome = o;
                break;
            }
        }
        bool a = corrupt_readout((outcome >> 1) & 1, readout.eps01, readout.eps10, rng);
        bool b = corrupt_readout(outcome & 1, readout.eps01, readout.eps10, rng);
        return static_cast<uint8_t>((a ? 2 : 0) | (b ? 1 : 0));
    };
}

CountsTable collect_counts(const ShotSource &source, uint64_t shots_per_setting, Rng &rng) {
    if (shots_per_setting == 0) {
        throw std::invalid_argument("need at least one shot per setting");
    }
    CountsTable table;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        for (uint64_t k = 0; k < shots_per_setting; k++) {
            table.counts[s][source(s, rng) & 3]++;
        }
    }
    return table;
}

DensityMatrix tomograph(const ShotSource &source, uint64_t shots_per_setting, const PipelineOptions &options, Rng &rng) {
    return reconstruct(collect_counts(source, shots_per_setting, rng), options);
}

std::array<CountsTable, NUM_BUCKETS> collect_bucketed_counts(
    const BucketedShotSource &source, uint64_t shots_per_setting, Rng &rng) {
    if (shots_per_setting == 0) {
        throw std::invalid_argument("need at least one shot per setting");
    }
    std::array<CountsTable, NUM_BUCKETS> tables;
    for (size_t s = 0; s < NUM_SETTINGS; s++) {
        for (uint64_t k = 0; k < shots_per_setting; k++) {
            BucketedShot shot = source(s, rng);
            if (shot.bucket >= NUM_BUCKETS) {
                throw std::out_of_range("shot bucket out of range");
            }
            tables[shot.bucket].counts[s][shot.outcome & 3]++;
        }
    }
    return tables;
}

std::array<std::optional<DensityMatrix>, NUM_BUCKETS> tomograph_buckets(
    const std::array<CountsTable, NUM_BUCKETS> &tables, const PipelineOptions &options) {
    std::array<std::optional<DensityMatrix>, NUM_BUCKETS> out;
    for (size_t b = 0; b < NUM_BUCKETS; b++) {
        if (!tables[b].has_empty_setting()) {
            out[b] = reconstruct(tables[b], options);
        }
    }
    return out;
}

}  // namespace hamster
