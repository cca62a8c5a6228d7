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

#ifndef HAMSTER_TOMOGRAPHY_H
#define HAMSTER_TOMOGRAPHY_H

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hamster/noise.h"
#include "hamster/rng.h"
#include "hamster/state_vector.h"

namespace hamster {

/// Measurement bases of (qubit a, qubit b) for one tomography circuit.
using Setting = std::array<Basis, 2>;

constexpr size_t NUM_SETTINGS = 9;

/// The nine Pauli basis pairs in lexicographic order XX, XY, XZ, YX, ..., ZZ.
const std::array<Setting, NUM_SETTINGS> &qst_settings();
std::string setting_name(const Setting &s);
/// Position of a setting name such as "XZ" in qst_settings().
size_t parse_setting(const std::string &name);

/// Two-qubit density matrix. The wrapped matrix is not required to be
/// positive: linear inversion may produce slightly unphysical estimates.
class DensityMatrix {
   public:
    DensityMatrix() : m_(Eigen::Matrix4cd::Identity() * 0.25) {}
    explicit DensityMatrix(const Eigen::Matrix4cd &m) : m_(m) {}

    static DensityMatrix pure(const Eigen::Vector4cd &psi);

    const Eigen::Matrix4cd &matrix() const {
        return m_;
    }
    double trace() const {
        return m_.trace().real();
    }
    /// Ascending eigenvalues of the Hermitian part.
    Eigen::Vector4d eigenvalues() const;

   private:
    Eigen::Matrix4cd m_;
};

/// Outcome counts per setting; outcome index is 2 * bit_a + bit_b.
struct CountsTable {
    std::array<std::array<uint64_t, 4>, NUM_SETTINGS> counts{};
    std::vector<std::pair<std::string, std::string>> metadata;

    uint64_t shots(size_t setting) const;
    uint64_t total_shots() const;
    bool has_empty_setting() const;

    bool operator==(const CountsTable &) const = default;
};

/// Line-oriented text form: `# shots: ...`, `# key: value` metadata lines,
/// then a `setting,outcome,count` header and one row per (setting, outcome).
void write_counts(std::ostream &out, const CountsTable &table);
std::string write_counts(const CountsTable &table);
CountsTable read_counts(std::istream &in);
CountsTable read_counts(const std::string &text);

using ProbabilityVector = std::vector<double>;
using SettingProbabilities = std::array<ProbabilityVector, NUM_SETTINGS>;

SettingProbabilities empirical_probabilities(const CountsTable &table);

/// Applies the inverse of A_0 (x) A_1 (x) ... one qubit at a time; the first
/// calibration belongs to the most significant bit of the outcome index.
/// Throws std::domain_error if any factor is singular.
ProbabilityVector rem_correct(std::span<const double> probs, std::span<const CalibrationMatrix> calibration);

/// Euclidean projection onto the probability simplex (Michelot's iteration).
ProbabilityVector michelot_project(std::span<const double> v);

/// rho = 1/4 sum_P <P> P over the 16 two-qubit Paulis. Each single-qubit
/// expectation is averaged over the three settings that measure it.
DensityMatrix linear_inversion_qst(const SettingProbabilities &probs);

/// Smolin's spectrum truncation: zeroes the most negative eigenvalues and
/// spreads their weight evenly over the rest. Input must sum to 1.
std::vector<double> smolin_project_spectrum(std::span<const double> eigenvalues);

/// Nearest (Frobenius) positive semidefinite, trace-one matrix with the same
/// eigenvectors.
DensityMatrix smolin_project(const DensityMatrix &rho);

struct PipelineOptions {
    bool rem = true;
    std::array<CalibrationMatrix, 2> calibration;
};

/// REM -> simplex projection -> linear inversion -> PSD projection.
DensityMatrix reconstruct(const SettingProbabilities &raw, const PipelineOptions &options);
/// Same pipeline on empirical frequencies. Throws std::invalid_argument if a
/// setting has no shots.
DensityMatrix reconstruct(const CountsTable &table, const PipelineOptions &options);

/// Born probabilities of each setting, then sent through the readout channel.
SettingProbabilities exact_probabilities(const DensityMatrix &rho, const NoiseModel &readout);

/// Returns a 2-bit outcome for the given setting.
using ShotSource = std::function<uint8_t(size_t setting, Rng &rng)>;

/// Draws a true outcome from rho and reads each bit through the readout channel.
ShotSource density_shot_source(const DensityMatrix &rho, const NoiseModel &readout);

CountsTable collect_counts(const ShotSource &source, uint64_t shots_per_setting, Rng &rng);

/// Collects counts and runs the full pipeline.
DensityMatrix tomograph(const ShotSource &source, uint64_t shots_per_setting, const PipelineOptions &options, Rng &rng);

/// A shot tagged with the post-selection bucket it landed in.
struct BucketedShot {
    uint8_t bucket;
    uint8_t outcome;
};
using BucketedShotSource = std::function<BucketedShot(size_t setting, Rng &rng)>;

constexpr size_t NUM_BUCKETS = 4;

std::array<CountsTable, NUM_BUCKETS> collect_bucketed_counts(
    const BucketedShotSource &source, uint64_t shots_per_setting, Rng &rng);

/// Per-bucket reconstruction. A bucket with a setting that received no shots
/// is returned as nullopt rather than reconstructed from partial data.
std::array<std::optional<DensityMatrix>, NUM_BUCKETS> tomograph_buckets(
    const std::array<CountsTable, NUM_BUCKETS> &tables, const PipelineOptions &options);

}  // namespace hamster

#endif
