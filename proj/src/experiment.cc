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

#include "hamster/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "hamster/metrics.h"

namespace hamster {

namespace {

// Stream tags, kept apart from trajectory indices.
constexpr uint64_t TAG_SHOTS = 0xA000000000000001ULL;
constexpr uint64_t TAG_BOOTSTRAP = 0xA000000000000002ULL;
constexpr uint64_t TAG_CALIBRATION = 0xA000000000000003ULL;

template <typename FN>
void parallel_for(size_t count, size_t threads, FN fn) {
    threads = std::max<size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (size_t k = 0; k < count; k++) {
            fn(k);
        }
        return;
    }
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (size_t w = 0; w < threads; w++) {
        workers.emplace_back([&, w] {
            try {
                for (size_t k = w; k < count; k += threads) {
                    fn(k);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    workers.clear();
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

PipelineOptions pipeline_options(const ExperimentConfig &config, size_t m) {
    PipelineOptions options;
    options.rem = true;
    if (config.calibration_shots == 0) {
        options.calibration.fill(build_calibration(config.noise));
    } else {
        Rng rng = derive_stream(config.seed, {m, TAG_CALIBRATION});
        for (auto &c : options.calibration) {
            c = estimate_calibration(config.noise, config.calibration_shots, rng);
        }
    }
    return options;
}

// Readout channel applied to the final tomography measurements.
NoiseModel readout_only(const NoiseModel &noise) {
    NoiseModel r;
    r.eps01 = noise.eps01;
    r.eps10 = noise.eps10;
    return r;
}

}  // namespace

TrajectoryAverage simulate_trajectories(const ExperimentConfig &config, size_t m) {
    config.validate();
    WheelConfig wheel;
    wheel.n = config.n;
    wheel.m = m;
    wheel.correction_mode = config.mode;
    wheel.noise = config.noise;
    wheel.seed = config.seed;

    size_t count = config.trajectories;
    std::vector<Eigen::Matrix4cd> states(count);
    std::vector<int> buckets(count);
    parallel_for(count, config.threads, [&](size_t t) {
        Rng rng = derive_stream(config.seed, {m, t});
        ProtocolRun run = run_protocol(wheel, rng);
        states[t] = run.teleported_density();
        buckets[t] = discriminator(run.record).index();
    });

    TrajectoryAverage avg;
    avg.trajectories = count;
    for (auto &b : avg.buckets) {
        b.setZero();
    }
    for (size_t t = 0; t < count; t++) {
        avg.all += states[t];
        avg.buckets[buckets[t]] += states[t];
        avg.bucket_counts[buckets[t]]++;
    }
    return avg;
}

ResultRow evaluate_point(const ExperimentConfig &config, size_t m, const TrajectoryAverage &average) {
    if (average.trajectories == 0) {
        throw std::invalid_argument("no trajectories to evaluate");
    }
    ResultRow row;
    row.m = m;
    row.mode = config.mode;
    row.trajectories = average.trajectories;
    PipelineOptions options = pipeline_options(config, m);
    NoiseModel readout = readout_only(config.noise);
    double total = static_cast<double>(average.trajectories);

    if (config.mode == CorrectionMode::DYNAMIC) {
        DensityMatrix rho(average.all / total);
        Eigen::Vector4cd target = two_qubit_graph_state();
        if (config.exact) {
            DensityMatrix rec = reconstruct(exact_probabilities(rho, readout), options);
            row.negativity = negativity(rec);
            row.fidelity = fidelity_pure(rec, target);
            return row;
        }
        Rng shot_rng = derive_stream(config.seed, {m, TAG_SHOTS});
        CountsTable counts = collect_counts(density_shot_source(rho, readout), config.shots, shot_rng);
        auto neg = [&](const CountsTable &t) { return negativity(reconstruct(t, options)); };
        auto fid = [&](const CountsTable &t) { return fidelity_pure(reconstruct(t, options), target); };
        Rng boot_neg = derive_stream(config.seed, {m, TAG_BOOTSTRAP});
        Rng boot_fid = derive_stream(config.seed, {m, TAG_BOOTSTRAP});
        BootstrapResult bn = bootstrap_ci(counts, neg, config.bootstrap, boot_neg);
        BootstrapResult bf = bootstrap_ci(counts, fid, config.bootstrap, boot_fid);
        row.negativity = bn.point_estimate;
        row.neg_err = bn.epsilon;
        row.fidelity = bf.point_estimate;
        row.fid_err = bf.epsilon;
        return row;
    }

    // Post-selection: one variant per realized discriminator.
    std::array<std::optional<DensityMatrix>, NUM_BUCKETS> bucket_rho;
    std::array<Eigen::Vector4cd, NUM_BUCKETS> targets;
    for (size_t b = 0; b < NUM_BUCKETS; b++) {
        Discriminator d{(b & 2) != 0, (b & 1) != 0};
        targets[b] = byproduct_state(m, d);
        VariantResult v;
        v.discriminator = d;
        v.weight = static_cast<double>(average.bucket_counts[b]) / total;
        row.variants.push_back(v);
        if (average.bucket_counts[b] > 0) {
            bucket_rho[b] = DensityMatrix(average.buckets[b] / static_cast<double>(average.bucket_counts[b]));
        }
    }

    if (config.exact) {
        double neg_sum = 0;
        double fid_sum = 0;
        size_t present = 0;
        for (size_t b = 0; b < NUM_BUCKETS; b++) {
            if (!bucket_rho[b]) {
                continue;
            }
            DensityMatrix rec = reconstruct(exact_probabilities(*bucket_rho[b], readout), options);
            auto &v = row.variants[b];
            v.missing = false;
            v.negativity = negativity(rec);
            v.fidelity = fidelity_pure(rec, targets[b]);
            neg_sum += v.negativity;
            fid_sum += v.fidelity;
            present++;
        }
        row.negativity = neg_sum / static_cast<double>(present);
        row.fidelity = fid_sum / static_cast<double>(present);
        return row;
    }

    std::array<ShotSource, NUM_BUCKETS> sources;
    std::array<double, NUM_BUCKETS> cumulative{};
    double acc = 0;
    for (size_t b = 0; b < NUM_BUCKETS; b++) {
        if (bucket_rho[b]) {
            sources[b] = density_shot_source(*bucket_rho[b], readout);
        }
        acc += row.variants[b].weight;
        cumulative[b] = acc;
    }
    BucketedShotSource source = [&](size_t setting, Rng &rng) -> BucketedShot {
        double u = uniform01(rng) * acc;
        uint8_t b = 0;
        while (b < NUM_BUCKETS - 1 && (u >= cumulative[b] || !sources[b])) {
            b++;
        }
        while (!sources[b]) {
            b--;
        }
        return BucketedShot{b, sources[b](setting, rng)};
    };
    Rng shot_rng = derive_stream(config.seed, {m, TAG_SHOTS});
    auto tables = collect_bucketed_counts(source, config.shots, shot_rng);

    std::vector<CountsTable> complete;
    std::vector<size_t> complete_index;
    for (size_t b = 0; b < NUM_BUCKETS; b++) {
        auto &v = row.variants[b];
        v.shots = tables[b].total_shots();
        v.missing = tables[b].has_empty_setting();
        if (!v.missing) {
            complete.push_back(tables[b]);
            complete_index.push_back(b);
        }
    }
    if (complete.empty()) {
        throw std::runtime_error(
            "no post-selection bucket received shots in every setting at m=" + std::to_string(m) +
            "; increase shots");
    }
    auto mean_metric = [&](std::span<const CountsTable> t, bool use_fidelity) {
        double sum = 0;
        for (size_t k = 0; k < t.size(); k++) {
            DensityMatrix rec = reconstruct(t[k], options);
            sum += use_fidelity ? fidelity_pure(rec, targets[complete_index[k]]) : negativity(rec);
        }
        return sum / static_cast<double>(t.size());
    };
    for (size_t k = 0; k < complete.size(); k++) {
        DensityMatrix rec = reconstruct(complete[k], options);
        auto &v = row.variants[complete_index[k]];
        v.negativity = negativity(rec);
        v.fidelity = fidelity_pure(rec, targets[complete_index[k]]);
    }
    Rng boot_neg = derive_stream(config.seed, {m, TAG_BOOTSTRAP});
    Rng boot_fid = derive_stream(config.seed, {m, TAG_BOOTSTRAP});
    BootstrapResult bn = bootstrap_ci(
        complete, [&](std::span<const CountsTable> t) { return mean_metric(t, false); }, config.bootstrap, boot_neg);
    BootstrapResult bf = bootstrap_ci(
        complete, [&](std::span<const CountsTable> t) { return mean_metric(t, true); }, config.bootstrap, boot_fid);
    row.negativity = bn.point_estimate;
    row.neg_err = bn.epsilon;
    row.fidelity = bf.point_estimate;
    row.fid_err = bf.epsilon;
    return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &config) {
    config.validate();
    std::vector<ResultRow> rows;
    for (size_t m : config.hops) {
        auto start = std::chrono::steady_clock::now();
        TrajectoryAverage avg = simulate_trajectories(config, m);
        ResultRow row = evaluate_point(config, m, avg);
        if (config.record_timing) {
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

NoiseFit calibrate_noise(
    const ExperimentConfig &base, double target, size_t at_hops, double p1_ratio, double tolerance) {
    if (!(target > 0 && target < 0.5)) {
        throw std::invalid_argument("target negativity must lie in (0, 0.5)");
    }
    if (!(p1_ratio >= 0)) {
        throw std::invalid_argument("p1 ratio must be non-negative");
    }
    ExperimentConfig config = base;
    config.exact = true;
    config.hops = {at_hops};
    NoiseFit fit;
    double best_p2 = 0;
    double best_neg = 0;
    auto evaluate = [&](double p2) {
        config.noise.p2 = p2;
        config.noise.p1 = std::min(1.0, p1_ratio * p2);
        fit.evaluations++;
        double neg = evaluate_point(config, at_hops, simulate_trajectories(config, at_hops)).negativity;
        if (fit.evaluations == 1 || std::abs(neg - target) < std::abs(best_neg - target)) {
            best_p2 = p2;
            best_neg = neg;
        }
        return neg;
    };

    double lo = 0;
    double neg_lo = evaluate(lo);
    if (neg_lo < target - tolerance) {
        throw std::runtime_error(
            "target negativity " + std::to_string(target) + " is above the p2 = 0 value " + std::to_string(neg_lo));
    }
    if (neg_lo > target + tolerance) {
        double hi = 0.01;
        double neg_hi = evaluate(hi);
        while (neg_hi > target) {
            lo = hi;
            hi *= 2;
            if (hi > 1) {
                throw std::runtime_error("no p2 <= 1 brings the negativity down to the target");
            }
            neg_hi = evaluate(hi);
        }
        for (int iter = 0; iter < 40 && std::abs(best_neg - target) > tolerance && hi - lo > 1e-7; iter++) {
            double mid = 0.5 * (lo + hi);
            if (evaluate(mid) > target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    config.noise.p2 = best_p2;
    config.noise.p1 = std::min(1.0, p1_ratio * best_p2);
    fit.model = config.noise;
    fit.achieved_negativity = best_neg;
    return fit;
}

}  // namespace hamster
