// Copyright 2026 The emudistill Authors
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

#include "emudistill/distillation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "emudistill/errors.hpp"
#include "emudistill/rng.hpp"

namespace emudistill {

namespace {

std::uint64_t level_seed(std::uint64_t seed, std::size_t level) {
    return seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(level) + 1));
}

// Inverse-CDF Poisson(1) draw.
int poisson_one(double u) {
    double p = std::exp(-1.0);
    double cdf = p;
    int k = 0;
    while (u >= cdf && k < 32) {
        ++k;
        p /= k;
        cdf += p;
    }
    return k;
}

}  // namespace

ConditioningRule ConditioningRule::hard_threshold(double t_acc) {
    if (!(t_acc > 0.0) || !std::isfinite(t_acc)) {
        throw ConfigError("t_acc must be a positive finite number");
    }
    ConditioningRule rule;
    rule.kind = Kind::hard_threshold;
    rule.t_acc = t_acc;
    return rule;
}

ConditioningRule ConditioningRule::gaussian_acceptance(double n_bar, std::uint64_t rng_seed) {
    if (!(n_bar > 0.0) || !std::isfinite(n_bar)) {
        throw ConfigError("n_bar must be a positive finite number for gaussian acceptance");
    }
    ConditioningRule rule;
    rule.kind = Kind::gaussian_acceptance;
    rule.t_acc = 0.0;
    rule.n_bar = n_bar;
    rule.rng_seed = rng_seed;
    return rule;
}

std::string ConditioningRule::describe() const {
    std::ostringstream out;
    if (kind == Kind::hard_threshold) {
        out << "hard_threshold(t_acc=" << t_acc << ")";
    } else {
        out << "gaussian_acceptance(n_bar=" << n_bar << ", seed=" << rng_seed << ")";
    }
    return out.str();
}

double gaussian_acceptance_probability(double minus_norm_sq, double n_bar) {
    return std::exp(-minus_norm_sq / n_bar);
}

std::optional<HeterodyneRecord> elementary_step(const HeterodyneRecord &first, const HeterodyneRecord &second,
                                                const ConditioningRule &rule, StepKey key) {
    auto [a1, b1] = amplitude_of(first);
    auto [a2, b2] = amplitude_of(second);
    BeamSplitterOutput a = virtual_beamsplitter(a1, a2);
    BeamSplitterOutput b = virtual_beamsplitter(b1, b2);
    const double na = std::norm(a.minus);
    const double nb = std::norm(b.minus);
    bool accept;
    if (rule.kind == ConditioningRule::Kind::hard_threshold) {
        const double t2 = rule.t_acc * rule.t_acc;
        accept = na < t2 && nb < t2;
    } else {
        const CounterRng rng(rule.rng_seed, RngStream::acceptance);
        const double u = rng.uniforms(key.pair_index, key.level).first;
        accept = u < gaussian_acceptance_probability(na + nb, rule.n_bar);
    }
    if (!accept) {
        return std::nullopt;
    }
    return record_from_amplitudes(a.plus, b.plus);
}

Cascade::Cascade(const ConditioningRule &rule, const CascadeOptions &options) : rule_(rule), options_(options) {
    if (options.iterations < 1) {
        throw ConfigError("iterations must be >= 1");
    }
    if (options.bootstrap_resamples < 0) {
        throw ConfigError("bootstrap resamples must be >= 0");
    }
    levels_.resize(static_cast<std::size_t>(options.iterations));
    if (options.bootstrap_mode == BootstrapMode::poisson) {
        for (auto &level : levels_) {
            level.poisson.resize(static_cast<std::size_t>(options.bootstrap_resamples));
        }
    }
}

void Cascade::feed(std::size_t level, const HeterodyneRecord &record) {
    Level &slot = levels_[level];
    if (!slot.pending) {
        slot.pending = record;
        return;
    }
    const StepKey key{static_cast<std::uint32_t>(level), slot.pairs};
    std::optional<HeterodyneRecord> out = elementary_step(*slot.pending, record, rule_, key);
    slot.pending.reset();
    ++slot.pairs;
    if (!out) {
        return;
    }
    record_survivor(level, *out);
    if (level + 1 < levels_.size()) {
        feed(level + 1, *out);
    }
}

void Cascade::record_survivor(std::size_t level, const HeterodyneRecord &record) {
    Level &slot = levels_[level];
    const std::uint64_t index = slot.survivors++;
    slot.moments.add(record);
    if (options_.bootstrap_resamples == 0) {
        return;
    }
    if (options_.bootstrap_mode == BootstrapMode::exact) {
        slot.kept.push_back(record);
        return;
    }
    const CounterRng rng(level_seed(options_.bootstrap_seed, level), RngStream::bootstrap);
    const Vec4 x = record.as_vector();
    const Mat4 xx = x * x.transpose();
    for (std::size_t b = 0; b < slot.poisson.size(); ++b) {
        const int w = poisson_one(rng.uniforms(index, static_cast<std::uint32_t>(b)).first);
        if (w == 0) {
            continue;
        }
        PoissonSums &s = slot.poisson[b];
        s.s0 += w;
        s.s1 += w * x;
        s.s2 += w * xx;
    }
}

BootstrapResult Cascade::poisson_bootstrap(const Level &level) const {
    std::vector<Mat4> gammas;
    for (const PoissonSums &s : level.poisson) {
        if (s.s0 < 2.0) {
            continue;
        }
        Mat4 cov = (s.s2 - s.s1 * s.s1.transpose() / s.s0) / (s.s0 - 1.0);
        gammas.push_back(symmetrized(2.0 * cov - Mat4::Identity()));
    }
    return summarize_resamples(gammas);
}

DistillationReport Cascade::finish() const {
    DistillationReport report;
    report.requested_iterations = options_.iterations;
    report.input_records = input_records_;
    report.rule = rule_;
    report.options = options_;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        const Level &level = levels_[k];
        if (level.survivors == 0) {
            report.starved_at = static_cast<int>(k + 1);
            break;
        }
        IterationStats it;
        it.iteration = static_cast<int>(k + 1);
        it.input_pairs = level.pairs;
        it.survivors = level.survivors;
        it.discarded_leftover = level.pending ? 1 : 0;
        it.step_success_rate = static_cast<double>(level.survivors) / static_cast<double>(level.pairs);
        it.cumulative_p = static_cast<double>(level.survivors) / static_cast<double>(input_records_);
        it.mean = level.moments.mean();
        if (level.survivors >= 2) {
            it.gamma_hat = reconstruct_gamma(level.moments.covariance());
            try {
                it.diagnostics = diagnostics(*it.gamma_hat);
                it.physical = it.gamma_hat->is_physical();
            } catch (const PhysicalityError &) {
                it.physical = false;
            }
            if (options_.bootstrap_resamples > 0) {
                it.bootstrap = options_.bootstrap_mode == BootstrapMode::exact
                                   ? bootstrap_intervals(level.kept, options_.bootstrap_resamples,
                                                         level_seed(options_.bootstrap_seed, k))
                                   : poisson_bootstrap(level);
            }
        }
        report.iterations.push_back(std::move(it));
    }
    return report;
}

namespace {

void stamp_timing(DistillationReport &report, std::chrono::steady_clock::time_point start) {
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    report.wall_seconds = elapsed.count();
    report.records_per_second =
        report.wall_seconds > 0.0 ? static_cast<double>(report.input_records) / report.wall_seconds : 0.0;
}

}  // namespace

DistillationReport run_cascade(std::span<const HeterodyneRecord> input, const ConditioningRule &rule,
                               const CascadeOptions &options) {
    if (input.empty()) {
        throw ConfigError("cascade input is empty");
    }
    auto start = std::chrono::steady_clock::now();
    Cascade cascade(rule, options);
    cascade.push(input);
    DistillationReport report = cascade.finish();
    stamp_timing(report, start);
    return report;
}

DistillationReport run_cascade(const std::function<bool(std::vector<HeterodyneRecord> &)> &next,
                               const ConditioningRule &rule, const CascadeOptions &options) {
    auto start = std::chrono::steady_clock::now();
    Cascade cascade(rule, options);
    std::vector<HeterodyneRecord> chunk;
    while (next(chunk)) {
        cascade.push(chunk);
    }
    if (cascade.input_records() == 0) {
        throw ConfigError("cascade input is empty");
    }
    DistillationReport report = cascade.finish();
    stamp_timing(report, start);
    return report;
}

double success_probability_model(int iterations, double step_probability, bool with_memory) {
    if (iterations < 1) {
        throw ConfigError("iterations must be >= 1");
    }
    if (!(step_probability > 0.0 && step_probability <= 1.0)) {
        throw ConfigError("step probability must lie in (0, 1]");
    }
    const double copies = std::ldexp(1.0, iterations);
    const double exponent = with_memory ? static_cast<double>(iterations) : copies - 1.0;
    return copies / std::pow(step_probability, exponent);
}

}  // namespace emudistill
