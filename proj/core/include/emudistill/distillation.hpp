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

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emudistill/bootstrap.hpp"
#include "emudistill/covariance.hpp"
#include "emudistill/diagnostics.hpp"
#include "emudistill/sampling.hpp"
#include "emudistill/statistics.hpp"

namespace emudistill {

/// Post-selection rule applied to the difference amplitudes (alpha_-, beta_-).
struct ConditioningRule {
    enum class Kind { hard_threshold, gaussian_acceptance };

    Kind kind = Kind::hard_threshold;
    double t_acc = 1.0;
    double n_bar = 0.0;
    std::uint64_t rng_seed = 0;

    /// Accept iff |alpha_-| < t_acc and |beta_-| < t_acc. Requires t_acc > 0.
    static ConditioningRule hard_threshold(double t_acc);
    /// Accept with probability exp(-(|alpha_-|^2 + |beta_-|^2) / n_bar). Requires n_bar > 0.
    static ConditioningRule gaussian_acceptance(double n_bar, std::uint64_t rng_seed);

    std::string describe() const;
};

struct BeamSplitterOutput {
    std::complex<double> plus;
    std::complex<double> minus;
};

/// Balanced beam splitter acting on coherent amplitudes.
inline BeamSplitterOutput virtual_beamsplitter(std::complex<double> a1, std::complex<double> a2) {
    constexpr double s = 0.70710678118654752440;
    return {(a1 + a2) * s, (a1 - a2) * s};
}

/// Identifies a pair inside the cascade; selects the acceptance uniform for
/// the gaussian rule so decisions are reproducible.
struct StepKey {
    std::uint32_t level = 0;
    std::uint64_t pair_index = 0;
};

/// One Gaussification step on a pair of records. Returns the record encoding
/// (alpha_+, beta_+) on success.
std::optional<HeterodyneRecord> elementary_step(const HeterodyneRecord &first, const HeterodyneRecord &second,
                                                const ConditioningRule &rule, StepKey key = {});

/// Acceptance probability of the gaussian rule for the given |alpha_-|^2 + |beta_-|^2.
double gaussian_acceptance_probability(double minus_norm_sq, double n_bar);

enum class BootstrapMode {
    /// Survivors are retained and resampled with replacement to their own count.
    exact,
    /// Poisson(1) weights are drawn on the fly; nothing is retained.
    poisson,
};

struct CascadeOptions {
    int iterations = 1;
    /// 0 disables the bootstrap.
    int bootstrap_resamples = kDefaultBootstrapResamples;
    std::uint64_t bootstrap_seed = 1;
    BootstrapMode bootstrap_mode = BootstrapMode::exact;
    /// Free-form description of where the records came from.
    std::string input_provenance;
};

struct IterationStats {
    int iteration = 0;
    std::uint64_t input_pairs = 0;
    std::uint64_t survivors = 0;
    /// Records that reached this level but had no partner (0 or 1).
    std::uint64_t discarded_leftover = 0;
    double step_success_rate = 0.0;
    /// survivors / raw records consumed, leftovers included in the denominator.
    double cumulative_p = 0.0;
    /// Empirical mean subtracted before the covariance was formed.
    Vec4 mean = Vec4::Zero();
    /// Absent with fewer than two survivors.
    std::optional<CovarianceMatrix4> gamma_hat;
    /// Absent when gamma_hat is missing or not positive definite.
    std::optional<Diagnostics> diagnostics;
    bool physical = false;
    std::optional<BootstrapResult> bootstrap;
};

struct DistillationReport {
    std::vector<IterationStats> iterations;
    int requested_iterations = 0;
    /// First iteration that produced no survivors; later levels are omitted.
    std::optional<int> starved_at;
    std::uint64_t input_records = 0;
    ConditioningRule rule;
    CascadeOptions options;
    double wall_seconds = 0.0;
    double records_per_second = 0.0;
};

/// Streaming cascade. Survivors of level k are paired in production order at
/// level k + 1; memory is bounded by one pending record per level plus the
/// survivor sets kept for the exact bootstrap.
class Cascade {
  public:
    Cascade(const ConditioningRule &rule, const CascadeOptions &options);

    void push(const HeterodyneRecord &record) {
        ++input_records_;
        feed(0, record);
    }
    void push(std::span<const HeterodyneRecord> records) {
        for (const auto &r : records) {
            push(r);
        }
    }

    /// Computes per-iteration statistics. The cascade is left unchanged.
    DistillationReport finish() const;

    std::uint64_t input_records() const {
        return input_records_;
    }

  private:
    struct PoissonSums {
        double s0 = 0.0;
        Vec4 s1 = Vec4::Zero();
        Mat4 s2 = Mat4::Zero();
    };
    struct Level {
        std::optional<HeterodyneRecord> pending;
        std::uint64_t pairs = 0;
        std::uint64_t survivors = 0;
        MomentAccumulator moments;
        std::vector<HeterodyneRecord> kept;
        std::vector<PoissonSums> poisson;
    };

    void feed(std::size_t level, const HeterodyneRecord &record);
    void record_survivor(std::size_t level, const HeterodyneRecord &record);
    BootstrapResult poisson_bootstrap(const Level &level) const;

    ConditioningRule rule_;
    CascadeOptions options_;
    std::vector<Level> levels_;
    std::uint64_t input_records_ = 0;
};

/// Runs the cascade over an in-memory stream.
DistillationReport run_cascade(std::span<const HeterodyneRecord> input, const ConditioningRule &rule,
                               const CascadeOptions &options);

/// Runs the cascade over a chunk source; `next` fills its argument and returns
/// false once exhausted.
DistillationReport run_cascade(const std::function<bool(std::vector<HeterodyneRecord> &)> &next,
                               const ConditioningRule &rule, const CascadeOptions &options);

/// Expected raw copies consumed per distilled copy after N steps of success
/// probability P: 2^N / P^(2^N - 1) without memory, 2^N / P^N with memory.
double success_probability_model(int iterations, double step_probability, bool with_memory);

}  // namespace emudistill
