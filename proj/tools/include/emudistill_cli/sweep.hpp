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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emudistill/distillation.hpp"
#include "emudistill/statistics.hpp"

namespace emudistill::cli {

/// One generated or loaded stream conditioned at several thresholds.
struct ThresholdSweep {
    std::vector<double> t_acc_grid;
    std::vector<DistillationReport> reports;
    std::uint64_t records = 0;
    /// Moments of the raw (un-distilled) stream.
    MomentAccumulator raw;
};

using ChunkSource = std::function<bool(std::vector<HeterodyneRecord> &)>;

/// Feeds every chunk of `next` to one cascade per threshold. Cascades run on
/// up to `threads` workers; reports are ordered like the grid. Throws
/// ConfigError unless the grid is strictly increasing and positive.
ThresholdSweep run_threshold_sweep(const ChunkSource &next, std::span<const double> t_acc_grid,
                                   const CascadeOptions &options, unsigned threads);

/// Largest grid threshold t such that at t and at every smaller grid value
/// v_sq(k=2) lies below v_sq(k=1) by more than the combined 2 sigma.
std::optional<double> crossover_t_acc(const ThresholdSweep &sweep);

inline constexpr const char *kThresholdCsvHeader =
    "k,t_acc,input_pairs,survivors,step_success_rate,p,v_sq,v_sq_lo,v_sq_hi,mu,mu_lo,mu_hi,"
    "purity_g,purity_g_lo,purity_g_hi,K,K_p";

/// Rows for every populated iteration with a reconstructed covariance.
std::string threshold_sweep_csv(const ThresholdSweep &sweep, double beta_rec);

/// Shortest round-trip decimal text of a double.
std::string format_number(double v);

}  // namespace emudistill::cli
