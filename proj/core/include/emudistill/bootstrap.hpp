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
#include <span>
#include <vector>

#include "emudistill/diagnostics.hpp"
#include "emudistill/sampling.hpp"

namespace emudistill {

inline constexpr int kDefaultBootstrapResamples = 100;

/// mean +- 2 standard deviations across bootstrap resamples.
struct Interval {
    double mean = 0.0;
    double sd = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const {
        return lo <= x && x <= hi;
    }
};

struct BootstrapResult {
    /// False when fewer than two records were supplied; all other fields are then unset.
    bool defined = false;
    int resamples = 0;
    /// Resamples whose reconstructed matrix had det <= 0 (excluded from purity_g).
    int degenerate = 0;
    Interval v_sq;
    Interval mu;
    Interval purity_g;
    /// Entrywise mean and standard deviation of the reconstructed gamma.
    Mat4 gamma_mean = Mat4::Zero();
    Mat4 gamma_sd = Mat4::Zero();
};

/// Nonparametric bootstrap: each resample draws records.size() records with
/// replacement, reconstructs gamma = 2 Sigma - I and evaluates the diagnostics.
/// Deterministic in `seed`.
BootstrapResult bootstrap_intervals(std::span<const HeterodyneRecord> records,
                                    int resamples = kDefaultBootstrapResamples, std::uint64_t seed = 1);

/// Builds intervals from already reconstructed per-resample gamma matrices.
BootstrapResult summarize_resamples(const std::vector<Mat4> &gammas);

}  // namespace emudistill
