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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emudistill/covariance.hpp"
#include "emudistill/phase_noise.hpp"

namespace emudistill {

/// Fixed point of iterated Gaussification with thermal acceptance n_bar:
/// [<R (gamma + (2 n_bar + 1) I)^-1 R^T>]^-1 - (2 n_bar + 1) I.
///
/// The phase average acts on the inverse, not on gamma. Throws PhysicalityError
/// for unphysical gamma, ConfigError for n_bar < 0 or asymmetric noise and
/// NumericalError if the averaged matrix is ill-conditioned.
CovarianceMatrix4 asymptotic_covariance(const CovarianceMatrix4 &gamma, const PhaseNoiseModel &noise, double n_bar);

/// True iff n_bar / (n_bar + 1) * tanh r < |q|: the pure two-mode squeezed
/// vacuum with squeezing r stays distillable under dephasing q.
bool distillable_condition(double r, double n_bar, double q);

struct SweepRow {
    double q = 1.0;
    /// Empty for the un-distilled baseline row.
    std::optional<double> n_bar;
    double v_sq = 0.0;
    double mu = 0.0;
    double k = 0.0;
    double baseline_v_sq = 0.0;
    double baseline_mu = 0.0;
    double baseline_k = 0.0;
};

inline constexpr const char *kSweepCsvHeader = "q,n_bar,v_sq,mu,K,baseline_v_sq,baseline_mu,baseline_K";

/// For every q, one baseline row (n_bar empty) followed by one row per n_bar.
/// The noise at q is the symmetric Gaussian model with that q. Points are
/// independent and split across `threads` workers; row order is fixed.
std::vector<SweepRow> sweep_asymptote(const CovarianceMatrix4 &gamma, std::span<const double> q_grid,
                                      std::span<const double> n_bars, double beta_rec = 1.0, unsigned threads = 1);

/// CSV with `kSweepCsvHeader`; baseline rows carry "input" in the n_bar column.
std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace emudistill
