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

#include "emudistill/asymptotics.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "emudistill/diagnostics.hpp"
#include "emudistill/errors.hpp"
#include "emudistill/keyrate.hpp"

namespace emudistill {

CovarianceMatrix4 asymptotic_covariance(const CovarianceMatrix4 &gamma, const PhaseNoiseModel &noise, double n_bar) {
    gamma.require_physical("asymptote input");
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
        throw ConfigError("n_bar must be a finite number >= 0");
    }
    const double shift = 2.0 * n_bar + 1.0;
    const Mat4 inner = solve_inverse(gamma.matrix() + shift * Mat4::Identity());
    const Mat4 averaged = phase_average(symmetrized(inner), noise);
    return CovarianceMatrix4::from_matrix(symmetrized(solve_inverse(symmetrized(averaged)) - shift * Mat4::Identity()));
}

bool distillable_condition(double r, double n_bar, double q) {
    if (!(r > 0.0)) {
        throw ConfigError("squeezing parameter must be positive");
    }
    if (!(n_bar >= 0.0)) {
        throw ConfigError("n_bar must be >= 0");
    }
    return n_bar / (n_bar + 1.0) * std::tanh(r) < std::abs(q);
}

namespace {

struct Figures {
    double v_sq;
    double mu;
    double k;
};

Figures figures_of(const CovarianceMatrix4 &gamma, double beta_rec) {
    Diagnostics d = diagnostics_unchecked(gamma.matrix());
    double k = std::numeric_limits<double>::quiet_NaN();
    try {
        k = key_rate(gamma, beta_rec).k;
    } catch (const PhysicalityError &) {
    }
    return {d.v_sq, d.mu, k};
}

void fill_point(const CovarianceMatrix4 &gamma, double q, std::span<const double> n_bars, double beta_rec,
                std::span<SweepRow> out) {
    const PhaseNoiseModel noise = PhaseNoiseModel::gaussian_for_q(q);
    const Figures base = figures_of(dephase_covariance(gamma, noise), beta_rec);
    auto row_for = [&](std::optional<double> n_bar, const Figures &f) {
        SweepRow row;
        row.q = q;
        row.n_bar = n_bar;
        row.v_sq = f.v_sq;
        row.mu = f.mu;
        row.k = f.k;
        row.baseline_v_sq = base.v_sq;
        row.baseline_mu = base.mu;
        row.baseline_k = base.k;
        return row;
    };
    out[0] = row_for(std::nullopt, base);
    for (std::size_t j = 0; j < n_bars.size(); ++j) {
        out[j + 1] = row_for(n_bars[j], figures_of(asymptotic_covariance(gamma, noise, n_bars[j]), beta_rec));
    }
}

void append_number(std::string &s, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    s.append(buf, res.ptr);
}

}  // namespace

std::vector<SweepRow> sweep_asymptote(const CovarianceMatrix4 &gamma, std::span<const double> q_grid,
                                      std::span<const double> n_bars, double beta_rec, unsigned threads) {
    gamma.require_physical("sweep input");
    for (double q : q_grid) {
        if (!(q > 0.0 && q <= 1.0)) {
            throw ConfigError("q grid values must lie in (0, 1]");
        }
    }
    for (double n : n_bars) {
        if (!(n >= 0.0) || !std::isfinite(n)) {
            throw ConfigError("n_bar values must be finite and >= 0");
        }
    }
    const std::size_t stride = n_bars.size() + 1;
    std::vector<SweepRow> rows(q_grid.size() * stride);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, q_grid.size()));
    std::vector<std::exception_ptr> failures(workers);
    auto work = [&](std::size_t begin, std::size_t step) {
        try {
            for (std::size_t i = begin; i < q_grid.size(); i += step) {
                fill_point(gamma, q_grid[i], n_bars, beta_rec, std::span(rows).subspan(i * stride, stride));
            }
        } catch (...) {
            failures[begin] = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w, workers);
        }
    }
    for (const auto &failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    return rows;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    for (const SweepRow &row : rows) {
        append_number(out, row.q);
        out += ',';
        if (row.n_bar) {
            append_number(out, *row.n_bar);
        } else {
            out += "input";
        }
        for (double v : {row.v_sq, row.mu, row.k, row.baseline_v_sq, row.baseline_mu, row.baseline_k}) {
            out += ',';
            append_number(out, v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace emudistill
