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

#include "emudistill_cli/sweep.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>

#include "emudistill/errors.hpp"
#include "emudistill/keyrate.hpp"

namespace emudistill::cli {

std::string format_number(double v) {
    char buf[32];
    // Counts stay integers; shortest round-trip would print 100000 as 1e+05.
    if (v == std::trunc(v) && std::abs(v) < 0x1p53) {
        auto res = std::to_chars(buf, buf + sizeof buf, static_cast<std::int64_t>(v));
        return std::string(buf, res.ptr);
    }
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ThresholdSweep run_threshold_sweep(const ChunkSource &next, std::span<const double> t_acc_grid,
                                   const CascadeOptions &options, unsigned threads) {
    if (t_acc_grid.empty()) {
        throw ConfigError("threshold grid is empty");
    }
    for (std::size_t i = 0; i < t_acc_grid.size(); ++i) {
        if (!(t_acc_grid[i] > 0.0)) {
            throw ConfigError("threshold grid values must be positive");
        }
        if (i > 0 && !(t_acc_grid[i] > t_acc_grid[i - 1])) {
            throw ConfigError("threshold grid must be strictly increasing");
        }
    }
    auto start = std::chrono::steady_clock::now();
    ThresholdSweep sweep;
    sweep.t_acc_grid.assign(t_acc_grid.begin(), t_acc_grid.end());
    std::vector<Cascade> cascades;
    for (double t : t_acc_grid) {
        cascades.emplace_back(ConditioningRule::hard_threshold(t), options);
    }
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, cascades.size()));

    std::vector<HeterodyneRecord> chunk;
    while (next(chunk)) {
        sweep.records += chunk.size();
        if (workers == 1) {
            sweep.raw.add(chunk);
            for (auto &c : cascades) {
                c.push(chunk);
            }
            continue;
        }
        std::vector<std::exception_ptr> failures(workers);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < cascades.size(); i += workers) {
                            cascades[i].push(chunk);
                        }
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
            sweep.raw.add(chunk);
        }
        for (const auto &f : failures) {
            if (f) {
                std::rethrow_exception(f);
            }
        }
    }
    if (sweep.records == 0) {
        throw ConfigError("sweep input is empty");
    }
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    for (const auto &c : cascades) {
        DistillationReport report = c.finish();
        report.wall_seconds = elapsed.count();
        report.records_per_second = elapsed.count() > 0.0 ? static_cast<double>(sweep.records) / elapsed.count() : 0.0;
        sweep.reports.push_back(std::move(report));
    }
    return sweep;
}

namespace {

const IterationStats *find_iteration(const DistillationReport &report, int k) {
    for (const auto &it : report.iterations) {
        if (it.iteration == k) {
            return &it;
        }
    }
    return nullptr;
}

bool level_two_separated(const DistillationReport &report) {
    const IterationStats *one = find_iteration(report, 1);
    const IterationStats *two = find_iteration(report, 2);
    if (one == nullptr || two == nullptr || !one->diagnostics || !two->diagnostics) {
        return false;
    }
    double sd1 = 0.0, sd2 = 0.0;
    if (one->bootstrap && one->bootstrap->defined) {
        sd1 = one->bootstrap->v_sq.sd;
    }
    if (two->bootstrap && two->bootstrap->defined) {
        sd2 = two->bootstrap->v_sq.sd;
    }
    const double gap = one->diagnostics->v_sq - two->diagnostics->v_sq;
    return std::isfinite(gap) && gap > 2.0 * std::hypot(sd1, sd2);
}

}  // namespace

std::optional<double> crossover_t_acc(const ThresholdSweep &sweep) {
    std::optional<double> result;
    for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
        if (!level_two_separated(sweep.reports[i])) {
            break;
        }
        result = sweep.t_acc_grid[i];
    }
    return result;
}

std::string threshold_sweep_csv(const ThresholdSweep &sweep, double beta_rec) {
    std::string out = kThresholdCsvHeader;
    out += '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
        for (const IterationStats &it : sweep.reports[i].iterations) {
            if (!it.gamma_hat) {
                continue;
            }
            Diagnostics d = it.diagnostics ? *it.diagnostics : diagnostics_unchecked(it.gamma_hat->matrix());
            auto bounds = [&](double value, auto pick) -> std::pair<double, double> {
                if (it.bootstrap && it.bootstrap->defined) {
                    const Interval &iv = pick(*it.bootstrap);
                    return {iv.lo, iv.hi};
                }
                return {value, value};
            };
            auto [vl, vh] = bounds(d.v_sq, [](const BootstrapResult &b) -> const Interval & { return b.v_sq; });
            auto [ml, mh] = bounds(d.mu, [](const BootstrapResult &b) -> const Interval & { return b.mu; });
            auto [pl, ph] = bounds(d.purity_g, [](const BootstrapResult &b) -> const Interval & { return b.purity_g; });
            double k = nan;
            if (it.physical) {
                try {
                    k = key_rate(*it.gamma_hat, beta_rec).k;
                } catch (const PhysicalityError &) {
                }
            }
            const double fields[] = {static_cast<double>(it.iteration),
                                     sweep.t_acc_grid[i],
                                     static_cast<double>(it.input_pairs),
                                     static_cast<double>(it.survivors),
                                     it.step_success_rate,
                                     it.cumulative_p,
                                     d.v_sq,
                                     vl,
                                     vh,
                                     d.mu,
                                     ml,
                                     mh,
                                     d.purity_g,
                                     pl,
                                     ph,
                                     k,
                                     k * it.cumulative_p};
            for (std::size_t f = 0; f < std::size(fields); ++f) {
                if (f > 0) {
                    out += ',';
                }
                out += format_number(fields[f]);
            }
            out += '\n';
        }
    }
    return out;
}

}  // namespace emudistill::cli
