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

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   emudistill_acceptance            run all criteria
//   emudistill_acceptance --only N   run criterion N
//
// Exit status is 0 only if every selected criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "disk_probability.hpp"
#include "emudistill/asymptotics.hpp"
#include "emudistill/diagnostics.hpp"
#include "emudistill/distillation.hpp"
#include "emudistill/keyrate.hpp"
#include "emudistill/phase_noise.hpp"
#include "emudistill/sampling.hpp"
#include "phase_monte_carlo.hpp"
#include "random_states.hpp"

using namespace emudistill;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char *name;
    double budget_seconds;
    std::function<Outcome()> run;
};

Mat4 to_mat(const oracle::M4 &o) {
    Mat4 m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m(i, j) = o[i][j];
        }
    }
    return m;
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

unsigned workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

SamplerConfig sampler(const CovarianceMatrix4 &state, std::uint64_t count, PhaseNoiseModel noise, std::uint64_t seed) {
    SamplerConfig c;
    c.seed = seed;
    c.count = count;
    c.state = state;
    c.noise = std::move(noise);
    c.threads = workers();
    return c;
}

DistillationReport cascade_on(const SamplerConfig &config, const ConditioningRule &rule, int iterations,
                              int bootstrap) {
    RecordStream stream(config);
    CascadeOptions options;
    options.iterations = iterations;
    options.bootstrap_resamples = bootstrap;
    options.bootstrap_seed = config.seed;
    return run_cascade([&](std::vector<HeterodyneRecord> &out) { return stream.next_chunk(out); }, rule, options);
}

// 1. Fixed point of the asymptotic map without diffusion.
Outcome fixed_point() {
    std::mt19937_64 rng(20261015);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        auto g = CovarianceMatrix4::from_matrix(to_mat(oracle::random_physical(rng)));
        auto out = asymptotic_covariance(g, PhaseNoiseModel::gaussian_for_q(1.0), 0.0);
        worst = std::max(worst, out.frobenius_distance(g));
    }
    return {worst <= 1e-10, "max ||out - in||_F = " + fmt(worst, 3) + " over 100 random states (tol 1e-10)"};
}

// 2. Anchor values for the symmetric state a = 3.583, b = 3.417.
Outcome symmetric_anchor() {
    const double a = 3.583, b = 3.417;
    auto g = tmsv_covariance({a, b});
    double worst_baseline = 0.0;
    bool mu_ordered = true;
    double worst_mu_gap = -INFINITY;
    for (int i = 1; i <= 200; ++i) {
        const double q = i / 200.0;
        auto noise = PhaseNoiseModel::gaussian_for_q(q);
        Diagnostics base = diagnostics(dephase_covariance(g, noise));
        worst_baseline = std::max(worst_baseline, std::abs(base.v_sq - (a - b * q)));
        for (double n_bar : {0.0, 0.1, 0.5}) {
            const double mu = diagnostics(asymptotic_covariance(g, noise, n_bar)).mu;
            worst_mu_gap = std::max(worst_mu_gap, mu - base.mu);
            mu_ordered &= mu <= base.mu + 1e-12;
        }
    }
    const double v_one = diagnostics(asymptotic_covariance(g, PhaseNoiseModel::gaussian_for_q(1.0), 0.0)).v_sq;
    const bool baseline_ok = worst_baseline <= 1e-12;
    const bool anchor_ok = std::abs(v_one - 1.0 / 6.0) <= 1e-6;
    std::string detail = std::string("baseline v_sq = a - q b: ") + (baseline_ok ? "ok" : "FAIL") + " (max dev " +
                         fmt(worst_baseline, 3) + "); distilled v_sq(q=1, n_bar=0) = " + fmt(v_one, 12) +
                         " vs 1/6 (|diff| " + fmt(std::abs(v_one - 1.0 / 6.0), 3) + ", tol 1e-6): " +
                         (anchor_ok ? "ok" : "FAIL") + "; mu_distilled <= mu_baseline on 200 q x 3 n_bar: " +
                         (mu_ordered ? "ok" : "FAIL") + " (max mu gap " + fmt(worst_mu_gap, 3) + ")";
    return {baseline_ok && anchor_ok && mu_ordered, detail};
}

// 3. Distillability boundary versus the mu = 1 crossing of the fixed point.
Outcome distillability_boundary() {
    double worst = 0.0;
    for (double r : {0.25, 0.5, 1.0}) {
        auto g = tmsv_covariance(SymmetricTmsvParams::from_squeezing(r));
        for (double n_bar : {0.1, 0.2, 0.5}) {
            auto mu_at = [&](double q) {
                return diagnostics(asymptotic_covariance(g, PhaseNoiseModel::gaussian_for_q(q), n_bar)).mu;
            };
            double lo = 1e-9, hi = 1.0;
            while (hi - lo > 1e-6) {
                const double mid = 0.5 * (lo + hi);
                (mu_at(mid) < 1.0 ? hi : lo) = mid;
            }
            const double crossing = 0.5 * (lo + hi);
            worst = std::max(worst, std::abs(crossing - n_bar / (n_bar + 1.0) * std::tanh(r)));
        }
    }
    return {worst <= 1e-3, "max |q_cross - n/(n+1) tanh r| = " + fmt(worst, 3) + " over 9 (r, n_bar) (tol 1e-3)"};
}

// 4. Accept-all reconstruction round trip.
Outcome reconstruction_round_trip() {
    auto state = experimental_preset();
    auto report = cascade_on(sampler(state, 1000000, PhaseNoiseModel::none(), 4),
                             ConditioningRule::hard_threshold(1e12), 1, 100);
    const IterationStats &it = report.iterations.at(0);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            worst = std::max(worst, std::abs((*it.gamma_hat)(i, j) - state(i, j)) / it.bootstrap->gamma_sd(i, j));
        }
    }
    return {worst <= 5.0, "max |gamma_hat - gamma| / se = " + fmt(worst, 3) + " (tol 5), survivors " +
                              std::to_string(it.survivors)};
}

// 5. Ordering of squeezing, entanglement and purity across three iterations.
Outcome iteration_ordering() {
    const double t_acc = 1.8;
    auto report = cascade_on(sampler(experimental_preset(), 10000000, PhaseNoiseModel::gaussian_for_q(0.78), 1),
                             ConditioningRule::hard_threshold(t_acc), 3, 100);
    if (report.iterations.size() < 3 || !report.iterations[2].diagnostics) {
        return {false, "cascade produced fewer than three populated iterations"};
    }
    bool ok = report.iterations[2].survivors >= 1000;
    std::ostringstream d;
    d << "T_acc " << t_acc << ", survivors " << report.iterations[0].survivors << "/" << report.iterations[1].survivors
      << "/" << report.iterations[2].survivors << ";";
    struct Quantity {
        const char *name;
        double sign;
        double Diagnostics::*value;
        Interval BootstrapResult::*interval;
    };
    for (Quantity qn : {Quantity{"v_sq", -1.0, &Diagnostics::v_sq, &BootstrapResult::v_sq},
                        Quantity{"mu", -1.0, &Diagnostics::mu, &BootstrapResult::mu},
                        Quantity{"P_G", 1.0, &Diagnostics::purity_g, &BootstrapResult::purity_g}}) {
        d << " " << qn.name;
        for (int k = 0; k < 2; ++k) {
            const IterationStats &lo = report.iterations[k];
            const IterationStats &hi = report.iterations[k + 1];
            const double gap = qn.sign * ((*hi.diagnostics).*qn.value - (*lo.diagnostics).*qn.value);
            const double band = 2.0 * std::hypot(((*lo.bootstrap).*qn.interval).sd, ((*hi.bootstrap).*qn.interval).sd);
            ok &= gap > band;
            d << " " << (k + 1) << "->" << (k + 2) << ":" << fmt(gap, 3) << ">" << fmt(band, 3);
        }
    }
    return {ok, d.str()};
}

// 6. Gaussian-acceptance cascade approaching the fixed point.
Outcome gaussian_convergence() {
    auto state = tmsv_covariance(SymmetricTmsvParams::from_squeezing(0.5));
    auto noise = PhaseNoiseModel::gaussian_for_q(0.9);
    const double n_bar = 0.5;
    auto limit = asymptotic_covariance(state, noise, n_bar);
    auto report = cascade_on(sampler(state, 10000000, noise, 6), ConditioningRule::gaussian_acceptance(n_bar, 6), 3, 0);
    std::vector<double> dist;
    std::ostringstream d;
    for (const IterationStats &it : report.iterations) {
        if (it.gamma_hat) {
            dist.push_back(it.gamma_hat->frobenius_distance(limit));
            d << "k=" << it.iteration << ": ||gamma_hat - gamma_inf||_F = " << fmt(dist.back(), 4) << " ("
              << it.survivors << " survivors); ";
        }
    }
    bool ok = dist.size() == 3 && dist[0] > dist[1] && dist[1] > dist[2];
    d << (ok ? "strictly decreasing" : "not strictly decreasing");
    return {ok, d.str()};
}

// 7. Key-rate region expansion.
Outcome key_region() {
    auto g = tmsv_covariance({3.583, 3.417});
    std::vector<double> qs;
    for (int i = 1; i <= 1000; ++i) {
        qs.push_back(i / 1000.0);
    }
    const double n_bars[] = {0.0};
    auto rows = sweep_asymptote(g, qs, n_bars, 1.0, workers());
    double q_lo = NAN, q_hi = NAN;
    for (std::size_t i = 1; i < rows.size(); i += 2) {
        if (rows[i].baseline_k <= 0.0 && rows[i].k > 0.0) {
            if (std::isnan(q_lo)) {
                q_lo = rows[i].q;
            }
            q_hi = rows[i].q;
        }
    }
    const bool ok = !std::isnan(q_lo);
    return {ok, ok ? "baseline K <= 0 < distilled K for q in [" + fmt(q_lo, 4) + ", " + fmt(q_hi, 4) + "]"
                   : "no q with baseline K <= 0 < distilled K"};
}

// 8. Resource accounting.
Outcome resource_accounting() {
    const double memoryless = success_probability_model(3, 0.5, false);
    const double memory = success_probability_model(3, 0.5, true);
    bool ok = memoryless == 1024.0 && memory == 64.0;
    auto report = cascade_on(sampler(experimental_preset(), 2000000, PhaseNoiseModel::gaussian_for_q(0.78), 8),
                             ConditioningRule::hard_threshold(1.5), 3, 0);
    if (report.iterations.size() < 3) {
        return {false, "cascade starved"};
    }
    double product = 1.0, rel_var = 0.0;
    for (const IterationStats &it : report.iterations) {
        const double p = it.step_success_rate;
        product *= p;
        rel_var += (1.0 - p) / (p * static_cast<double>(it.input_pairs));
    }
    const double law = success_probability_model(3, std::cbrt(product), true);
    const double measured = 1.0 / report.iterations[2].cumulative_p;
    const double tol = 5.0 * law * std::sqrt(rel_var);
    ok &= std::abs(measured - law) <= tol;
    return {ok, "model 1024 / 64: " + std::string(memoryless == 1024.0 && memory == 64.0 ? "ok" : "FAIL") +
                    "; cascade copies per output " + fmt(measured, 6) + " vs with-memory law " + fmt(law, 6) +
                    " (tol " + fmt(tol, 3) + "; memoryless law would be " +
                    fmt(success_probability_model(3, std::cbrt(product), false), 4) + ")"};
}

// 9. Oracle equivalences.
Outcome oracle_equivalences() {
    std::ostringstream d;
    bool ok = true;
    {
        auto g = experimental_preset();
        auto noise = PhaseNoiseModel::gaussian_for_q(0.78);
        const double sigma = noise.channel_a().sigma();
        Mat4 exact = dephase_covariance(g, noise).matrix();
        oracle::M4 go{};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                go[i][j] = g(i, j);
            }
        }
        auto mc = oracle::monte_carlo_phase_average(go, sigma, sigma, 1000000, 9);
        double worst = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (mc.stderr_[i][j] > 0.0) {
                    worst = std::max(worst, std::abs(exact(i, j) - mc.mean[i][j]) / mc.stderr_[i][j]);
                }
            }
        }
        ok &= worst <= 5.0;
        d << "dephasing vs Monte Carlo max z = " << fmt(worst, 3) << "; ";
    }
    {
        const double t = 1.0;
        const double per_mode = oracle::disk_probability(1.0, 0.0, 1.0, std::sqrt(2.0) * t);
        const double expected = per_mode * per_mode;
        auto report = cascade_on(sampler(CovarianceMatrix4::vacuum(), 1000000, PhaseNoiseModel::none(), 9),
                                 ConditioningRule::hard_threshold(t), 1, 0);
        const IterationStats &it = report.iterations.at(0);
        const double z = std::abs(it.step_success_rate - expected) /
                         std::sqrt(expected * (1.0 - expected) / static_cast<double>(it.input_pairs));
        ok &= z <= 5.0;
        d << "vacuum acceptance " << fmt(it.step_success_rate, 6) << " vs disk integral " << fmt(expected, 6)
          << " (z " << fmt(z, 3) << "); ";
    }
    {
        double worst = 0.0;
        for (double a : {1.0, 1.2, 2.0, 3.583, 8.0}) {
            for (double frac : {0.0, 0.25, 0.5, 0.95, 1.0}) {
                for (double sign : {1.0, -1.0}) {
                    const double b = sign * frac * std::sqrt(a * a - 1.0);
                    auto g = tmsv_covariance({a, b});
                    Diagnostics dg = diagnostics(g);
                    SymplecticSpectrum s = symplectic_spectrum(g);
                    const double closed = a - std::abs(b);
                    const double nu = std::sqrt((a - b) * (a + b));
                    worst = std::max({worst, std::abs(dg.v_sq - closed), std::abs(dg.mu - closed),
                                      std::abs(s.nu_min - nu), std::abs(s.nu_max - nu)});
                }
            }
        }
        ok &= worst <= 1e-10;
        d << "closed forms vs eigensolver max dev " << fmt(worst, 3);
    }
    return {ok, d.str()};
}

}  // namespace

int main(int argc, char **argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }
    const std::vector<Criterion> criteria{
        {1, "fixed point of the asymptotic map", 1.0, fixed_point},
        {2, "symmetric-state anchor values", 10.0, symmetric_anchor},
        {3, "distillability boundary", 30.0, distillability_boundary},
        {4, "reconstruction round trip", 30.0, reconstruction_round_trip},
        {5, "iteration ordering at desk scale", 300.0, iteration_ordering},
        {6, "gaussian-acceptance convergence", 300.0, gaussian_convergence},
        {7, "key-region expansion", 10.0, key_region},
        {8, "resource accounting", 60.0, resource_accounting},
        {9, "oracle equivalences", 60.0, oracle_equivalences},
    };
    int failures = 0;
    int ran = 0;
    for (const Criterion &c : criteria) {
        if (only != 0 && c.id != only) {
            continue;
        }
        ++ran;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs <= c.budget_seconds;
        const bool pass = o.pass && in_budget;
        failures += !pass;
        std::printf("criterion %d %s %s: %s [%.2f s, budget %.0f s%s]\n", c.id, pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs, c.budget_seconds, in_budget ? "" : ", OVER BUDGET");
        std::fflush(stdout);
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
