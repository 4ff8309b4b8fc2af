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

#include "emudistill/report_json.hpp"

#include "json.hpp"

namespace emudistill {

namespace {

using nlohmann::ordered_json;

ordered_json entries(const Mat4 &m) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a.push_back(m(i, j));
        }
    }
    return a;
}

ordered_json interval(const Interval &iv) {
    return {{"mean", iv.mean}, {"sd", iv.sd}, {"lo", iv.lo}, {"hi", iv.hi}};
}

ordered_json rule_json(const ConditioningRule &rule) {
    if (rule.kind == ConditioningRule::Kind::hard_threshold) {
        return {{"kind", "hard_threshold"}, {"t_acc", rule.t_acc}};
    }
    return {{"kind", "gaussian_acceptance"}, {"n_bar", rule.n_bar}, {"rng_seed", rule.rng_seed}};
}

ordered_json iteration_json(const IterationStats &it) {
    ordered_json j;
    j["iteration"] = it.iteration;
    j["input_pairs"] = it.input_pairs;
    j["survivors"] = it.survivors;
    j["discarded_leftover"] = it.discarded_leftover;
    j["step_success_rate"] = it.step_success_rate;
    j["cumulative_p"] = it.cumulative_p;
    j["mean"] = {it.mean(0), it.mean(1), it.mean(2), it.mean(3)};
    j["gamma_hat"] = it.gamma_hat ? entries(it.gamma_hat->matrix()) : ordered_json(nullptr);
    j["physical"] = it.physical;
    if (it.diagnostics) {
        const Diagnostics &d = *it.diagnostics;
        j["diagnostics"] = {{"v_sq", d.v_sq},
                            {"mu", d.mu},
                            {"purity_g", d.purity_g},
                            {"entangled", d.entangled},
                            {"squeezed", d.squeezed}};
    } else {
        j["diagnostics"] = nullptr;
    }
    if (it.bootstrap && it.bootstrap->defined) {
        const BootstrapResult &b = *it.bootstrap;
        j["bootstrap"] = {{"resamples", b.resamples},
                          {"degenerate", b.degenerate},
                          {"v_sq", interval(b.v_sq)},
                          {"mu", interval(b.mu)},
                          {"purity_g", interval(b.purity_g)},
                          {"gamma_sd", entries(b.gamma_sd)}};
    } else {
        j["bootstrap"] = nullptr;
    }
    return j;
}

}  // namespace

std::string report_to_json(const DistillationReport &report, bool deterministic) {
    ordered_json j;
    j["schema"] = "emudistill-report";
    j["version"] = kReportSchemaVersion;
    ordered_json config;
    config["rule"] = rule_json(report.rule);
    config["iterations_requested"] = report.requested_iterations;
    config["bootstrap"] = {
        {"resamples", report.options.bootstrap_resamples},
        {"seed", report.options.bootstrap_seed},
        {"mode", report.options.bootstrap_mode == BootstrapMode::exact ? "exact" : "poisson"}};
    config["input_provenance"] = report.options.input_provenance;
    config["input_records"] = report.input_records;
    j["config"] = config;
    j["conventions"] = {
        {"vacuum_covariance", "identity"},
        {"mode_order", {"x_a", "p_a", "x_b", "p_b"}},
        {"amplitude", "(x + i p) / sqrt(2)"},
        {"reconstruction", "gamma = 2 * cov - I, mean subtracted, n - 1 normalisation"},
        {"pairing", "consecutive records in production order"},
        {"leftovers", "unpaired records are discarded and stay in the denominator of cumulative_p"}};
    j["starved_at"] = report.starved_at ? ordered_json(*report.starved_at) : ordered_json(nullptr);
    ordered_json its = ordered_json::array();
    for (const IterationStats &it : report.iterations) {
        its.push_back(iteration_json(it));
    }
    j["iterations"] = its;
    if (!deterministic) {
        j["timing"] = {{"wall_seconds", report.wall_seconds}, {"records_per_second", report.records_per_second}};
    }
    return j.dump(2) + "\n";
}

}  // namespace emudistill
