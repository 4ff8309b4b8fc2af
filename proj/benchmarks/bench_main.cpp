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

// Throughput microbenchmarks for the hot paths.

#include <benchmark/benchmark.h>

#include <vector>

#include "emudistill/asymptotics.hpp"
#include "emudistill/diagnostics.hpp"
#include "emudistill/distillation.hpp"
#include "emudistill/phase_noise.hpp"
#include "emudistill/sampling.hpp"

using namespace emudistill;

namespace {

SamplerConfig preset_config(std::uint64_t count) {
    SamplerConfig c;
    c.seed = 1;
    c.count = count;
    c.state = experimental_preset();
    c.noise = PhaseNoiseModel::gaussian_for_q(0.78);
    return c;
}

void BM_SampleStream(benchmark::State &state) {
    const auto count = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto records = sample_stream(preset_config(count));
        benchmark::DoNotOptimize(records.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleStream)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_Cascade(benchmark::State &state) {
    const auto records = sample_stream(preset_config(static_cast<std::uint64_t>(state.range(0))));
    CascadeOptions options;
    options.iterations = 3;
    options.bootstrap_resamples = 0;
    for (auto _ : state) {
        auto report = run_cascade(records, ConditioningRule::hard_threshold(1.5), options);
        benchmark::DoNotOptimize(report.iterations.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cascade)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_Diagnostics(benchmark::State &state) {
    const auto gamma = experimental_preset();
    for (auto _ : state) {
        benchmark::DoNotOptimize(diagnostics(gamma));
    }
}
BENCHMARK(BM_Diagnostics);

void BM_Asymptote(benchmark::State &state) {
    const auto gamma = experimental_preset();
    const auto noise = PhaseNoiseModel::gaussian_for_q(0.78);
    for (auto _ : state) {
        benchmark::DoNotOptimize(asymptotic_covariance(gamma, noise, 0.1));
    }
}
BENCHMARK(BM_Asymptote);

}  // namespace

BENCHMARK_MAIN();
