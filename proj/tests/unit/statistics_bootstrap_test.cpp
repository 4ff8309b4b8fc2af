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

#include <cmath>

#include "gtest/gtest.h"

#include "emudistill/bootstrap.hpp"
#include "emudistill/diagnostics.hpp"
#include "emudistill/errors.hpp"
#include "emudistill/sampling.hpp"
#include "emudistill/statistics.hpp"

using namespace emudistill;

namespace {

std::vector<HeterodyneRecord> sample(const CovarianceMatrix4 &state, std::uint64_t n, std::uint64_t seed) {
    SamplerConfig c;
    c.seed = seed;
    c.count = n;
    c.state = state;
    return sample_stream(c);
}

}  // namespace

TEST(statistics, merge_matches_serial_accumulation) {
    auto records = sample(experimental_preset(), 10000, 3);
    MomentAccumulator serial;
    serial.add(records);
    MomentAccumulator merged;
    for (std::size_t start = 0; start < records.size(); start += 777) {
        MomentAccumulator part;
        part.add(std::span(records).subspan(start, std::min<std::size_t>(777, records.size() - start)));
        merged.merge(part);
    }
    EXPECT_EQ(merged.count(), serial.count());
    EXPECT_LT((merged.mean() - serial.mean()).norm(), 1e-12);
    EXPECT_LT((merged.covariance() - serial.covariance()).norm(), 1e-9 * serial.covariance().norm());
}

TEST(statistics, covariance_is_mean_subtracted_and_unbiased) {
    std::vector<HeterodyneRecord> r{{1, 0, 0, 0}, {3, 0, 0, 0}};
    Mat4 c = empirical_covariance(r);
    EXPECT_DOUBLE_EQ(c(0, 0), 2.0);
    EXPECT_EQ(c(1, 1), 0.0);
    MomentAccumulator one;
    one.add(r[0]);
    EXPECT_THROW(one.covariance(), NumericalError);
}

TEST(statistics, reconstruction_rule) {
    Mat4 sigma = Mat4::Identity();
    EXPECT_EQ(reconstruct_gamma(sigma).matrix(), Mat4::Identity());
    EXPECT_EQ(reconstruct_gamma(2.0 * Mat4::Identity()).matrix(), 3.0 * Mat4::Identity());
}

TEST(bootstrap, fewer_than_two_records_is_undefined) {
    EXPECT_FALSE(bootstrap_intervals({}).defined);
    std::vector<HeterodyneRecord> one{{1, 2, 3, 4}};
    EXPECT_FALSE(bootstrap_intervals(one).defined);
}

TEST(bootstrap, constant_set_gives_zero_width) {
    std::vector<HeterodyneRecord> same(50, HeterodyneRecord{0.5, -0.5, 1.0, 2.0});
    BootstrapResult b = bootstrap_intervals(same);
    ASSERT_TRUE(b.defined);
    EXPECT_EQ(b.resamples, 100);
    EXPECT_EQ(b.v_sq.hi - b.v_sq.lo, 0.0);
    EXPECT_EQ(b.mu.hi - b.mu.lo, 0.0);
    EXPECT_EQ(b.purity_g.hi - b.purity_g.lo, 0.0);
}

// Vacuum is degenerate in every direction, so its minimum variance is biased
// low; a state with a unique squeezed quadrature is used instead.
TEST(bootstrap, interval_contains_true_squeezing) {
    auto state = experimental_preset();
    auto records = sample(state, 100000, 17);
    BootstrapResult b = bootstrap_intervals(records, 100, 5);
    ASSERT_TRUE(b.defined);
    const double truth = diagnostics(state).v_sq;
    EXPECT_TRUE(b.v_sq.contains(truth)) << b.v_sq.lo << " " << b.v_sq.hi << " " << truth;
    EXPECT_LT(b.v_sq.lo, b.v_sq.hi);
}

TEST(bootstrap, deterministic_in_seed) {
    auto records = sample(experimental_preset(), 2000, 1);
    BootstrapResult a = bootstrap_intervals(records, 20, 9);
    BootstrapResult b = bootstrap_intervals(records, 20, 9);
    BootstrapResult c = bootstrap_intervals(records, 20, 10);
    EXPECT_EQ(a.v_sq.mean, b.v_sq.mean);
    EXPECT_NE(a.v_sq.mean, c.v_sq.mean);
}

TEST(bootstrap, spread_tracks_repeated_run_variance) {
    // Oracle: the spread of v_sq over independent samples of the same size.
    const std::uint64_t n = 4000;
    std::vector<double> estimates;
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto r = sample(experimental_preset(), n, 1000 + s);
        estimates.push_back(diagnostics(reconstruct_gamma(empirical_covariance(r))).v_sq);
    }
    double m = 0, v = 0;
    for (double e : estimates) {
        m += e;
    }
    m /= estimates.size();
    for (double e : estimates) {
        v += (e - m) * (e - m);
    }
    const double sd_repeat = std::sqrt(v / (estimates.size() - 1));
    BootstrapResult b = bootstrap_intervals(sample(experimental_preset(), n, 77), 200, 3);
    EXPECT_GT(b.v_sq.sd, 0.6 * sd_repeat);
    EXPECT_LT(b.v_sq.sd, 1.6 * sd_repeat);
}

TEST(bootstrap, width_shrinks_like_inverse_root_n) {
    auto small = sample(experimental_preset(), 2500, 4);
    auto large = sample(experimental_preset(), 40000, 4);
    const double ws = bootstrap_intervals(small, 100, 1).v_sq.sd;
    const double wl = bootstrap_intervals(large, 100, 1).v_sq.sd;
    // Expected ratio 4.
    EXPECT_GT(ws / wl, 2.8);
    EXPECT_LT(ws / wl, 5.5);
}
