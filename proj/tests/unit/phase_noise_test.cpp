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
#include <numbers>

#include "gtest/gtest.h"

#include "emudistill/covariance.hpp"
#include "emudistill/errors.hpp"
#include "emudistill/phase_noise.hpp"
#include "phase_monte_carlo.hpp"
#include "test_util.hpp"

using namespace emudistill;

TEST(phase_noise, gauss_legendre_integrates_polynomials_exactly) {
    auto [x, w] = gauss_legendre(10, -1.0, 2.0);
    double s0 = 0.0, s5 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s0 += w[i];
        s5 += w[i] * std::pow(x[i], 5);
    }
    EXPECT_NEAR(s0, 3.0, 1e-13);
    EXPECT_NEAR(s5, (64.0 - 1.0) / 6.0, 1e-12);
}

TEST(phase_noise, gaussian_moments_closed_form) {
    for (double sigma : {0.1, 0.5, 1.3}) {
        auto c = ChannelNoise::gaussian(sigma);
        EXPECT_NEAR(c.moments().cos1, std::exp(-sigma * sigma / 2), 1e-15);
        EXPECT_NEAR(c.moments().cos2, std::exp(-2 * sigma * sigma), 1e-15);
        EXPECT_EQ(c.moments().sin1, 0.0);
    }
}

TEST(phase_noise, quadrature_moments_agree_with_closed_form) {
    const double sigma = 0.7;
    auto density = [sigma](double x) { return std::exp(-0.5 * x * x / (sigma * sigma)); };
    PhaseMoments m = moments_by_quadrature(density, -12 * sigma, 12 * sigma);
    EXPECT_NEAR(m.cos1, std::exp(-sigma * sigma / 2), 1e-12);
    EXPECT_NEAR(m.cos2, std::exp(-2 * sigma * sigma), 1e-12);
    EXPECT_NEAR(m.sin1, 0.0, 1e-14);
}

TEST(phase_noise, q_of_models) {
    EXPECT_EQ(PhaseNoiseModel::none().q(), 1.0);
    EXPECT_NEAR(PhaseNoiseModel::gaussian(0.4).q(), std::exp(-0.16), 1e-15);
    EXPECT_NEAR(PhaseNoiseModel::gaussian_for_q(0.78).q(), 0.78, 1e-14);
    EXPECT_THROW(PhaseNoiseModel::gaussian_for_q(0.0), ConfigError);
    EXPECT_THROW(PhaseNoiseModel::gaussian_for_q(1.2), ConfigError);
    EXPECT_TRUE(PhaseNoiseModel::none().is_trivial());
}

TEST(phase_noise, table_validation) {
    EXPECT_THROW(ChannelNoise::table({{0.1, 0.5}, {-0.1, 0.4}}), ConfigError);
    EXPECT_THROW(ChannelNoise::table({{0.1, 0.5}, {-0.3, 0.5}}), ConfigError);
    auto t = ChannelNoise::table({{0.2, 0.5}, {-0.2, 0.5}});
    EXPECT_NEAR(t.moments().cos1, std::cos(0.2), 1e-15);
    EXPECT_EQ(t.phase(0.0, 0.25), 0.2);
    EXPECT_EQ(t.phase(0.0, 0.75), -0.2);
}

TEST(phase_noise, density_channel_samples_its_distribution) {
    auto c = ChannelNoise::density([](double x) { return 1.0 - std::abs(x); }, -1.0, 1.0);
    EXPECT_NEAR(c.phase(0.0, 0.5), 0.0, 1e-3);
    // Triangular CDF: F(x) = (1 + x)^2 / 2 for x <= 0.
    EXPECT_NEAR(c.phase(0.0, 0.125), -0.5, 1e-3);
    // <cos> = 2 (1 - cos 1); the kink at 0 limits Gauss-Legendre to algebraic convergence.
    EXPECT_NEAR(c.moments().cos1, 2.0 * (1.0 - std::cos(1.0)), 1e-5);
    auto smooth = ChannelNoise::density([](double x) { return std::exp(-x * x / 0.08); }, -2.0, 2.0);
    EXPECT_NEAR(smooth.moments().cos1, std::exp(-0.02), 1e-10);
}

TEST(phase_noise, symmetric_form_keeps_a_and_scales_b) {
    auto g = tmsv_covariance({3.583, 3.417});
    for (double q : {0.2, 0.78, 1.0}) {
        auto d = dephase_covariance(g, PhaseNoiseModel::gaussian_for_q(q));
        EXPECT_NEAR(d(0, 0), 3.583, 1e-12);
        EXPECT_NEAR(d(1, 1), 3.583, 1e-12);
        EXPECT_NEAR(d(0, 2), q * 3.417, 1e-12);
        EXPECT_NEAR(d(1, 3), -q * 3.417, 1e-12);
        EXPECT_NEAR(d(0, 3), 0.0, 1e-12);
    }
}

TEST(phase_noise, moments_average_matches_monte_carlo) {
    const Mat4 g = experimental_preset().matrix();
    for (auto [sa, sb] : {std::pair{0.5, 0.5}, std::pair{0.3, 0.9}}) {
        Mat4 exact = phase_average(g, PhaseNoiseModel::gaussian(sa, sb));
        auto mc = oracle::monte_carlo_phase_average(testutil::to_oracle(g), sa, sb, 1000000, 99);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                EXPECT_LE(std::abs(exact(i, j) - mc.mean[i][j]), 5.0 * mc.stderr_[i][j] + 1e-12)
                    << "entry " << i << "," << j;
            }
        }
    }
}

TEST(phase_noise, no_noise_is_identity_map) {
    Mat4 g = experimental_preset().matrix();
    EXPECT_LT(testutil::max_abs_diff(phase_average(g, PhaseNoiseModel::none()), g), 1e-15);
}

TEST(phase_noise, uniform_phase_destroys_coherences) {
    // Uniform table over four quadrant angles: <cos> = <cos 2phi> = 0.
    std::vector<std::pair<double, double>> quad;
    for (int k = 0; k < 4; ++k) {
        quad.emplace_back(k * std::numbers::pi / 2 - std::numbers::pi * 0.75, 0.25);
    }
    auto c = ChannelNoise::table(quad);
    auto d = dephase_covariance(tmsv_covariance({2.0, 1.5}), PhaseNoiseModel(c, c));
    EXPECT_NEAR(d.cross_block().norm(), 0.0, 1e-12);
}
