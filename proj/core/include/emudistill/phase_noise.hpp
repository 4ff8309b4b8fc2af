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

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "emudistill/covariance.hpp"

namespace emudistill {

/// Trigonometric moments of one channel's random phase:
/// <cos phi>, <sin phi>, <cos 2phi>, <sin 2phi>.
struct PhaseMoments {
    double cos1 = 1.0;
    double sin1 = 0.0;
    double cos2 = 1.0;
    double sin2 = 0.0;
};

/// Gauss-Legendre nodes and weights on [lo, hi].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order, double lo, double hi);

/// Moments of an (unnormalized) density on [lo, hi] by Gauss-Legendre quadrature.
PhaseMoments moments_by_quadrature(const std::function<double(double)> &density, double lo, double hi,
                                   int order = 201);

/// Random-phase distribution of a single channel.
class ChannelNoise {
  public:
    enum class Kind { none, gaussian_iid, discrete_table, density };

    /// No phase noise.
    ChannelNoise() = default;

    static ChannelNoise none();
    /// Zero-mean Gaussian phase with standard deviation `sigma` radians.
    static ChannelNoise gaussian(double sigma);
    /// Discrete distribution over (phase, probability) pairs.
    static ChannelNoise table(std::vector<std::pair<double, double>> entries);
    /// Continuous density on [lo, hi] (need not be normalized). Moments use
    /// Gauss-Legendre quadrature of `quadrature_order` nodes; draws use a
    /// tabulated inverse CDF.
    static ChannelNoise density(std::function<double(double)> density, double lo, double hi,
                                int quadrature_order = 201);

    Kind kind() const {
        return kind_;
    }
    double sigma() const {
        return sigma_;
    }
    const std::vector<std::pair<double, double>> &entries() const {
        return table_;
    }
    const PhaseMoments &moments() const {
        return moments_;
    }

    /// Maps one standard normal and one uniform [0,1) variate to a phase.
    /// Gaussian noise uses the normal, table and density kinds use the uniform.
    double phase(double standard_normal, double uniform) const;

    std::string describe() const;

  private:
    struct InverseCdf;

    Kind kind_ = Kind::none;
    double sigma_ = 0.0;
    std::vector<std::pair<double, double>> table_;
    std::vector<double> table_cdf_;
    std::shared_ptr<const InverseCdf> inverse_cdf_;
    PhaseMoments moments_;
};

/// Independent phase noise on modes A and B.
///
/// Every constructed model satisfies <sin phi> = 0 per channel; asymmetric
/// distributions are rejected with ConfigError.
class PhaseNoiseModel {
  public:
    PhaseNoiseModel() = default;
    PhaseNoiseModel(ChannelNoise a, ChannelNoise b) : a_(std::move(a)), b_(std::move(b)) {
    }

    static PhaseNoiseModel none();
    /// Equal Gaussian noise on both channels.
    static PhaseNoiseModel gaussian(double sigma);
    static PhaseNoiseModel gaussian(double sigma_a, double sigma_b);
    /// Equal-variance Gaussian channels with q = exp(-sigma^2); q in (0, 1].
    static PhaseNoiseModel gaussian_for_q(double q);

    const ChannelNoise &channel_a() const {
        return a_;
    }
    const ChannelNoise &channel_b() const {
        return b_;
    }

    /// q = <cos phi_A cos phi_B> = <cos phi_A><cos phi_B>.
    double q() const {
        return a_.moments().cos1 * b_.moments().cos1;
    }

    bool is_trivial() const {
        return a_.kind() == ChannelNoise::Kind::none && b_.kind() == ChannelNoise::Kind::none;
    }

    std::string describe() const;

  private:
    ChannelNoise a_;
    ChannelNoise b_;
};

/// <R(phi) X R(phi)^T>_phi for an arbitrary 4x4 matrix X, evaluated exactly
/// from the per-channel trigonometric moments.
Mat4 phase_average(const Mat4 &x, const PhaseNoiseModel &noise);

/// Covariance of the phase-diffused state. For the symmetric squeezed form the
/// result keeps a and scales b by q.
CovarianceMatrix4 dephase_covariance(const CovarianceMatrix4 &gamma, const PhaseNoiseModel &noise);

}  // namespace emudistill
