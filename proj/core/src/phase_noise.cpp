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

#include "emudistill/phase_noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "emudistill/errors.hpp"

namespace emudistill {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr int kInverseCdfIntervals = 4096;

void require_symmetric(const PhaseMoments &m, const char *kind) {
    if (std::abs(m.sin1) > kSymmetryTolerance) {
        std::ostringstream msg;
        msg << kind << " phase noise is not symmetric: <sin phi> = " << m.sin1;
        throw ConfigError(msg.str());
    }
}

// Second moment E[R_ik R_jl] of a 2x2 rotation [[c, s], [-s, c]].
// Each entry is alpha*c + beta*s.
constexpr int kAlpha[2][2] = {{1, 0}, {0, 1}};
constexpr int kBeta[2][2] = {{0, 1}, {-1, 0}};

double rotation_second_moment(const PhaseMoments &m, int i, int k, int j, int l) {
    const double cc = 0.5 * (1.0 + m.cos2);
    const double ss = 0.5 * (1.0 - m.cos2);
    const double cs = 0.5 * m.sin2;
    return kAlpha[i][k] * kAlpha[j][l] * cc + (kAlpha[i][k] * kBeta[j][l] + kBeta[i][k] * kAlpha[j][l]) * cs +
           kBeta[i][k] * kBeta[j][l] * ss;
}

Mat2 average_local_block(const Mat2 &x, const PhaseMoments &m) {
    Mat2 out = Mat2::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    out(i, j) += rotation_second_moment(m, i, k, j, l) * x(k, l);
                }
            }
        }
    }
    return out;
}

Mat2 mean_rotation(const PhaseMoments &m) {
    Mat2 r;
    r << m.cos1, m.sin1, -m.sin1, m.cos1;
    return r;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order, double lo, double hi) {
    if (order < 1) {
        throw ConfigError("Gauss-Legendre order must be >= 1");
    }
    std::vector<double> nodes(order), weights(order);
    const int half = (order + 1) / 2;
    const double mid = 0.5 * (hi + lo);
    const double rad = 0.5 * (hi - lo);
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int n = 1; n <= order; ++n) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p2) / n;
            }
            dp = order * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) {
                break;
            }
        }
        nodes[i] = mid - rad * z;
        nodes[order - 1 - i] = mid + rad * z;
        weights[i] = weights[order - 1 - i] = 2.0 * rad / ((1.0 - z * z) * dp * dp);
    }
    return {nodes, weights};
}

PhaseMoments moments_by_quadrature(const std::function<double(double)> &density, double lo, double hi, int order) {
    auto [nodes, weights] = gauss_legendre(order, lo, hi);
    double norm = 0, c1 = 0, s1 = 0, c2 = 0, s2 = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        double w = weights[k] * density(nodes[k]);
        double phi = nodes[k];
        norm += w;
        c1 += w * std::cos(phi);
        s1 += w * std::sin(phi);
        c2 += w * std::cos(2.0 * phi);
        s2 += w * std::sin(2.0 * phi);
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ConfigError("phase density does not integrate to a positive finite value");
    }
    return PhaseMoments{c1 / norm, s1 / norm, c2 / norm, s2 / norm};
}

struct ChannelNoise::InverseCdf {
    double lo = 0.0;
    double step = 0.0;
    std::vector<double> cdf;  // kInverseCdfIntervals + 1 points, cdf[0] = 0, cdf.back() = 1
};

ChannelNoise ChannelNoise::none() {
    return ChannelNoise();
}

ChannelNoise ChannelNoise::gaussian(double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        std::ostringstream msg;
        msg << "Gaussian phase noise requires a finite sigma >= 0 (got " << sigma << ")";
        throw ConfigError(msg.str());
    }
    ChannelNoise n;
    n.kind_ = Kind::gaussian_iid;
    n.sigma_ = sigma;
    const double var = sigma * sigma;
    n.moments_ = PhaseMoments{std::exp(-0.5 * var), 0.0, std::exp(-2.0 * var), 0.0};
    return n;
}

ChannelNoise ChannelNoise::table(std::vector<std::pair<double, double>> entries) {
    if (entries.empty()) {
        throw ConfigError("discrete phase table is empty");
    }
    double total = 0.0;
    PhaseMoments m{0.0, 0.0, 0.0, 0.0};
    for (const auto &[phi, p] : entries) {
        if (!std::isfinite(phi) || !(p >= 0.0)) {
            throw ConfigError("discrete phase table needs finite phases and non-negative probabilities");
        }
        total += p;
        m.cos1 += p * std::cos(phi);
        m.sin1 += p * std::sin(phi);
        m.cos2 += p * std::cos(2.0 * phi);
        m.sin2 += p * std::sin(2.0 * phi);
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "discrete phase table probabilities sum to " << total << ", not 1";
        throw ConfigError(msg.str());
    }
    require_symmetric(m, "discrete_table");
    ChannelNoise n;
    n.kind_ = Kind::discrete_table;
    n.moments_ = m;
    n.table_cdf_.reserve(entries.size());
    double acc = 0.0;
    for (const auto &e : entries) {
        acc += e.second;
        n.table_cdf_.push_back(acc);
    }
    n.table_ = std::move(entries);
    return n;
}

ChannelNoise ChannelNoise::density(std::function<double(double)> density, double lo, double hi,
                                   int quadrature_order) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ConfigError("phase density support must be a finite interval lo < hi");
    }
    PhaseMoments m = moments_by_quadrature(density, lo, hi, quadrature_order);
    require_symmetric(m, "density");

    auto inv = std::make_shared<InverseCdf>();
    inv->lo = lo;
    inv->step = (hi - lo) / kInverseCdfIntervals;
    inv->cdf.resize(kInverseCdfIntervals + 1);
    inv->cdf[0] = 0.0;
    double prev = std::max(0.0, density(lo));
    for (int k = 1; k <= kInverseCdfIntervals; ++k) {
        double cur = std::max(0.0, density(lo + k * inv->step));
        inv->cdf[k] = inv->cdf[k - 1] + 0.5 * (prev + cur) * inv->step;
        prev = cur;
    }
    double total = inv->cdf.back();
    if (!(total > 0.0)) {
        throw ConfigError("phase density has no mass on its support");
    }
    for (double &c : inv->cdf) {
        c /= total;
    }

    ChannelNoise n;
    n.kind_ = Kind::density;
    n.moments_ = m;
    n.inverse_cdf_ = std::move(inv);
    return n;
}

double ChannelNoise::phase(double standard_normal, double uniform) const {
    switch (kind_) {
        case Kind::none:
            return 0.0;
        case Kind::gaussian_iid:
            return sigma_ * standard_normal;
        case Kind::discrete_table: {
            auto it = std::upper_bound(table_cdf_.begin(), table_cdf_.end(), uniform);
            std::size_t idx = std::min<std::size_t>(it - table_cdf_.begin(), table_.size() - 1);
            return table_[idx].first;
        }
        case Kind::density: {
            const auto &cdf = inverse_cdf_->cdf;
            auto it = std::upper_bound(cdf.begin(), cdf.end(), uniform);
            std::size_t hi = std::clamp<std::size_t>(it - cdf.begin(), 1, cdf.size() - 1);
            std::size_t lo = hi - 1;
            double span = cdf[hi] - cdf[lo];
            double frac = span > 0.0 ? (uniform - cdf[lo]) / span : 0.5;
            return inverse_cdf_->lo + (static_cast<double>(lo) + frac) * inverse_cdf_->step;
        }
    }
    return 0.0;
}

std::string ChannelNoise::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::none:
            out << "none";
            break;
        case Kind::gaussian_iid:
            out << "gaussian_iid(sigma=" << sigma_ << ")";
            break;
        case Kind::discrete_table:
            out << "discrete_table(" << table_.size() << " entries)";
            break;
        case Kind::density:
            out << "density";
            break;
    }
    return out.str();
}

PhaseNoiseModel PhaseNoiseModel::none() {
    return PhaseNoiseModel();
}

PhaseNoiseModel PhaseNoiseModel::gaussian(double sigma) {
    return PhaseNoiseModel(ChannelNoise::gaussian(sigma), ChannelNoise::gaussian(sigma));
}

PhaseNoiseModel PhaseNoiseModel::gaussian(double sigma_a, double sigma_b) {
    return PhaseNoiseModel(ChannelNoise::gaussian(sigma_a), ChannelNoise::gaussian(sigma_b));
}

PhaseNoiseModel PhaseNoiseModel::gaussian_for_q(double q) {
    if (!(q > 0.0 && q <= 1.0)) {
        std::ostringstream msg;
        msg << "phase diffusion factor q must lie in (0, 1] (got " << q << ")";
        throw ConfigError(msg.str());
    }
    return gaussian(std::sqrt(-std::log(q)));
}

std::string PhaseNoiseModel::describe() const {
    return "A: " + a_.describe() + ", B: " + b_.describe();
}

Mat4 phase_average(const Mat4 &x, const PhaseNoiseModel &noise) {
    const PhaseMoments &ma = noise.channel_a().moments();
    const PhaseMoments &mb = noise.channel_b().moments();
    Mat4 out;
    out.topLeftCorner<2, 2>() = average_local_block(x.topLeftCorner<2, 2>(), ma);
    out.bottomRightCorner<2, 2>() = average_local_block(x.bottomRightCorner<2, 2>(), mb);
    // Independent channels: the cross blocks only see first moments.
    Mat2 ra = mean_rotation(ma);
    Mat2 rb = mean_rotation(mb);
    out.topRightCorner<2, 2>() = ra * x.topRightCorner<2, 2>() * rb.transpose();
    out.bottomLeftCorner<2, 2>() = rb * x.bottomLeftCorner<2, 2>() * ra.transpose();
    return out;
}

CovarianceMatrix4 dephase_covariance(const CovarianceMatrix4 &gamma, const PhaseNoiseModel &noise) {
    require_symmetric(noise.channel_a().moments(), "channel A");
    require_symmetric(noise.channel_b().moments(), "channel B");
    return CovarianceMatrix4::from_matrix(symmetrized(phase_average(gamma.matrix(), noise)), 1e-9);
}

}  // namespace emudistill
