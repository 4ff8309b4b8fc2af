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

#include "emudistill/bootstrap.hpp"

#include <cmath>
#include <vector>

#include "emudistill/errors.hpp"
#include "emudistill/rng.hpp"
#include "emudistill/statistics.hpp"

namespace emudistill {

namespace {

Interval summarize(const std::vector<double> &values) {
    Interval iv;
    std::size_t n = 0;
    double sum = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) {
            sum += v;
            ++n;
        }
    }
    if (n == 0) {
        iv.mean = iv.sd = iv.lo = iv.hi = std::nan("");
        return iv;
    }
    iv.mean = sum / static_cast<double>(n);
    // Identical values: report them exactly instead of a rounded mean with a tiny spread.
    double first = std::nan("");
    bool constant = true;
    for (double v : values) {
        if (std::isfinite(v)) {
            if (std::isnan(first)) {
                first = v;
            } else if (v != first) {
                constant = false;
                break;
            }
        }
    }
    if (constant) {
        iv.mean = iv.lo = iv.hi = first;
        iv.sd = 0.0;
        return iv;
    }
    double ss = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) {
            ss += (v - iv.mean) * (v - iv.mean);
        }
    }
    iv.sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    iv.lo = iv.mean - 2.0 * iv.sd;
    iv.hi = iv.mean + 2.0 * iv.sd;
    return iv;
}

__extension__ typedef unsigned __int128 uint128;

// Uniform integer in [0, n) from 64 random bits (multiply-shift).
std::size_t bounded(std::uint64_t bits, std::size_t n) {
    return static_cast<std::size_t>((static_cast<uint128>(bits) * n) >> 64);
}

}  // namespace

BootstrapResult bootstrap_intervals(std::span<const HeterodyneRecord> records, int resamples, std::uint64_t seed) {
    if (records.size() < 2 || resamples < 1) {
        return BootstrapResult{};
    }

    // Center once on the full-sample mean so the raw second moments stay well conditioned.
    MomentAccumulator full;
    full.add(records);
    const Vec4 center = full.mean();
    std::vector<Vec4> centered(records.size());
    for (std::size_t k = 0; k < records.size(); ++k) {
        centered[k] = records[k].as_vector() - center;
    }

    const CounterRng rng(seed, RngStream::bootstrap);
    const std::size_t n = records.size();
    const double dn = static_cast<double>(n);
    std::vector<Mat4> gammas;
    gammas.reserve(static_cast<std::size_t>(resamples));
    for (int b = 0; b < resamples; ++b) {
        Vec4 s1 = Vec4::Zero();
        Mat4 s2 = Mat4::Zero();
        for (std::size_t k = 0; k < n; ++k) {
            const Vec4 &x = centered[bounded(rng.bits(k, static_cast<std::uint32_t>(b)), n)];
            s1 += x;
            s2.noalias() += x * x.transpose();
        }
        Mat4 cov = (s2 - s1 * s1.transpose() / dn) / (dn - 1.0);
        gammas.push_back(symmetrized(2.0 * cov - Mat4::Identity()));
    }
    return summarize_resamples(gammas);
}

BootstrapResult summarize_resamples(const std::vector<Mat4> &gammas) {
    BootstrapResult result;
    if (gammas.empty()) {
        return result;
    }
    result.defined = true;
    result.resamples = static_cast<int>(gammas.size());
    std::vector<double> v_sq, mu, purity;
    Mat4 sum_gamma = Mat4::Zero();
    Mat4 sum_gamma_sq = Mat4::Zero();
    for (const Mat4 &gamma : gammas) {
        Diagnostics d = diagnostics_unchecked(gamma);
        v_sq.push_back(d.v_sq);
        mu.push_back(d.mu);
        purity.push_back(d.purity_g);
        if (!std::isfinite(d.purity_g)) {
            ++result.degenerate;
        }
        sum_gamma += gamma;
        sum_gamma_sq += gamma.cwiseProduct(gamma);
    }
    result.v_sq = summarize(v_sq);
    result.mu = summarize(mu);
    result.purity_g = summarize(purity);
    const double nb = static_cast<double>(gammas.size());
    result.gamma_mean = sum_gamma / nb;
    if (gammas.size() > 1) {
        Mat4 var = (sum_gamma_sq - sum_gamma.cwiseProduct(sum_gamma) / nb) / (nb - 1.0);
        result.gamma_sd = var.cwiseMax(0.0).cwiseSqrt();
    }
    return result;
}

}  // namespace emudistill
