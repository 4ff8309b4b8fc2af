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

// Exact first-step output of Gaussian-acceptance Gaussification on a
// phase-diffused Gaussian record stream.
//
// Given the phases of both copies the records are Gaussian with covariance
// S = (R g R^T + I) / 2. The difference port m = (r1 - r2) / sqrt 2 is
// accepted with weight exp(-|m|^2 / (2 n_bar)) (the thermal-acceptance
// kernel written in quadrature units), which conditions the sum port like a
// noisy observation m = 0 with noise n_bar I. The output is the mixture over
// all four phases, weighted by the acceptance probability.
#pragma once

#include <cmath>
#include <vector>

#include "naive_matrix.hpp"

namespace oracle {

struct TreeResult {
    M4 gamma{};
    double acceptance = 0.0;
};

inline TreeResult gaussian_step_oracle(const M4 &g, double sigma, double n_bar, int nodes = 25, double span = 6.0) {
    // Trapezoid nodes for a N(0, sigma^2) phase.
    std::vector<double> phi, w;
    if (sigma == 0.0) {
        phi = {0.0};
        w = {1.0};
    } else {
        double total = 0.0;
        for (int i = 0; i < nodes; ++i) {
            const double x = -span + 2.0 * span * i / (nodes - 1);
            phi.push_back(x * sigma);
            w.push_back(std::exp(-0.5 * x * x));
            total += w.back();
        }
        for (double &v : w) {
            v /= total;
        }
    }
    const std::size_t n = phi.size();
    std::vector<M4> s(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s[i * n + j] = scale(add(rotate(g, phi[i], phi[j]), identity4()), 0.5);
        }
    }
    M4 acc{};
    double wsum = 0.0;
    for (std::size_t a = 0; a < n * n; ++a) {
        const double wa = w[a / n] * w[a % n];
        for (std::size_t b = 0; b < n * n; ++b) {
            const double wb = w[b / n] * w[b % n];
            const M4 &s1 = s[a];
            const M4 &s2 = s[b];
            M4 smm = scale(add(s1, s2), 0.5);
            M4 spm = scale(add(s1, s2, -1.0), 0.5);
            M4 kernel = add(smm, scale(identity4(), n_bar));
            // Acceptance probability det(I + Smm / n_bar)^(-1/2) = (n_bar^4 / det(Smm + n_bar I))^(1/2).
            const double p = std::sqrt(std::pow(n_bar, 4) / det(kernel));
            M4 cond = add(smm, mul(mul(spm, inverse(kernel)), transpose(spm)), -1.0);
            const double weight = wa * wb * p;
            acc = add(acc, cond, weight);
            wsum += weight;
        }
    }
    TreeResult out;
    out.acceptance = wsum;
    out.gamma = add(scale(acc, 2.0 / wsum), identity4(), -1.0);
    return out;
}

}  // namespace oracle
