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

#include "emudistill/keyrate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "emudistill/diagnostics.hpp"
#include "emudistill/errors.hpp"

namespace emudistill {

namespace {

double log2_det_pd(const Eigen::Ref<const Eigen::MatrixXd> &m, const char *what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw PhysicalityError(std::string(what) + " is not positive definite");
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        s += std::log2(llt.matrixL()(i, i));
    }
    return 2.0 * s;
}

}  // namespace

double entropy_g(double nu) {
    if (!std::isfinite(nu) || nu < 1.0 - kPhysicalityEpsilon) {
        std::ostringstream msg;
        msg << "symplectic eigenvalue " << nu << " is below the vacuum level";
        throw PhysicalityError(msg.str());
    }
    if (nu <= 1.0) {
        return 0.0;
    }
    // x = mean photon number; g = (x + 1) log2(x + 1) - x log2 x.
    const double x = 0.5 * (nu - 1.0);
    return ((x + 1.0) * std::log1p(x) - x * std::log(x)) / std::numbers::ln2;
}

double mutual_information(const CovarianceMatrix4 &gamma) {
    gamma.require_physical("mutual information input");
    const Mat4 sigma = 0.5 * (gamma.matrix() + Mat4::Identity());
    const double la = log2_det_pd(sigma.topLeftCorner<2, 2>(), "outcome covariance of A");
    const double lb = log2_det_pd(sigma.bottomRightCorner<2, 2>(), "outcome covariance of B");
    const double lab = log2_det_pd(sigma, "outcome covariance");
    return 0.5 * (la + lb - lab);
}

double holevo_bound(const CovarianceMatrix4 &gamma) {
    gamma.require_physical("Holevo bound input");
    SymplecticSpectrum spec = symplectic_spectrum(gamma);
    const Mat2 ga = gamma.block_a();
    const Mat2 gb = gamma.block_b();
    const Mat2 c = gamma.cross_block();
    const Mat2 conditional = ga - c * (gb + Mat2::Identity()).inverse() * c.transpose();
    const double det = conditional.determinant();
    const double nu_cond = std::sqrt(std::max(det, 0.0));
    return entropy_g(spec.nu_max) + entropy_g(spec.nu_min) - entropy_g(nu_cond);
}

KeyRateResult key_rate(const CovarianceMatrix4 &gamma, double beta_rec) {
    if (!(beta_rec > 0.0 && beta_rec <= 1.0)) {
        throw ConfigError("reconciliation efficiency must lie in (0, 1]");
    }
    KeyRateResult result;
    result.beta_rec = beta_rec;
    result.i_ab = mutual_information(gamma);
    result.chi_ae = holevo_bound(gamma);
    result.k = beta_rec * result.i_ab - result.chi_ae;
    return result;
}

}  // namespace emudistill
