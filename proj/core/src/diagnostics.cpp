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

#include "emudistill/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "emudistill/errors.hpp"

namespace emudistill {

namespace {

void require_positive_definite(const Mat4 &m) {
    Eigen::SelfAdjointEigenSolver<Mat4> eig(m, Eigen::EigenvaluesOnly);
    const Vec4 &ev = eig.eigenvalues();
    if (!(ev(0) > 0.0)) {
        std::ostringstream msg;
        msg << "covariance matrix is not positive definite: eigenvalue[0] = " << ev(0)
            << " (spectrum " << ev(0) << ", " << ev(1) << ", " << ev(2) << ", " << ev(3) << ")";
        throw PhysicalityError(msg.str());
    }
}

}  // namespace

std::array<double, 4> symplectic_moduli(const Mat4 &m) {
    // Eigenvalues of i*Omega*m are i times those of Omega*m.
    Mat4 om = symplectic_form() * m;
    Eigen::EigenSolver<Mat4> solver(om, false);
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) {
        out[k] = std::abs(solver.eigenvalues()(k));
    }
    std::sort(out.begin(), out.end());
    return out;
}

double min_symplectic_eigenvalue_pt(const Mat4 &gamma) {
    Mat4 lam = partial_transpose_b();
    return symplectic_moduli(lam * gamma * lam)[0];
}

Diagnostics diagnostics_unchecked(const Mat4 &gamma) {
    Diagnostics d;
    Eigen::SelfAdjointEigenSolver<Mat4> eig(gamma, Eigen::EigenvaluesOnly);
    d.v_sq = eig.eigenvalues()(0);
    d.mu = min_symplectic_eigenvalue_pt(gamma);
    double det = gamma.determinant();
    d.purity_g = det > 0.0 ? 1.0 / std::sqrt(det) : std::numeric_limits<double>::quiet_NaN();
    d.entangled = d.mu < 1.0;
    d.squeezed = d.v_sq < 1.0;
    return d;
}

Diagnostics diagnostics(const CovarianceMatrix4 &gamma) {
    require_positive_definite(gamma.matrix());
    return diagnostics_unchecked(gamma.matrix());
}

SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix4 &gamma) {
    require_positive_definite(gamma.matrix());
    auto mod = symplectic_moduli(gamma.matrix());
    // The moduli come in equal pairs for a positive definite matrix.
    return SymplecticSpectrum{0.5 * (mod[2] + mod[3]), 0.5 * (mod[0] + mod[1])};
}

}  // namespace emudistill
