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

#include <array>

#include "emudistill/covariance.hpp"

namespace emudistill {

struct Diagnostics {
    /// Minimum eigenvalue of the covariance matrix (two-mode squeezing variance).
    double v_sq = 1.0;
    /// Minimum symplectic eigenvalue of the partially transposed matrix.
    double mu = 1.0;
    /// 1 / sqrt(det gamma); the purity for Gaussian states.
    double purity_g = 1.0;
    bool entangled = false;
    bool squeezed = false;
};

/// Symplectic eigenvalues, largest first.
struct SymplecticSpectrum {
    double nu_max = 1.0;
    double nu_min = 1.0;
};

/// Squeezing, entanglement and purity diagnostics.
///
/// Throws PhysicalityError if gamma is not positive definite; the message names
/// the offending eigenvalue.
Diagnostics diagnostics(const CovarianceMatrix4 &gamma);

/// Same quantities without the positive-definiteness check. `purity_g` is NaN
/// when det gamma <= 0. Used on bootstrap resamples, which may be degenerate.
Diagnostics diagnostics_unchecked(const Mat4 &gamma);

/// Moduli of the eigenvalues of i*Omega*gamma, paired into two values.
/// Throws PhysicalityError if gamma is not positive definite.
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix4 &gamma);

/// Sorted (ascending) moduli of the four eigenvalues of i*Omega*m. No checks.
std::array<double, 4> symplectic_moduli(const Mat4 &m);

/// Smallest symplectic eigenvalue of Lambda gamma Lambda, Lambda = diag(1,1,1,-1).
double min_symplectic_eigenvalue_pt(const Mat4 &gamma);

}  // namespace emudistill
