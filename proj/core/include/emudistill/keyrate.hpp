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

#include "emudistill/covariance.hpp"

namespace emudistill {

struct KeyRateResult {
    /// Mutual information of the heterodyne outcomes, bits per state.
    double i_ab = 0.0;
    /// Holevo bound on Eve's information about Bob's outcome, bits per state.
    double chi_ae = 0.0;
    /// beta_rec * i_ab - chi_ae; may be negative.
    double k = 0.0;
    double beta_rec = 1.0;
};

/// Von Neumann entropy of a thermal mode with symplectic eigenvalue nu (vacuum = 1).
/// Values in [1 - kPhysicalityEpsilon, 1] map to 0; smaller values throw PhysicalityError.
double entropy_g(double nu);

/// I(A:B) of the outcomes when both modes are heterodyned: outcome covariance (gamma + I) / 2.
double mutual_information(const CovarianceMatrix4 &gamma);

/// Reverse-reconciliation Holevo quantity under a collective Gaussian attack:
/// S(AB) - S(A | Bob's heterodyne outcome).
double holevo_bound(const CovarianceMatrix4 &gamma);

/// Throws ConfigError unless beta_rec lies in (0, 1].
KeyRateResult key_rate(const CovarianceMatrix4 &gamma, double beta_rec = 1.0);

}  // namespace emudistill
