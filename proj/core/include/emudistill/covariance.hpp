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
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "emudistill/linalg.hpp"

namespace emudistill {

/// Covariance matrix of a two-mode Gaussian state.
///
/// Quadrature order is (x_A, p_A, x_B, p_B) and the vacuum has covariance I.
/// The stored matrix is always exactly symmetric. Physicality is not enforced
/// here because reconstructions from finite data may legitimately violate it;
/// callers that need a physical state check `is_physical()`.
class CovarianceMatrix4 {
  public:
    /// Vacuum.
    CovarianceMatrix4();

    /// Builds from a matrix that must be symmetric within `symmetry_tol`
    /// (absolute, entrywise); the result is symmetrized. Non-finite entries
    /// and asymmetry beyond the tolerance throw ConfigError.
    static CovarianceMatrix4 from_matrix(const Mat4 &m, double symmetry_tol = 1e-9);
    static CovarianceMatrix4 from_row_major(std::span<const double, 16> entries, double symmetry_tol = 1e-9);
    static CovarianceMatrix4 vacuum();

    const Mat4 &matrix() const {
        return m_;
    }
    double operator()(int row, int col) const {
        return m_(row, col);
    }
    std::array<double, 16> row_major() const;

    Mat2 block_a() const {
        return m_.topLeftCorner<2, 2>();
    }
    Mat2 block_b() const {
        return m_.bottomRightCorner<2, 2>();
    }
    /// The A-B correlation block (rows x_A, p_A; columns x_B, p_B).
    Mat2 cross_block() const {
        return m_.topRightCorner<2, 2>();
    }

    /// Minimum symplectic eigenvalue >= 1 - eps and positive definite.
    bool is_physical(double eps = kPhysicalityEpsilon) const;

    /// Throws PhysicalityError naming `what` if `is_physical(eps)` is false.
    void require_physical(std::string_view what, double eps = kPhysicalityEpsilon) const;

    double frobenius_distance(const CovarianceMatrix4 &other) const {
        return (m_ - other.m_).norm();
    }

    bool operator==(const CovarianceMatrix4 &other) const {
        return m_ == other.m_;
    }

  private:
    explicit CovarianceMatrix4(const Mat4 &m) : m_(m) {
    }
    Mat4 m_;
};

/// Parameters of the symmetric two-mode squeezed form
///
///     [[a, 0, b, 0], [0, a, 0, -b], [b, 0, a, 0], [0, -b, 0, a]].
struct SymmetricTmsvParams {
    double a = 1.0;
    double b = 0.0;

    /// a = cosh 2r, b = sinh 2r (a pure state).
    static SymmetricTmsvParams from_squeezing(double r);
};

/// Throws PhysicalityError if a < 1 or |b| > sqrt(a^2 - 1).
CovarianceMatrix4 tmsv_covariance(const SymmetricTmsvParams &params);

/// Block-diagonal local phase rotation R(phi_a, phi_b); each 2x2 block is
/// [[cos, sin], [-sin, cos]].
Mat4 phase_rotation(double phi_a, double phi_b);

/// R gamma R^T.
CovarianceMatrix4 apply_rotation(const CovarianceMatrix4 &gamma, double phi_a, double phi_b);

/// Independent pure-loss channels with transmittances eta_a, eta_b in (0, 1]:
/// gamma -> G gamma G + (I - G^2), G = diag(sqrt(eta_a) I, sqrt(eta_b) I).
CovarianceMatrix4 loss_channel(const CovarianceMatrix4 &gamma, double eta_a, double eta_b);

/// The experimentally reconstructed two-mode covariance matrix used as the
/// "experimental" preset (stored verbatim, including small stray off-diagonals).
CovarianceMatrix4 experimental_preset();

/// JSON: {"units": "vacuum=1", "entries": [16 numbers, row-major]}.
std::string covariance_to_json(const CovarianceMatrix4 &gamma);
/// Accepts the format above; symmetrizes within 1e-9. Throws ConfigError.
CovarianceMatrix4 covariance_from_json(std::string_view text);

}  // namespace emudistill
