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

#include "emudistill/covariance.hpp"

#include <cmath>
#include <sstream>

#include "emudistill/diagnostics.hpp"
#include "emudistill/errors.hpp"
#include "json.hpp"

namespace emudistill {

CovarianceMatrix4::CovarianceMatrix4() : m_(Mat4::Identity()) {
}

CovarianceMatrix4 CovarianceMatrix4::vacuum() {
    return CovarianceMatrix4();
}

CovarianceMatrix4 CovarianceMatrix4::from_matrix(const Mat4 &m, double symmetry_tol) {
    if (!m.allFinite()) {
        throw ConfigError("covariance matrix has non-finite entries");
    }
    for (int r = 0; r < 4; ++r) {
        for (int c = r + 1; c < 4; ++c) {
            double diff = std::abs(m(r, c) - m(c, r));
            if (diff > symmetry_tol) {
                std::ostringstream msg;
                msg << "covariance matrix is not symmetric: |m(" << r << "," << c << ") - m(" << c << "," << r
                    << ")| = " << diff << " exceeds " << symmetry_tol;
                throw ConfigError(msg.str());
            }
        }
    }
    return CovarianceMatrix4(symmetrized(m));
}

CovarianceMatrix4 CovarianceMatrix4::from_row_major(std::span<const double, 16> entries, double symmetry_tol) {
    Mat4 m;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m(r, c) = entries[4 * r + c];
        }
    }
    return from_matrix(m, symmetry_tol);
}

std::array<double, 16> CovarianceMatrix4::row_major() const {
    std::array<double, 16> out{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out[4 * r + c] = m_(r, c);
        }
    }
    return out;
}

bool CovarianceMatrix4::is_physical(double eps) const {
    Eigen::SelfAdjointEigenSolver<Mat4> eig(m_, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues()(0) > 0.0)) {
        return false;
    }
    return symplectic_moduli(m_)[0] >= 1.0 - eps;
}

void CovarianceMatrix4::require_physical(std::string_view what, double eps) const {
    if (!is_physical(eps)) {
        std::ostringstream msg;
        msg << what << " is not a physical covariance matrix (minimum symplectic eigenvalue "
            << symplectic_moduli(m_)[0] << " < 1)";
        throw PhysicalityError(msg.str());
    }
}

SymmetricTmsvParams SymmetricTmsvParams::from_squeezing(double r) {
    return SymmetricTmsvParams{std::cosh(2.0 * r), std::sinh(2.0 * r)};
}

CovarianceMatrix4 tmsv_covariance(const SymmetricTmsvParams &params) {
    const double a = params.a;
    const double b = params.b;
    if (!std::isfinite(a) || !std::isfinite(b) || a < 1.0) {
        std::ostringstream msg;
        msg << "two-mode squeezed form requires a >= 1 (got a = " << a << ")";
        throw PhysicalityError(msg.str());
    }
    // |b| <= sqrt(a^2 - 1), written to stay exact for pure states built from r.
    if (b * b > (a * a - 1.0) * (1.0 + 1e-12) + 1e-12) {
        std::ostringstream msg;
        msg << "two-mode squeezed form requires |b| <= sqrt(a^2 - 1) (got a = " << a << ", b = " << b << ")";
        throw PhysicalityError(msg.str());
    }
    Mat4 m;
    m << a, 0, b, 0,
         0, a, 0, -b,
         b, 0, a, 0,
         0, -b, 0, a;
    return CovarianceMatrix4::from_matrix(m, 0.0);
}

Mat4 phase_rotation(double phi_a, double phi_b) {
    const double ca = std::cos(phi_a), sa = std::sin(phi_a);
    const double cb = std::cos(phi_b), sb = std::sin(phi_b);
    Mat4 r;
    r << ca, sa, 0, 0,
         -sa, ca, 0, 0,
         0, 0, cb, sb,
         0, 0, -sb, cb;
    return r;
}

CovarianceMatrix4 apply_rotation(const CovarianceMatrix4 &gamma, double phi_a, double phi_b) {
    Mat4 r = phase_rotation(phi_a, phi_b);
    Mat4 out = r * gamma.matrix() * r.transpose();
    return CovarianceMatrix4::from_matrix(symmetrized(out), 1e-9);
}

CovarianceMatrix4 loss_channel(const CovarianceMatrix4 &gamma, double eta_a, double eta_b) {
    for (double eta : {eta_a, eta_b}) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            std::ostringstream msg;
            msg << "loss channel transmittance must lie in (0, 1] (got " << eta << ")";
            throw ConfigError(msg.str());
        }
    }
    Vec4 g(std::sqrt(eta_a), std::sqrt(eta_a), std::sqrt(eta_b), std::sqrt(eta_b));
    Vec4 added(1.0 - eta_a, 1.0 - eta_a, 1.0 - eta_b, 1.0 - eta_b);
    Mat4 out = g.asDiagonal() * gamma.matrix() * g.asDiagonal();
    out += added.asDiagonal();
    return CovarianceMatrix4::from_matrix(symmetrized(out), 1e-9);
}

CovarianceMatrix4 experimental_preset() {
    Mat4 m;
    m << 3.20, -0.13, -2.90, -0.04,
         -0.13, 6.24, -0.03, 6.08,
         -2.90, -0.03, 3.70, -0.06,
         -0.04, 6.08, -0.06, 6.83;
    return CovarianceMatrix4::from_matrix(m, 0.0);
}

std::string covariance_to_json(const CovarianceMatrix4 &gamma) {
    nlohmann::ordered_json j;
    j["units"] = "vacuum=1";
    auto entries = gamma.row_major();
    j["entries"] = std::vector<double>(entries.begin(), entries.end());
    return j.dump(2);
}

CovarianceMatrix4 covariance_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("covariance JSON does not parse: ") + e.what());
    }
    if (!j.is_object() || !j.contains("entries")) {
        throw ConfigError("covariance JSON must be an object with an \"entries\" array");
    }
    if (!j.contains("units") || j["units"] != "vacuum=1") {
        throw ConfigError("covariance JSON must carry \"units\": \"vacuum=1\"");
    }
    const auto &arr = j["entries"];
    if (!arr.is_array() || arr.size() != 16) {
        throw ConfigError("covariance JSON \"entries\" must hold exactly 16 numbers (row-major)");
    }
    std::array<double, 16> entries{};
    for (std::size_t k = 0; k < 16; ++k) {
        if (!arr[k].is_number()) {
            throw ConfigError("covariance JSON entry " + std::to_string(k) + " is not a number");
        }
        entries[k] = arr[k].get<double>();
    }
    return CovarianceMatrix4::from_row_major(entries, 1e-9);
}

}  // namespace emudistill
