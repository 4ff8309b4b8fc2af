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

#include <Eigen/Dense>

namespace emudistill {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Tolerance for physicality checks on analytically constructed matrices.
inline constexpr double kPhysicalityEpsilon = 1e-9;

/// Inputs whose estimated condition number exceeds this are rejected by `solve_inverse`.
inline constexpr double kMaxConditionNumber = 1e12;

/// blockdiag([[0,1],[-1,0]], [[0,1],[-1,0]]) in (x_A, p_A, x_B, p_B) order.
Mat4 symplectic_form();

/// Partial transposition on mode B: diag(1, 1, 1, -1).
Mat4 partial_transpose_b();

/// Partial transposition on mode A: diag(1, -1, 1, 1).
Mat4 partial_transpose_a();

/// Inverse of a 4x4 matrix by LU with partial pivoting.
///
/// Throws NumericalError when the reciprocal condition estimate implies a
/// condition number above `kMaxConditionNumber`.
Mat4 solve_inverse(const Mat4 &m);

/// (m + m^T) / 2. Exact for matrices that are already symmetric.
inline Mat4 symmetrized(const Mat4 &m) {
    return (0.5 * (m + m.transpose())).eval();
}

}  // namespace emudistill
