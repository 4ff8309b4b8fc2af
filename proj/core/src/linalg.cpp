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

#include "emudistill/linalg.hpp"

#include <sstream>

#include "emudistill/errors.hpp"

namespace emudistill {

Mat4 symplectic_form() {
    Mat4 omega = Mat4::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

Mat4 partial_transpose_b() {
    return Vec4(1.0, 1.0, 1.0, -1.0).asDiagonal();
}

Mat4 partial_transpose_a() {
    return Vec4(1.0, -1.0, 1.0, 1.0).asDiagonal();
}

Mat4 solve_inverse(const Mat4 &m) {
    Eigen::PartialPivLU<Mat4> lu(m);
    double rcond = lu.rcond();
    if (!(rcond > 1.0 / kMaxConditionNumber)) {
        std::ostringstream msg;
        msg << "matrix inversion is ill-conditioned (reciprocal condition estimate " << rcond << ")";
        throw NumericalError(msg.str());
    }
    return lu.inverse();
}

}  // namespace emudistill
