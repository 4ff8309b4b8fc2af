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

#include "emudistill/statistics.hpp"

#include "emudistill/errors.hpp"

namespace emudistill {

void MomentAccumulator::merge(const MomentAccumulator &other) {
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    Vec4 delta = other.mean_ - mean_;
    m2_ += other.m2_ + delta * delta.transpose() * (na * nb / n);
    mean_ += delta * (nb / n);
    count_ += other.count_;
}

Mat4 MomentAccumulator::covariance() const {
    if (count_ < 2) {
        throw NumericalError("covariance needs at least two samples");
    }
    return symmetrized(m2_ / static_cast<double>(count_ - 1));
}

CovarianceMatrix4 reconstruct_gamma(const Mat4 &record_covariance) {
    return CovarianceMatrix4::from_matrix(symmetrized(2.0 * record_covariance - Mat4::Identity()), 1e-9);
}

Mat4 empirical_covariance(std::span<const HeterodyneRecord> records) {
    MomentAccumulator acc;
    acc.add(records);
    return acc.covariance();
}

}  // namespace emudistill
