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

#include <cstdint>
#include <span>

#include "emudistill/covariance.hpp"
#include "emudistill/sampling.hpp"

namespace emudistill {

/// Streaming mean / covariance of 4-vectors (Welford update, Chan merge).
/// Merging chunk-wise accumulators reproduces the serial result up to
/// floating-point reassociation.
class MomentAccumulator {
  public:
    void add(const Vec4 &x) {
        ++count_;
        Vec4 delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_.noalias() += delta * (x - mean_).transpose();
    }
    void add(const HeterodyneRecord &r) {
        add(r.as_vector());
    }
    void add(std::span<const HeterodyneRecord> records) {
        for (const auto &r : records) {
            add(r);
        }
    }

    void merge(const MomentAccumulator &other);

    std::uint64_t count() const {
        return count_;
    }
    const Vec4 &mean() const {
        return mean_;
    }
    /// Unbiased (n - 1) covariance; requires count() >= 2.
    Mat4 covariance() const;

  private:
    std::uint64_t count_ = 0;
    Vec4 mean_ = Vec4::Zero();
    Mat4 m2_ = Mat4::Zero();
};

/// gamma = 2 Sigma - I, the state covariance behind a record covariance Sigma.
CovarianceMatrix4 reconstruct_gamma(const Mat4 &record_covariance);

/// Mean-subtracted unbiased covariance of the records (>= 2 records).
Mat4 empirical_covariance(std::span<const HeterodyneRecord> records);

}  // namespace emudistill
