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
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace emudistill {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Output is a pure function of (key, counter), so any position of a stream
/// can be evaluated independently of every other position.
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Independent sub-streams of one seed, addressed by the `stream` tag.
enum class RngStream : std::uint32_t {
    records = 0,
    acceptance = 1,
    bootstrap = 2,
    test = 0xFFFF,
};

/// Convenience wrapper: a seed, a stream tag and a 64-bit position index give
/// a block of four 32-bit words; block `slot` distinguishes draws within one
/// position.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, RngStream stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(static_cast<std::uint32_t>(stream)) {
    }

    Philox4x32::Counter block(std::uint64_t index, std::uint32_t slot) const {
        Philox4x32::Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), slot,
                                stream_};
        return Philox4x32::generate(ctr, key_);
    }

    /// Two uniforms in [0, 1) with 53-bit resolution.
    std::pair<double, double> uniforms(std::uint64_t index, std::uint32_t slot) const {
        auto w = block(index, slot);
        return {to_unit(w[0], w[1]), to_unit(w[2], w[3])};
    }

    /// Two independent standard normals by the Box-Muller transform.
    std::pair<double, double> normals(std::uint64_t index, std::uint32_t slot) const {
        auto w = block(index, slot);
        return box_muller(to_unit_open_zero(w[0], w[1]), to_unit(w[2], w[3]));
    }

    /// 64 raw bits.
    std::uint64_t bits(std::uint64_t index, std::uint32_t slot) const {
        auto w = block(index, slot);
        return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    }

    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1].
    static double to_unit_open_zero(std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
        return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
    }

    /// u1 in (0, 1], u2 in [0, 1).
    static std::pair<double, double> box_muller(double u1, double u2) {
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

  private:
    Philox4x32::Key key_;
    std::uint32_t stream_;
};

}  // namespace emudistill
