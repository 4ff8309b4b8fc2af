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

#include "emudistill/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "emudistill/errors.hpp"

namespace emudistill {

namespace {

// Philox block slots used per record.
constexpr std::uint32_t kSlotQuadratures01 = 0;
constexpr std::uint32_t kSlotQuadratures23 = 1;
constexpr std::uint32_t kSlotPhaseNormals = 2;
constexpr std::uint32_t kSlotPhaseUniforms = 3;

}  // namespace

std::pair<std::complex<double>, std::complex<double>> amplitude_of(const HeterodyneRecord &r) {
    const double s = std::numbers::sqrt2 / 2.0;
    return {std::complex<double>(r.x_a * s, r.p_a * s), std::complex<double>(r.x_b * s, r.p_b * s)};
}

HeterodyneRecord record_from_amplitudes(std::complex<double> alpha, std::complex<double> beta) {
    const double s = std::numbers::sqrt2;
    return HeterodyneRecord{alpha.real() * s, alpha.imag() * s, beta.real() * s, beta.imag() * s};
}

void displace_records(std::span<HeterodyneRecord> records, const Vec4 &offset) {
    for (auto &r : records) {
        r.x_a -= offset(0);
        r.p_a -= offset(1);
        r.x_b -= offset(2);
        r.p_b -= offset(3);
    }
}

void SamplerConfig::validate() const {
    if (count < 1) {
        throw ConfigError("sampler count must be >= 1");
    }
    if (chunk_size < 1) {
        throw ConfigError("sampler chunk_size must be >= 1");
    }
    if (threads < 1) {
        throw ConfigError("sampler needs at least one worker thread");
    }
    state.require_physical("sampler input state");
    for (const ChannelNoise *ch : {&noise.channel_a(), &noise.channel_b()}) {
        if (std::abs(ch->moments().sin1) > 1e-12) {
            throw ConfigError("sampler noise model is not symmetric");
        }
    }
    if (loss) {
        // Validates the transmittances.
        (void)loss_channel(state, loss->first, loss->second);
    }
}

RecordSampler::RecordSampler(const SamplerConfig &config)
    : rng_(config.seed, RngStream::records), noise_(config.noise), effective_state_(config.state) {
    config.state.require_physical("sampler input state");
    if (config.loss) {
        effective_state_ = loss_channel(config.state, config.loss->first, config.loss->second);
    }
    Mat4 record_cov = 0.5 * (effective_state_.matrix() + Mat4::Identity());
    Eigen::LLT<Mat4> llt(record_cov);
    if (llt.info() != Eigen::Success) {
        throw PhysicalityError("record covariance (gamma + I) / 2 is not positive definite");
    }
    factor_ = llt.matrixL();
}

HeterodyneRecord RecordSampler::draw(std::uint64_t index) const {
    auto [z0, z1] = rng_.normals(index, kSlotQuadratures01);
    auto [z2, z3] = rng_.normals(index, kSlotQuadratures23);
    Vec4 v = factor_ * Vec4(z0, z1, z2, z3);
    if (noise_.is_trivial()) {
        return HeterodyneRecord::from_vector(v);
    }
    const ChannelNoise &na = noise_.channel_a();
    const ChannelNoise &nb = noise_.channel_b();
    double na_normal = 0.0, nb_normal = 0.0, ua = 0.0, ub = 0.0;
    if (na.kind() == ChannelNoise::Kind::gaussian_iid || nb.kind() == ChannelNoise::Kind::gaussian_iid) {
        std::tie(na_normal, nb_normal) = rng_.normals(index, kSlotPhaseNormals);
    }
    if (na.kind() == ChannelNoise::Kind::discrete_table || na.kind() == ChannelNoise::Kind::density ||
        nb.kind() == ChannelNoise::Kind::discrete_table || nb.kind() == ChannelNoise::Kind::density) {
        std::tie(ua, ub) = rng_.uniforms(index, kSlotPhaseUniforms);
    }
    const double phi_a = na.phase(na_normal, ua);
    const double phi_b = nb.phase(nb_normal, ub);
    const double ca = std::cos(phi_a), sa = std::sin(phi_a);
    const double cb = std::cos(phi_b), sb = std::sin(phi_b);
    return HeterodyneRecord{ca * v(0) + sa * v(1), -sa * v(0) + ca * v(1), cb * v(2) + sb * v(3),
                            -sb * v(2) + cb * v(3)};
}

void RecordSampler::fill(std::uint64_t first_index, std::span<HeterodyneRecord> out) const {
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = draw(first_index + k);
    }
}

RecordStream::RecordStream(const SamplerConfig &config, std::uint64_t start_chunk)
    : sampler_((config.validate(), config)),
      count_(config.count),
      chunk_size_(config.chunk_size),
      threads_(config.threads),
      next_index_(std::min(config.count, start_chunk * config.chunk_size)) {
}

bool RecordStream::next_chunk(std::vector<HeterodyneRecord> &out) {
    if (next_index_ >= count_) {
        out.clear();
        return false;
    }
    const std::uint64_t n = std::min(chunk_size_, count_ - next_index_);
    out.resize(n);
    const std::uint64_t first = next_index_;
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(threads_, n));
    if (workers <= 1) {
        sampler_.fill(first, out);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        const std::uint64_t per = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * per;
            const std::uint64_t hi = std::min(n, lo + per);
            if (lo >= hi) {
                break;
            }
            pool.emplace_back([this, &out, first, lo, hi] {
                sampler_.fill(first + lo, std::span<HeterodyneRecord>(out.data() + lo, hi - lo));
            });
        }
    }
    next_index_ += n;
    return true;
}

std::vector<HeterodyneRecord> sample_stream(const SamplerConfig &config) {
    RecordStream stream(config);
    std::vector<HeterodyneRecord> all;
    all.reserve(config.count);
    std::vector<HeterodyneRecord> chunk;
    while (stream.next_chunk(chunk)) {
        all.insert(all.end(), chunk.begin(), chunk.end());
    }
    return all;
}

double estimate_q_from_covariances(const CovarianceMatrix4 &gamma_initial, const CovarianceMatrix4 &gamma_dephased) {
    Mat2 ci = gamma_initial.cross_block();
    Mat2 cd = gamma_dephased.cross_block();
    double denom = ci.squaredNorm();
    if (!(denom > 0.0)) {
        throw NumericalError("q is undefined: the initial state has a vanishing A-B correlation block");
    }
    return (ci.array() * cd.array()).sum() / denom;
}

}  // namespace emudistill
