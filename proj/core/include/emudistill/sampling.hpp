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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "emudistill/covariance.hpp"
#include "emudistill/phase_noise.hpp"
#include "emudistill/rng.hpp"

namespace emudistill {

/// One eight-port homodyne outcome pair: quadrature readings of modes A and B.
///
/// Records drawn from a state with covariance gamma have covariance
/// (gamma + I) / 2; the extra I / 2 is the heterodyne vacuum penalty.
struct HeterodyneRecord {
    double x_a = 0.0;
    double p_a = 0.0;
    double x_b = 0.0;
    double p_b = 0.0;

    Vec4 as_vector() const {
        return Vec4(x_a, p_a, x_b, p_b);
    }
    static HeterodyneRecord from_vector(const Vec4 &v) {
        return HeterodyneRecord{v(0), v(1), v(2), v(3)};
    }
    bool operator==(const HeterodyneRecord &) const = default;
};

/// Complex coherent amplitudes (alpha, beta) of a record: alpha = (x_a + i p_a) / sqrt 2.
std::pair<std::complex<double>, std::complex<double>> amplitude_of(const HeterodyneRecord &record);

/// Inverse of `amplitude_of`.
HeterodyneRecord record_from_amplitudes(std::complex<double> alpha, std::complex<double> beta);

/// Subtracts `offset` from every record (local coherent displacement of the data).
void displace_records(std::span<HeterodyneRecord> records, const Vec4 &offset);

struct SamplerConfig {
    std::uint64_t seed = 1;
    std::uint64_t count = 0;
    CovarianceMatrix4 state;
    PhaseNoiseModel noise;
    /// Optional (eta_a, eta_b) applied before the phase noise.
    std::optional<std::pair<double, double>> loss;
    std::uint64_t chunk_size = 65536;
    /// Worker threads used to fill each chunk. Output does not depend on it.
    unsigned threads = 1;

    /// Throws ConfigError / PhysicalityError.
    void validate() const;
};

/// Draws records as pure functions of (seed, index).
///
/// Record i is R(phi_A, phi_B) L z with L L^T = (gamma_loss + I) / 2, z a
/// standard normal 4-vector and the phases drawn from the noise model.
class RecordSampler {
  public:
    explicit RecordSampler(const SamplerConfig &config);

    HeterodyneRecord draw(std::uint64_t index) const;

    /// Fills out[k] = draw(first_index + k).
    void fill(std::uint64_t first_index, std::span<HeterodyneRecord> out) const;

    /// Covariance of the state after the optional loss channel, before phase noise.
    const CovarianceMatrix4 &effective_state() const {
        return effective_state_;
    }

  private:
    CounterRng rng_;
    PhaseNoiseModel noise_;
    CovarianceMatrix4 effective_state_;
    Mat4 factor_;
};

/// Chunked, resumable stream over `config.count` records.
///
/// Chunks are filled by `config.threads` workers. Because every record is a
/// function of its index alone, the concatenated output is independent of
/// chunk size and worker count.
class RecordStream {
  public:
    explicit RecordStream(const SamplerConfig &config, std::uint64_t start_chunk = 0);

    /// Fills `out` with the next chunk; returns false at the end of the stream.
    bool next_chunk(std::vector<HeterodyneRecord> &out);

    std::uint64_t position() const {
        return next_index_;
    }

  private:
    RecordSampler sampler_;
    std::uint64_t count_;
    std::uint64_t chunk_size_;
    unsigned threads_;
    std::uint64_t next_index_;
};

/// Whole stream in memory.
std::vector<HeterodyneRecord> sample_stream(const SamplerConfig &config);

/// Least-squares q minimising ||C_dephased - q C_initial||_F over the A-B cross block.
/// Throws NumericalError when the initial cross block vanishes.
double estimate_q_from_covariances(const CovarianceMatrix4 &gamma_initial, const CovarianceMatrix4 &gamma_dephased);

}  // namespace emudistill
