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
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "emudistill/sampling.hpp"

namespace emudistill {

/// Binary layout (little-endian): a 16-byte header holding the magic "EHD1",
/// a u16 version and 10 reserved zero bytes, then one 32-byte record per
/// outcome as four float64 values (x_a, p_a, x_b, p_b) in stream order.
/// The text alternative is CSV with the header line "x_a,p_a,x_b,p_b".
enum class RecordFormat { binary, csv };

inline constexpr char kRecordMagic[4] = {'E', 'H', 'D', '1'};
inline constexpr std::uint16_t kRecordVersion = 1;
inline constexpr std::size_t kRecordHeaderBytes = 16;
inline constexpr std::size_t kRecordBytes = 32;

/// `.csv` selects CSV; everything else binary.
RecordFormat format_for_path(const std::filesystem::path &path);

class RecordWriter {
  public:
    RecordWriter(const std::filesystem::path &path, RecordFormat format);
    void write(std::span<const HeterodyneRecord> records);
    /// Flushes and closes; throws IoError on failure.
    void close();
    std::uint64_t written() const {
        return written_;
    }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    RecordFormat format_;
    std::uint64_t written_ = 0;
};

/// Streaming reader that accepts either format (detected from the first bytes).
/// An empty file is an empty stream. Malformed content throws ParseError with
/// the index and byte offset of the first bad record.
class RecordReader {
  public:
    explicit RecordReader(const std::filesystem::path &path);

    /// Reads up to `max_records`; returns false once the stream is exhausted.
    bool next_chunk(std::vector<HeterodyneRecord> &out, std::size_t max_records = 65536);

    RecordFormat format() const {
        return format_;
    }
    std::uint64_t records_read() const {
        return index_;
    }

  private:
    bool next_binary(std::vector<HeterodyneRecord> &out, std::size_t max_records);
    bool next_csv(std::vector<HeterodyneRecord> &out, std::size_t max_records);

    std::filesystem::path path_;
    std::ifstream in_;
    RecordFormat format_ = RecordFormat::binary;
    bool empty_ = false;
    std::uint64_t index_ = 0;
    std::uint64_t offset_ = 0;
    std::uint64_t line_ = 1;
};

void write_records(const std::filesystem::path &path, std::span<const HeterodyneRecord> records,
                   RecordFormat format = RecordFormat::binary);
std::vector<HeterodyneRecord> read_records(const std::filesystem::path &path);

}  // namespace emudistill
