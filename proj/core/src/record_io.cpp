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

#include "emudistill/record_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string_view>

#include "emudistill/errors.hpp"

namespace emudistill {

namespace {

constexpr std::string_view kCsvHeader = "x_a,p_a,x_b,p_b";

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t out = 0;
        for (int k = 0; k < 8; ++k) {
            out = (out << 8) | ((v >> (8 * k)) & 0xFF);
        }
        return out;
    }
}

void encode(const HeterodyneRecord &r, unsigned char *dst) {
    const double vals[4] = {r.x_a, r.p_a, r.x_b, r.p_b};
    for (int k = 0; k < 4; ++k) {
        std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(vals[k]));
        std::memcpy(dst + 8 * k, &bits, 8);
    }
}

HeterodyneRecord decode(const unsigned char *src) {
    double vals[4];
    for (int k = 0; k < 4; ++k) {
        std::uint64_t bits;
        std::memcpy(&bits, src + 8 * k, 8);
        vals[k] = std::bit_cast<double>(to_little_endian(bits));
    }
    return HeterodyneRecord{vals[0], vals[1], vals[2], vals[3]};
}

bool all_finite(const HeterodyneRecord &r) {
    return std::isfinite(r.x_a) && std::isfinite(r.p_a) && std::isfinite(r.x_b) && std::isfinite(r.p_b);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

}  // namespace

RecordFormat format_for_path(const std::filesystem::path &path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv" ? RecordFormat::csv : RecordFormat::binary;
}

RecordWriter::RecordWriter(const std::filesystem::path &path, RecordFormat format)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), format_(format) {
    if (!out_) {
        throw IoError("cannot open record file for writing: " + path.string());
    }
    if (format_ == RecordFormat::binary) {
        std::array<unsigned char, kRecordHeaderBytes> header{};
        std::memcpy(header.data(), kRecordMagic, 4);
        header[4] = static_cast<unsigned char>(kRecordVersion & 0xFF);
        header[5] = static_cast<unsigned char>(kRecordVersion >> 8);
        out_.write(reinterpret_cast<const char *>(header.data()), header.size());
    } else {
        out_ << kCsvHeader << '\n';
    }
}

void RecordWriter::write(std::span<const HeterodyneRecord> records) {
    if (format_ == RecordFormat::binary) {
        std::vector<unsigned char> buf(records.size() * kRecordBytes);
        for (std::size_t k = 0; k < records.size(); ++k) {
            encode(records[k], buf.data() + k * kRecordBytes);
        }
        out_.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
    } else {
        std::string line;
        char num[64];
        for (const auto &r : records) {
            line.clear();
            const double vals[4] = {r.x_a, r.p_a, r.x_b, r.p_b};
            for (int k = 0; k < 4; ++k) {
                auto res = std::to_chars(num, num + sizeof(num), vals[k]);
                line.append(num, res.ptr);
                line.push_back(k < 3 ? ',' : '\n');
            }
            out_ << line;
        }
    }
    if (!out_) {
        throw IoError("write failed: " + path_.string());
    }
    written_ += records.size();
}

void RecordWriter::close() {
    out_.flush();
    if (!out_) {
        throw IoError("write failed: " + path_.string());
    }
    out_.close();
}

RecordReader::RecordReader(const std::filesystem::path &path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) {
        throw IoError("cannot open record file: " + path.string());
    }
    char head[kRecordHeaderBytes];
    in_.read(head, kRecordHeaderBytes);
    const auto got = static_cast<std::size_t>(in_.gcount());
    if (got == 0) {
        empty_ = true;
        return;
    }
    if (got >= 4 && std::memcmp(head, kRecordMagic, 4) == 0) {
        if (got < kRecordHeaderBytes) {
            throw ParseError("truncated record file header (" + std::to_string(got) + " of 16 bytes) in " +
                                 path.string(),
                             0, 0);
        }
        std::uint16_t version = static_cast<std::uint16_t>(static_cast<unsigned char>(head[4]) |
                                                           (static_cast<unsigned char>(head[5]) << 8));
        if (version != kRecordVersion) {
            throw ParseError("unsupported record file version " + std::to_string(version), 0, 4);
        }
        format_ = RecordFormat::binary;
        offset_ = kRecordHeaderBytes;
        return;
    }
    // Text format: the first line must be the CSV header.
    in_.clear();
    in_.seekg(0);
    std::string first;
    std::getline(in_, first);
    if (trim(first) != kCsvHeader) {
        throw ParseError("not a record file (no EHD1 magic and no \"x_a,p_a,x_b,p_b\" CSV header): " +
                             path.string(),
                         0, 0);
    }
    format_ = RecordFormat::csv;
    offset_ = first.size() + 1;
    line_ = 2;
}

bool RecordReader::next_chunk(std::vector<HeterodyneRecord> &out, std::size_t max_records) {
    out.clear();
    if (empty_ || max_records == 0) {
        return false;
    }
    return format_ == RecordFormat::binary ? next_binary(out, max_records) : next_csv(out, max_records);
}

bool RecordReader::next_binary(std::vector<HeterodyneRecord> &out, std::size_t max_records) {
    std::vector<unsigned char> buf(max_records * kRecordBytes);
    in_.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size()));
    const auto got = static_cast<std::size_t>(in_.gcount());
    const std::size_t whole = got / kRecordBytes;
    out.reserve(whole);
    for (std::size_t k = 0; k < whole; ++k) {
        HeterodyneRecord r = decode(buf.data() + k * kRecordBytes);
        if (!all_finite(r)) {
            std::ostringstream msg;
            msg << "record " << index_ << " at byte offset " << offset_ << " holds a non-finite value";
            throw ParseError(msg.str(), index_, offset_);
        }
        out.push_back(r);
        ++index_;
        offset_ += kRecordBytes;
    }
    if (got % kRecordBytes != 0) {
        std::ostringstream msg;
        msg << "truncated record " << index_ << " at byte offset " << offset_ << " (" << got % kRecordBytes
            << " of " << kRecordBytes << " bytes)";
        throw ParseError(msg.str(), index_, offset_);
    }
    return !out.empty();
}

bool RecordReader::next_csv(std::vector<HeterodyneRecord> &out, std::size_t max_records) {
    std::string line;
    while (out.size() < max_records && std::getline(in_, line)) {
        const std::uint64_t line_offset = offset_;
        offset_ += line.size() + 1;
        std::string_view view = trim(line);
        ++line_;
        if (view.empty()) {
            continue;
        }
        double vals[4];
        const char *p = view.data();
        const char *end = view.data() + view.size();
        bool ok = true;
        for (int k = 0; k < 4 && ok; ++k) {
            while (p < end && *p == ' ') {
                ++p;
            }
            auto res = std::from_chars(p, end, vals[k]);
            if (res.ec != std::errc() || !std::isfinite(vals[k])) {
                ok = false;
                break;
            }
            p = res.ptr;
            while (p < end && *p == ' ') {
                ++p;
            }
            if (k < 3) {
                if (p >= end || *p != ',') {
                    ok = false;
                    break;
                }
                ++p;
            }
        }
        if (!ok || p != end) {
            std::ostringstream msg;
            msg << "malformed CSV record " << index_ << " on line " << (line_ - 1) << " (byte offset "
                << line_offset << "): \"" << view << "\"";
            throw ParseError(msg.str(), index_, line_offset);
        }
        out.push_back(HeterodyneRecord{vals[0], vals[1], vals[2], vals[3]});
        ++index_;
    }
    return !out.empty();
}

void write_records(const std::filesystem::path &path, std::span<const HeterodyneRecord> records,
                   RecordFormat format) {
    RecordWriter writer(path, format);
    writer.write(records);
    writer.close();
}

std::vector<HeterodyneRecord> read_records(const std::filesystem::path &path) {
    RecordReader reader(path);
    std::vector<HeterodyneRecord> all, chunk;
    while (reader.next_chunk(chunk)) {
        all.insert(all.end(), chunk.begin(), chunk.end());
    }
    return all;
}

}  // namespace emudistill
