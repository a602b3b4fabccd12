/*
 * Copyright (C) 2026 The amdet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AMDET_COMMON_HPP
#define AMDET_COMMON_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amdet {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Timestamps are explicit everywhere; no hidden clock reads.
using UnixTime = std::int64_t;

/// Base class for all amdet errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by ByteReader on any out-of-range access. Parsers translate it
// into their own Malformed* error at the module boundary, so a truncated
// or hostile input can never turn into an out-of-bounds read.
struct BoundsError : Error {
    using Error::Error;
};

struct MalformedContainer : Error { using Error::Error; };
struct UnsupportedCompression : Error { using Error::Error; };
struct EntryNotFound : Error { using Error::Error; };
struct CorruptEntry : Error { using Error::Error; };
struct MalformedAxml : Error { using Error::Error; };
struct MalformedDex : Error { using Error::Error; };
struct NoDexFound : Error { using Error::Error; };
struct MissingManifest : Error { using Error::Error; };
struct MalformedDer : Error { using Error::Error; };
struct NoCertificateFound : Error { using Error::Error; };
struct SchemaParseError : Error { using Error::Error; };
struct EmptySubset : Error { using Error::Error; };
struct BadDims : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct ModelParseError : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct EmptyTrainSet : Error { using Error::Error; };
struct BadK : Error { using Error::Error; };
struct SingleClassData : Error { using Error::Error; };
struct EmptyEvaluation : Error { using Error::Error; };
struct ManifestParseError : Error { using Error::Error; };
struct CsvParseError : Error { using Error::Error; };

struct NonFiniteLoss : Error {
    int epoch = 0;
    NonFiniteLoss(const std::string& msg, int epoch_index)
        : Error(msg), epoch(epoch_index) {}
};

struct ExtractionError : Error {
    std::string stage;
    ExtractionError(const std::string& stage_name, const std::string& msg)
        : Error(stage_name + ": " + msg), stage(stage_name) {}
};

using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string msg) {
    if (sink) sink->push_back(std::move(msg));
}

/// Bounds-checked little-endian cursor over an immutable byte view.
class ByteReader {
public:
    explicit ByteReader(ByteView data, std::size_t pos = 0)
        : data_(data), pos_(pos) {
        if (pos_ > data_.size()) throw BoundsError("reader start past end");
    }

    std::size_t pos() const { return pos_; }
    std::size_t size() const { return data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

    void seek(std::size_t pos) {
        if (pos > data_.size()) throw BoundsError("seek past end");
        pos_ = pos;
    }

    void skip(std::size_t n) {
        require(n);
        pos_ += n;
    }

    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }

    std::uint16_t u16() {
        require(2);
        std::uint16_t v = static_cast<std::uint16_t>(data_[pos_]) |
                          static_cast<std::uint16_t>(data_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        require(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
        pos_ += 4;
        return v;
    }

    ByteView bytes(std::size_t n) {
        require(n);
        ByteView v = data_.subspan(pos_, n);
        pos_ += n;
        return v;
    }

    ByteView peek_all() const { return data_; }

private:
    void require(std::size_t n) const {
        if (n > remaining()) throw BoundsError("read past end of input");
    }

    ByteView data_;
    std::size_t pos_;
};

inline ByteView as_bytes(std::string_view s) {
    return ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string hex_u32(std::uint32_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out = "0x";
    for (int shift = 28; shift >= 0; shift -= 4)
        out.push_back(digits[(v >> shift) & 0xF]);
    return out;
}

// days-from-civil (proleptic Gregorian, era-based formulation)
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline UnixTime civil_to_unix(int y, int mo, int d, int h = 0, int mi = 0, int s = 0) {
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

}  // namespace amdet

#endif  // AMDET_COMMON_HPP
