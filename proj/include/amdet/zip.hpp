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

// Read-only APK (PKZIP) container access. The central directory is
// authoritative over local headers; only stored and deflate entries are
// supported, the two methods legal in APKs. No ZIP64, no encryption.

#ifndef AMDET_ZIP_HPP
#define AMDET_ZIP_HPP

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amdet/common.hpp"

namespace amdet::zip {

constexpr std::uint32_t kEocdSignature = 0x06054B50;
constexpr std::uint32_t kCentralSignature = 0x02014B50;
constexpr std::uint32_t kLocalSignature = 0x04034B50;
constexpr std::size_t kEocdBaseLen = 22;
constexpr std::size_t kLocalBaseLen = 30;
constexpr std::size_t kMaxCommentLen = 65535;

constexpr std::uint16_t kMethodStored = 0;
constexpr std::uint16_t kMethodDeflate = 8;

struct EntryMeta {
    std::string name;  // normalized path
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint16_t method = 0;
    std::uint16_t flags = 0;
    std::uint32_t crc32 = 0;
    std::uint32_t local_header_offset = 0;

    bool stored() const { return method == kMethodStored; }
    bool deflated() const { return method == kMethodDeflate; }
};

/// Backslashes become slashes; leading "/" and "./" are dropped.
inline std::string normalize_name(std::string_view raw) {
    std::string s(raw);
    std::replace(s.begin(), s.end(), '\\', '/');
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '/') {
            ++i;
        } else if (s.compare(i, 2, "./") == 0) {
            i += 2;
        } else {
            break;
        }
    }
    return s.substr(i);
}

class ApkArchive {
public:
    ApkArchive(Bytes bytes, std::vector<EntryMeta> entries, std::size_t eocd_offset)
        : bytes_(std::move(bytes)),
          entries_(std::move(entries)),
          eocd_offset_(eocd_offset) {
        for (std::size_t i = 0; i < entries_.size(); ++i)
            index_[entries_[i].name] = i;
    }

    const std::vector<EntryMeta>& entries() const { return entries_; }
    std::size_t eocd_offset() const { return eocd_offset_; }
    ByteView bytes() const { return bytes_; }

    bool contains(std::string_view name) const {
        return index_.count(normalize_name(name)) > 0;
    }

    const EntryMeta* find(std::string_view name) const {
        auto it = index_.find(normalize_name(name));
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

private:
    Bytes bytes_;
    std::vector<EntryMeta> entries_;
    std::size_t eocd_offset_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

namespace detail {

inline std::size_t find_eocd(ByteView bytes) {
    if (bytes.size() < kEocdBaseLen)
        throw MalformedContainer("input too small for an end-of-central-directory record");
    std::size_t scan_limit =
        bytes.size() >= kEocdBaseLen + kMaxCommentLen ? bytes.size() - kEocdBaseLen - kMaxCommentLen : 0;
    for (std::size_t pos = bytes.size() - kEocdBaseLen + 1; pos-- > scan_limit;) {
        ByteReader r(bytes, pos);
        if (r.u32() != kEocdSignature) continue;
        r.skip(16);
        std::uint16_t comment_len = r.u16();
        if (pos + kEocdBaseLen + comment_len == bytes.size()) return pos;
    }
    throw MalformedContainer("no end-of-central-directory record found");
}

inline Bytes inflate_raw(ByteView compressed, std::size_t expected_size) {
    Bytes out(expected_size);
    z_stream strm{};
    if (inflateInit2(&strm, -MAX_WBITS) != Z_OK)
        throw CorruptEntry("inflate initialization failed");
    strm.next_in = const_cast<Bytef*>(compressed.data());
    strm.avail_in = static_cast<uInt>(compressed.size());
    strm.next_out = out.data();
    strm.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&strm, Z_FINISH);
    std::size_t produced = out.size() - strm.avail_out;
    inflateEnd(&strm);
    if (rc != Z_STREAM_END || produced != expected_size)
        throw CorruptEntry("inflate failure or size mismatch");
    return out;
}

}  // namespace detail

/// Parses the container from the central directory; nothing is
/// decompressed yet. Duplicate names keep the last central-directory
/// occurrence, matching the Android runtime, and record a warning.
inline ApkArchive open_apk(Bytes bytes, Warnings* warnings = nullptr) {
    if (bytes.empty()) throw MalformedContainer("empty input");
    try {
        ByteView view(bytes);
        std::size_t eocd = detail::find_eocd(view);
        ByteReader r(view, eocd + 4);
        r.skip(4);  // disk numbers
        r.skip(2);  // entries on this disk
        std::uint16_t total_entries = r.u16();
        std::uint32_t cd_size = r.u32();
        std::uint32_t cd_offset = r.u32();
        if (static_cast<std::size_t>(cd_offset) + cd_size > eocd)
            throw MalformedContainer("central directory outside file");

        std::vector<EntryMeta> entries;
        std::map<std::string, std::size_t, std::less<>> seen;
        ByteReader cd(view, cd_offset);
        for (std::uint32_t n = 0; n < total_entries; ++n) {
            if (cd.pos() + 4 > static_cast<std::size_t>(cd_offset) + cd_size)
                throw MalformedContainer("truncated central directory");
            if (cd.u32() != kCentralSignature)
                throw MalformedContainer("bad central directory entry signature");
            cd.skip(4);  // version made by / needed
            EntryMeta e;
            e.flags = cd.u16();
            e.method = cd.u16();
            cd.skip(4);  // mod time/date
            e.crc32 = cd.u32();
            e.compressed_size = cd.u32();
            e.uncompressed_size = cd.u32();
            std::uint16_t name_len = cd.u16();
            std::uint16_t extra_len = cd.u16();
            std::uint16_t comment_len = cd.u16();
            cd.skip(8);  // disk start, internal/external attrs
            e.local_header_offset = cd.u32();
            ByteView name_bytes = cd.bytes(name_len);
            cd.skip(static_cast<std::size_t>(extra_len) + comment_len);
            e.name = normalize_name(
                std::string_view(reinterpret_cast<const char*>(name_bytes.data()), name_len));

            if (static_cast<std::size_t>(e.local_header_offset) + kLocalBaseLen > eocd)
                throw MalformedContainer("local header offset out of bounds for " + e.name);
            if (e.stored() && e.compressed_size != e.uncompressed_size)
                throw MalformedContainer("stored entry with mismatched sizes: " + e.name);

            auto it = seen.find(e.name);
            if (it != seen.end()) {
                warn(warnings, "duplicate entry name, last occurrence wins: " + e.name);
                entries[it->second] = std::move(e);
            } else {
                seen[e.name] = entries.size();
                entries.push_back(std::move(e));
            }
        }
        return ApkArchive(std::move(bytes), std::move(entries), eocd);
    } catch (const BoundsError&) {
        throw MalformedContainer("truncated container");
    }
}

/// Fully decompressed entry bytes; CRC32 (IEEE) verified against the
/// central directory record.
inline Bytes read_entry(const ApkArchive& archive, std::string_view name) {
    const EntryMeta* e = archive.find(name);
    if (!e) throw EntryNotFound("no entry named " + std::string(name));
    if (e->flags & 0x1) throw UnsupportedCompression("encrypted entry: " + e->name);
    if (!e->stored() && !e->deflated())
        throw UnsupportedCompression("entry " + e->name + " uses method " +
                                     std::to_string(e->method));
    try {
        ByteReader r(archive.bytes(), e->local_header_offset);
        if (r.u32() != kLocalSignature)
            throw CorruptEntry("bad local header signature for " + e->name);
        r.skip(18);
        r.skip(4);  // local sizes; central directory is authoritative
        std::uint16_t name_len = r.u16();
        std::uint16_t extra_len = r.u16();
        r.skip(static_cast<std::size_t>(name_len) + extra_len);
        ByteView payload = r.bytes(e->compressed_size);

        Bytes out;
        if (e->stored()) {
            out.assign(payload.begin(), payload.end());
        } else {
            out = detail::inflate_raw(payload, e->uncompressed_size);
        }
        std::uint32_t actual =
            static_cast<std::uint32_t>(::crc32(0L, out.data(), static_cast<uInt>(out.size())));
        if (actual != e->crc32)
            throw CorruptEntry("crc mismatch for " + e->name);
        return out;
    } catch (const BoundsError&) {
        throw CorruptEntry("entry data out of bounds for " + e->name);
    }
}

struct AssetApkSignals {
    std::vector<std::string> by_extension;
    std::vector<std::string> by_magic;
};

inline bool ends_with_apk(std::string_view name) {
    if (name.size() < 4) return false;
    std::string tail(name.substr(name.size() - 4));
    for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return tail == ".apk";
}

/// fs5: an assets/ entry named *.apk or starting with the ZIP local-header
/// magic. Unreadable asset entries are skipped with a warning.
inline bool assets_contain_apk(const ApkArchive& archive, Warnings* warnings = nullptr,
                               AssetApkSignals* signals = nullptr) {
    bool found = false;
    for (const EntryMeta& e : archive.entries()) {
        if (e.name.rfind("assets/", 0) != 0) continue;
        if (ends_with_apk(e.name)) {
            if (signals) signals->by_extension.push_back(e.name);
            found = true;
            continue;
        }
        try {
            Bytes head = read_entry(archive, e.name);
            if (head.size() >= 4 && head[0] == 0x50 && head[1] == 0x4B && head[2] == 0x03 &&
                head[3] == 0x04) {
                if (signals) signals->by_magic.push_back(e.name);
                found = true;
            }
        } catch (const Error& err) {
            warn(warnings, std::string("unreadable asset entry skipped: ") + e.name + " (" +
                               err.what() + ")");
        }
    }
    return found;
}

}  // namespace amdet::zip

#endif  // AMDET_ZIP_HPP
