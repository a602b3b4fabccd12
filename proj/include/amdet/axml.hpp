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

// Decoder for Android binary XML (the AXML chunk format used by
// AndroidManifest.xml inside APKs). Only the chunks needed for feature
// extraction are interpreted; unknown chunk types are skipped by their
// declared size.
//
// Chunk layout reference: frameworks/base ResourceTypes.h
//   0x0003 XML tree header, 0x0001 string pool, 0x0180 resource map,
//   0x0100/0x0101 namespace start/end, 0x0102/0x0103 element start/end,
//   attribute records of 20 bytes.

#ifndef AMDET_AXML_HPP
#define AMDET_AXML_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amdet/common.hpp"

namespace amdet::axml {

constexpr std::uint16_t kChunkXml = 0x0003;
constexpr std::uint16_t kChunkStringPool = 0x0001;
constexpr std::uint16_t kChunkResourceMap = 0x0180;
constexpr std::uint16_t kChunkStartNamespace = 0x0100;
constexpr std::uint16_t kChunkEndNamespace = 0x0101;
constexpr std::uint16_t kChunkStartElement = 0x0102;
constexpr std::uint16_t kChunkEndElement = 0x0103;
constexpr std::uint16_t kChunkCdata = 0x0104;

constexpr std::uint32_t kStringPoolUtf8Flag = 1u << 8;
constexpr std::uint32_t kNoEntry = 0xFFFFFFFF;

// Typed-value dataType codes we care about.
constexpr std::uint8_t kTypeReference = 0x01;
constexpr std::uint8_t kTypeString = 0x03;
constexpr std::uint8_t kTypeIntDec = 0x10;
constexpr std::uint8_t kTypeIntHex = 0x11;
constexpr std::uint8_t kTypeIntBoolean = 0x12;

struct ManifestInfo {
    std::string package_name;
    std::set<std::string> permissions;
    std::set<std::string> intent_actions;
    std::map<std::string, int> component_counts;  // activity/service/receiver/provider
};

namespace detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes every pool slot up front; attribute lookups then return the
// exact UTF-8 rendering of the slot.
inline std::vector<std::string> decode_string_pool(ByteView chunk) {
    ByteReader r(chunk);
    std::uint16_t type = r.u16();
    std::uint16_t header_size = r.u16();
    std::uint32_t size = r.u32();
    if (type != kChunkStringPool || size > chunk.size() || header_size < 28)
        throw MalformedAxml("bad string pool header");
    std::uint32_t string_count = r.u32();
    r.skip(4);  // style count
    std::uint32_t flags = r.u32();
    std::uint32_t strings_start = r.u32();
    r.skip(4);  // styles start
    bool utf8 = (flags & kStringPoolUtf8Flag) != 0;

    std::vector<std::string> pool;
    pool.reserve(string_count);
    ByteReader offsets(chunk, header_size);
    for (std::uint32_t i = 0; i < string_count; ++i) {
        std::uint32_t off = offsets.u32();
        std::size_t at = static_cast<std::size_t>(strings_start) + off;
        if (at >= size) throw MalformedAxml("string data offset out of range");
        ByteReader s(chunk.first(size), at);
        std::string decoded;
        if (utf8) {
            // Two lengths (UTF-16 units, then bytes), each with a one-byte
            // high-bit extension.
            std::uint32_t u16len = s.u8();
            if (u16len & 0x80) u16len = ((u16len & 0x7F) << 8) | s.u8();
            std::uint32_t bytelen = s.u8();
            if (bytelen & 0x80) bytelen = ((bytelen & 0x7F) << 8) | s.u8();
            (void)u16len;
            ByteView raw = s.bytes(bytelen);
            decoded.assign(raw.begin(), raw.end());
        } else {
            std::uint32_t units = s.u16();
            if (units & 0x8000) units = ((units & 0x7FFF) << 16) | s.u16();
            for (std::uint32_t u = 0; u < units; ++u) {
                std::uint32_t cp = s.u16();
                if (cp >= 0xD800 && cp <= 0xDBFF && u + 1 < units) {
                    std::uint32_t lo = s.u16();
                    ++u;
                    if (lo >= 0xDC00 && lo <= 0xDFFF) {
                        cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
                    } else {
                        append_utf8(decoded, cp);
                        cp = lo;
                    }
                }
                append_utf8(decoded, cp);
            }
        }
        pool.push_back(std::move(decoded));
    }
    return pool;
}

struct AttrValue {
    std::uint32_t ns_idx = kNoEntry;
    std::uint32_t name_idx = kNoEntry;
    std::uint32_t raw_idx = kNoEntry;
    std::uint8_t data_type = 0;
    std::uint32_t data = 0;
};

inline std::string render_value(const AttrValue& a, const std::vector<std::string>& pool) {
    auto pool_at = [&](std::uint32_t idx) -> const std::string& {
        if (idx >= pool.size()) throw MalformedAxml("string pool index out of range");
        return pool[idx];
    };
    switch (a.data_type) {
        case kTypeString:
            return pool_at(a.data);
        case kTypeReference:
            // Unresolvable resource references never match schema features.
            return "@ref/" + [&] {
                static const char* digits = "0123456789abcdef";
                std::string h = "0x";
                for (int shift = 28; shift >= 0; shift -= 4)
                    h.push_back(digits[(a.data >> shift) & 0xF]);
                return h;
            }();
        case kTypeIntDec:
            return std::to_string(static_cast<std::int32_t>(a.data));
        case kTypeIntBoolean:
            return a.data ? "true" : "false";
        default:
            if (a.raw_idx != kNoEntry) return pool_at(a.raw_idx);
            return "";
    }
}

}  // namespace detail

/// Decodes an AndroidManifest.xml blob. Intent actions are collected from
/// intent-filters under any component kind, receivers included.
inline ManifestInfo parse_axml(ByteView bytes) {
    try {
        ByteReader header(bytes);
        std::uint16_t type = header.u16();
        std::uint16_t header_size = header.u16();
        std::uint32_t total_size = header.u32();
        if (type != kChunkXml) throw MalformedAxml("not an AXML document (magic 0x0003 missing)");
        if (total_size > bytes.size() || header_size < 8)
            throw MalformedAxml("bad document chunk size");

        ManifestInfo info;
        info.component_counts = {{"activity", 0}, {"service", 0}, {"receiver", 0}, {"provider", 0}};
        std::vector<std::string> pool;
        std::vector<std::string> element_stack;
        int intent_filter_depth = 0;

        std::size_t pos = header_size;
        while (pos + 8 <= total_size) {
            ByteReader r(bytes, pos);
            std::uint16_t chunk_type = r.u16();
            std::uint16_t chunk_header = r.u16();
            std::uint32_t chunk_size = r.u32();
            if (chunk_size < 8 || pos + chunk_size > total_size)
                throw MalformedAxml("bad chunk size");

            switch (chunk_type) {
                case kChunkStringPool:
                    pool = detail::decode_string_pool(bytes.subspan(pos, chunk_size));
                    break;
                case kChunkStartElement: {
                    ByteReader el(bytes, pos + chunk_header);
                    el.skip(4);  // namespace
                    std::uint32_t name_idx = el.u32();
                    std::uint16_t attr_start = el.u16();
                    std::uint16_t attr_size = el.u16();
                    std::uint16_t attr_count = el.u16();
                    if (name_idx >= pool.size())
                        throw MalformedAxml("element name index out of range");
                    const std::string& name = pool[name_idx];

                    std::map<std::string, std::string> attrs;  // name -> rendered value
                    for (std::uint16_t a = 0; a < attr_count; ++a) {
                        std::size_t at = pos + chunk_header + attr_start +
                                         static_cast<std::size_t>(a) * attr_size;
                        if (at + 20 > pos + chunk_size)
                            throw MalformedAxml("attribute record out of range");
                        ByteReader ar(bytes, at);
                        detail::AttrValue v;
                        v.ns_idx = ar.u32();
                        v.name_idx = ar.u32();
                        v.raw_idx = ar.u32();
                        ar.skip(2);  // typed value size
                        ar.skip(1);  // res0
                        v.data_type = ar.u8();
                        v.data = ar.u32();
                        if (v.name_idx >= pool.size())
                            throw MalformedAxml("attribute name index out of range");
                        attrs.emplace(pool[v.name_idx], detail::render_value(v, pool));
                    }

                    if (name == "manifest") {
                        auto it = attrs.find("package");
                        if (it != attrs.end()) info.package_name = it->second;
                    } else if (name == "uses-permission") {
                        auto it = attrs.find("name");
                        if (it != attrs.end() && !it->second.empty())
                            info.permissions.insert(it->second);
                    } else if (name == "action" && intent_filter_depth > 0) {
                        auto it = attrs.find("name");
                        if (it != attrs.end() && !it->second.empty())
                            info.intent_actions.insert(it->second);
                    } else if (auto cit = info.component_counts.find(name);
                               cit != info.component_counts.end()) {
                        cit->second++;
                    }

                    if (name == "intent-filter") ++intent_filter_depth;
                    element_stack.push_back(name);
                    break;
                }
                case kChunkEndElement: {
                    if (element_stack.empty())
                        throw MalformedAxml("end element without matching start");
                    if (element_stack.back() == "intent-filter") --intent_filter_depth;
                    element_stack.pop_back();
                    break;
                }
                case kChunkResourceMap:
                case kChunkStartNamespace:
                case kChunkEndNamespace:
                case kChunkCdata:
                default:
                    break;  // skipped by declared size
            }
            pos += chunk_size;
        }
        if (!element_stack.empty()) throw MalformedAxml("unterminated element stack");
        return info;
    } catch (const BoundsError&) {
        throw MalformedAxml("truncated AXML document");
    }
}

using PermissionPair = std::pair<std::string, std::string>;

inline PermissionPair make_pair_sorted(const std::string& a, const std::string& b) {
    return a < b ? PermissionPair(a, b) : PermissionPair(b, a);
}

/// All C(n,2) unordered pairs of requested permissions.
inline std::set<PermissionPair> permission_pairs(const ManifestInfo& info) {
    std::set<PermissionPair> pairs;
    for (auto i = info.permissions.begin(); i != info.permissions.end(); ++i) {
        auto j = i;
        for (++j; j != info.permissions.end(); ++j)
            pairs.insert(make_pair_sorted(*i, *j));
    }
    return pairs;
}

}  // namespace amdet::axml

#endif  // AMDET_AXML_HPP
