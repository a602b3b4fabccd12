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

// DEX id-table reader. API usage is detected from the string/type/method
// id tables, not by decoding instruction streams: every external API an
// app can invoke must appear in method_ids, so table scanning is enough
// for presence features. Dead-code references can introduce false
// positives; accepted.

#ifndef AMDET_DEX_HPP
#define AMDET_DEX_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amdet/common.hpp"
#include "amdet/zip.hpp"

namespace amdet::dex {

struct DexSummary {
    std::vector<std::string> strings;
    std::vector<std::string> type_names;
    std::vector<std::pair<std::string, std::string>> method_refs;  // (class type, method name)
    int dex_count = 0;
};

struct ApiCategoryRule {
    std::string category_id;
    std::vector<std::string> class_prefixes;
    std::set<std::string> method_names;  // empty = prefix-only match
};

namespace detail {

inline std::uint32_t read_uleb128(ByteReader& r) {
    std::uint32_t result = 0;
    int shift = 0;
    for (int i = 0; i < 5; ++i) {
        std::uint8_t b = r.u8();
        result |= static_cast<std::uint32_t>(b & 0x7F) << shift;
        if ((b & 0x80) == 0) return result;
        shift += 7;
    }
    throw MalformedDex("uleb128 too long");
}

// String data is MUTF-8. Descriptors and member names are ASCII in
// practice, so bytes are kept verbatim (minus the terminator).
inline std::string read_string_data(ByteView file, std::uint32_t off) {
    ByteReader r(file, off);
    std::uint32_t utf16_len = read_uleb128(r);
    (void)utf16_len;
    std::string s;
    for (;;) {
        std::uint8_t b = r.u8();
        if (b == 0) break;
        s.push_back(static_cast<char>(b));
    }
    return s;
}

inline void check_section(ByteView file, std::uint32_t off, std::uint32_t count,
                          std::size_t item_size, const char* what) {
    if (count == 0) return;
    std::size_t end = static_cast<std::size_t>(off) + static_cast<std::size_t>(count) * item_size;
    if (off >= file.size() || end > file.size())
        throw MalformedDex(std::string(what) + " section outside file");
}

}  // namespace detail

/// Decodes the string/type/method id tables of one classes*.dex blob.
inline DexSummary parse_dex(ByteView bytes) {
    try {
        if (bytes.size() < 0x70) throw MalformedDex("shorter than a DEX header");
        // magic: "dex\n" + 3 digits + NUL. Odex ("dey\n") and compact dex
        // ("cdex") are rejected here.
        if (!(bytes[0] == 'd' && bytes[1] == 'e' && bytes[2] == 'x' && bytes[3] == '\n'))
            throw MalformedDex("bad DEX magic");
        for (int i = 4; i < 7; ++i)
            if (bytes[static_cast<std::size_t>(i)] < '0' || bytes[static_cast<std::size_t>(i)] > '9')
                throw MalformedDex("bad DEX version");
        if (bytes[7] != 0) throw MalformedDex("bad DEX magic terminator");

        ByteReader r(bytes, 8);
        r.skip(4 + 20);  // checksum, signature
        std::uint32_t file_size = r.u32();
        std::uint32_t header_size = r.u32();
        std::uint32_t endian_tag = r.u32();
        if (header_size != 0x70) throw MalformedDex("unexpected header size");
        if (endian_tag != 0x12345678) throw MalformedDex("unsupported endianness");
        if (file_size > bytes.size()) throw MalformedDex("declared file size exceeds input");
        r.skip(8);  // link_size, link_off
        r.skip(4);  // map_off
        std::uint32_t string_ids_size = r.u32();
        std::uint32_t string_ids_off = r.u32();
        std::uint32_t type_ids_size = r.u32();
        std::uint32_t type_ids_off = r.u32();
        std::uint32_t proto_ids_size = r.u32();
        std::uint32_t proto_ids_off = r.u32();
        r.skip(8);  // field_ids
        std::uint32_t method_ids_size = r.u32();
        std::uint32_t method_ids_off = r.u32();
        (void)proto_ids_size;
        (void)proto_ids_off;

        detail::check_section(bytes, string_ids_off, string_ids_size, 4, "string_ids");
        detail::check_section(bytes, type_ids_off, type_ids_size, 4, "type_ids");
        detail::check_section(bytes, method_ids_off, method_ids_size, 8, "method_ids");

        DexSummary summary;
        summary.dex_count = 1;
        summary.strings.reserve(string_ids_size);
        ByteReader sid(bytes, string_ids_off);
        for (std::uint32_t i = 0; i < string_ids_size; ++i) {
            std::uint32_t data_off = sid.u32();
            if (data_off >= bytes.size()) throw MalformedDex("string data offset out of range");
            summary.strings.push_back(detail::read_string_data(bytes, data_off));
        }

        summary.type_names.reserve(type_ids_size);
        ByteReader tid(bytes, type_ids_off);
        for (std::uint32_t i = 0; i < type_ids_size; ++i) {
            std::uint32_t descriptor_idx = tid.u32();
            if (descriptor_idx >= summary.strings.size())
                throw MalformedDex("type descriptor string index out of range");
            summary.type_names.push_back(summary.strings[descriptor_idx]);
        }

        summary.method_refs.reserve(method_ids_size);
        ByteReader mid(bytes, method_ids_off);
        for (std::uint32_t i = 0; i < method_ids_size; ++i) {
            std::uint16_t class_idx = mid.u16();
            mid.skip(2);  // proto_idx
            std::uint32_t name_idx = mid.u32();
            if (class_idx >= summary.type_names.size())
                throw MalformedDex("method class index out of range");
            if (name_idx >= summary.strings.size())
                throw MalformedDex("method name string index out of range");
            summary.method_refs.emplace_back(summary.type_names[class_idx],
                                             summary.strings[name_idx]);
        }
        return summary;
    } catch (const BoundsError&) {
        throw MalformedDex("truncated DEX file");
    }
}

/// The paper's seven API-call categories. Exact class membership is an
/// implementer choice; every rule ships as data and can be overridden.
inline const std::vector<ApiCategoryRule>& default_api_rules() {
    static const std::vector<ApiCategoryRule> rules = {
        {"telephony", {"Landroid/telephony/"}, {}},
        {"net", {"Ljava/net/", "Lorg/apache/http/", "Landroid/net/"}, {}},
        {"dexloader", {"Ldalvik/system/DexClassLoader;", "Ldalvik/system/PathClassLoader;"}, {}},
        {"reflection", {"Ljava/lang/reflect/"}, {}},
        // getSystemService is declared on Context and inherited widely, so
        // the class filter is the universal reference-type prefix.
        {"sysservice", {"L"}, {"getSystemService"}},
        {"runtime_exec", {"Ljava/lang/Runtime;", "Ljava/lang/System;"}, {"exec", "loadLibrary", "exit"}},
        {"crypto", {"Ljavax/crypto/", "Ljava/security/"}, {}},
    };
    return rules;
}

inline std::set<std::string> detect_api_categories(const DexSummary& summary,
                                                   const std::vector<ApiCategoryRule>& rules) {
    std::set<std::string> hits;
    for (const auto& [class_type, method_name] : summary.method_refs) {
        for (const ApiCategoryRule& rule : rules) {
            if (hits.count(rule.category_id)) continue;
            if (!rule.method_names.empty() && !rule.method_names.count(method_name)) continue;
            for (const std::string& prefix : rule.class_prefixes) {
                if (class_type.rfind(prefix, 0) == 0) {
                    hits.insert(rule.category_id);
                    break;
                }
            }
        }
    }
    return hits;
}

/// Aggregates classes.dex, classes2.dex, ... classesN.dex in numeric
/// order. Id tables are concatenated, not deduplicated.
inline DexSummary scan_all_dex(const zip::ApkArchive& archive) {
    std::vector<std::pair<int, std::string>> dex_entries;
    for (const auto& e : archive.entries()) {
        const std::string& n = e.name;
        if (n.rfind("classes", 0) != 0 || n.size() < 11 || n.compare(n.size() - 4, 4, ".dex") != 0)
            continue;
        std::string digits = n.substr(7, n.size() - 11);
        int ordinal = 1;
        if (!digits.empty()) {
            if (digits[0] == '0' || !std::all_of(digits.begin(), digits.end(), [](char c) {
                    return c >= '0' && c <= '9';
                }))
                continue;
            ordinal = std::stoi(digits);
            if (ordinal < 2) continue;  // classes1.dex is not a thing
        }
        dex_entries.emplace_back(ordinal, n);
    }
    if (dex_entries.empty()) throw NoDexFound("archive has no classes*.dex entry");
    std::sort(dex_entries.begin(), dex_entries.end());

    DexSummary all;
    for (const auto& [ordinal, name] : dex_entries) {
        (void)ordinal;
        Bytes content = zip::read_entry(archive, name);
        DexSummary one;
        try {
            one = parse_dex(content);
        } catch (const MalformedDex& e) {
            throw MalformedDex(name + ": " + e.what());
        }
        all.strings.insert(all.strings.end(), one.strings.begin(), one.strings.end());
        all.type_names.insert(all.type_names.end(), one.type_names.begin(), one.type_names.end());
        all.method_refs.insert(all.method_refs.end(), one.method_refs.begin(),
                               one.method_refs.end());
        all.dex_count += one.dex_count;
    }
    return all;
}

}  // namespace amdet::dex

#endif  // AMDET_DEX_HPP
