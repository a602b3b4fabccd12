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

// Minimal DER TLV walker: just enough ASN.1 to locate the first X.509
// certificate inside a PKCS#7 signature block and read its validity
// window and subject/issuer names. Never reads past a declared length.

#ifndef AMDET_DER_HPP
#define AMDET_DER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amdet/common.hpp"

namespace amdet::der {

constexpr std::uint8_t kTagSequence = 0x30;
constexpr std::uint8_t kTagUtcTime = 0x17;
constexpr std::uint8_t kTagGeneralizedTime = 0x18;

struct Node {
    std::uint8_t tag = 0;
    bool constructed = false;
    ByteView content;  // value bytes only
    ByteView raw;      // full TLV including header
};

namespace detail {

inline Node parse_node(ByteView data, std::size_t pos, std::size_t* next) {
    ByteReader r(data, pos);
    Node node;
    std::uint8_t first = r.u8();
    node.tag = first;
    node.constructed = (first & 0x20) != 0;
    if ((first & 0x1F) == 0x1F) {
        // multi-byte tag number; rare, consume but keep the first byte as id
        std::uint8_t b;
        do {
            b = r.u8();
        } while (b & 0x80);
    }
    std::uint8_t len_byte = r.u8();
    std::size_t length = 0;
    if (len_byte < 0x80) {
        length = len_byte;
    } else if (len_byte == 0x80) {
        throw MalformedDer("indefinite length is not DER");
    } else {
        int n = len_byte & 0x7F;
        if (n > 4) throw MalformedDer("length of length too large");
        for (int i = 0; i < n; ++i) length = (length << 8) | r.u8();
    }
    if (length > r.remaining()) throw MalformedDer("declared length overruns input");
    std::size_t content_start = r.pos();
    node.content = data.subspan(content_start, length);
    node.raw = data.subspan(pos, content_start - pos + length);
    if (next) *next = content_start + length;
    return node;
}

inline std::vector<Node> children_of(const Node& node) {
    std::vector<Node> out;
    if (!node.constructed) return out;
    std::size_t pos = 0;
    while (pos < node.content.size()) {
        std::size_t next = 0;
        out.push_back(parse_node(node.content, pos, &next));
        pos = next;
    }
    return out;
}

inline int digits(ByteView v, std::size_t at, int n) {
    int value = 0;
    for (int i = 0; i < n; ++i) {
        std::uint8_t c = v[at + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') throw MalformedDer("non-digit in time value");
        value = value * 10 + (c - '0');
    }
    return value;
}

inline UnixTime parse_time(const Node& node) {
    ByteView v = node.content;
    int year, pos;
    if (node.tag == kTagUtcTime) {
        if (v.size() < 10) throw MalformedDer("UTCTime too short");
        int yy = digits(v, 0, 2);
        year = (yy < 50) ? 2000 + yy : 1900 + yy;
        pos = 2;
    } else if (node.tag == kTagGeneralizedTime) {
        if (v.size() < 12) throw MalformedDer("GeneralizedTime too short");
        year = digits(v, 0, 4);
        pos = 4;
    } else {
        throw MalformedDer("not a time value");
    }
    int month = digits(v, static_cast<std::size_t>(pos), 2);
    int day = digits(v, static_cast<std::size_t>(pos) + 2, 2);
    int hour = digits(v, static_cast<std::size_t>(pos) + 4, 2);
    int minute = digits(v, static_cast<std::size_t>(pos) + 6, 2);
    int second = 0;
    std::size_t rest = static_cast<std::size_t>(pos) + 8;
    if (rest + 2 <= v.size() && v[rest] >= '0' && v[rest] <= '9') {
        second = digits(v, rest, 2);
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw MalformedDer("time component out of range");
    return civil_to_unix(year, month, day, hour, minute, second);
}

inline bool is_time_tag(const Node& n) {
    return n.tag == kTagUtcTime || n.tag == kTagGeneralizedTime;
}

}  // namespace detail

struct CertificateInfo {
    UnixTime not_before = 0;
    UnixTime not_after = 0;
    bool self_signed = false;
};

namespace detail {

// An X.509 certificate is a SEQUENCE whose first child (the TBS part)
// contains issuer, validity {two time values} and subject in a row.
inline std::optional<CertificateInfo> try_certificate(const Node& node) {
    if (node.tag != kTagSequence || !node.constructed) return std::nullopt;
    std::vector<Node> outer = children_of(node);
    if (outer.size() < 3 || outer[0].tag != kTagSequence) return std::nullopt;
    std::vector<Node> tbs = children_of(outer[0]);
    for (std::size_t i = 1; i + 1 < tbs.size(); ++i) {
        const Node& cand = tbs[i];
        if (cand.tag != kTagSequence) continue;
        std::vector<Node> times = children_of(cand);
        if (times.size() != 2 || !is_time_tag(times[0]) || !is_time_tag(times[1])) continue;
        const Node& issuer = tbs[i - 1];
        const Node& subject = tbs[i + 1];
        if (issuer.tag != kTagSequence || subject.tag != kTagSequence) continue;
        CertificateInfo info;
        info.not_before = parse_time(times[0]);
        info.not_after = parse_time(times[1]);
        info.self_signed =
            issuer.raw.size() == subject.raw.size() &&
            std::equal(issuer.raw.begin(), issuer.raw.end(), subject.raw.begin());
        return info;
    }
    return std::nullopt;
}

inline std::optional<CertificateInfo> search_certificate(const Node& node, int depth) {
    if (depth > 32) return std::nullopt;
    if (auto cert = try_certificate(node)) return cert;
    if (!node.constructed) return std::nullopt;
    for (const Node& child : children_of(node))
        if (auto cert = search_certificate(child, depth + 1)) return cert;
    return std::nullopt;
}

}  // namespace detail

/// Walks a DER blob (PKCS#7 signature block or a bare certificate) to the
/// first embedded X.509 certificate.
inline CertificateInfo first_certificate(ByteView der_bytes) {
    try {
        std::size_t next = 0;
        Node root = detail::parse_node(der_bytes, 0, &next);
        if (auto cert = detail::search_certificate(root, 0)) return *cert;
    } catch (const BoundsError&) {
        throw MalformedDer("truncated DER input");
    }
    throw NoCertificateFound("no X.509 certificate in signature block");
}

}  // namespace amdet::der

#endif  // AMDET_DER_HPP
