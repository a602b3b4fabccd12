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

// fs4: the "invalid certificate" bit. An APK counts as invalid when it
// has no v1 signature, when any MANIFEST.MF entry digest mismatches the
// recomputed hash (repackaging evidence), or when the scan time falls
// outside the signing certificate's validity window. Self-signing alone
// does not make a certificate invalid; Android apps routinely are.

#ifndef AMDET_CERT_HPP
#define AMDET_CERT_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amdet/common.hpp"
#include "amdet/der.hpp"
#include "amdet/digest.hpp"
#include "amdet/zip.hpp"

namespace amdet::cert {

struct SignatureReport {
    bool has_signature = false;
    bool digest_ok = false;
    std::optional<std::pair<UnixTime, UnixTime>> cert_window;
    bool self_signed = false;
    bool verdict_invalid = true;
    std::vector<std::string> reasons;
};

struct CertValidity {
    UnixTime not_before = 0;
    UnixTime not_after = 0;
    bool self_signed = false;
    bool expired = false;
};

namespace detail {

inline std::string lower_ascii(std::string s) {
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::string strip_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
    return s;
}

struct ManifestSection {
    std::string name;  // empty for the main section
    std::map<std::string, std::string> attrs;  // lowercased keys
};

// JAR manifest text: logical lines wrap at 72 bytes with a single-space
// continuation prefix; blank lines separate sections.
inline std::vector<ManifestSection> parse_jar_manifest(ByteView bytes) {
    std::vector<std::string> logical;
    std::string text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = strip_cr(text.substr(pos, end - pos));
        pos = end + 1;
        if (!line.empty() && line[0] == ' ' && !logical.empty() && !logical.back().empty()) {
            logical.back() += line.substr(1);
        } else {
            logical.push_back(std::move(line));
        }
        if (end == text.size()) break;
    }

    std::vector<ManifestSection> sections;
    ManifestSection current;
    bool current_has_content = false;
    auto flush = [&] {
        if (current_has_content) sections.push_back(std::move(current));
        current = ManifestSection{};
        current_has_content = false;
    };
    for (const std::string& line : logical) {
        if (line.empty()) {
            flush();
            continue;
        }
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) continue;  // tolerated, not meaningful
        std::string key = lower_ascii(line.substr(0, colon));
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value[0] == ' ') value.erase(0, 1);
        if (key == "name" && current_has_content && !current.name.empty()) flush();
        if (key == "name") current.name = value;
        current.attrs[key] = value;
        current_has_content = true;
    }
    flush();
    return sections;
}

enum class DigestAlgo { sha1, sha256 };

inline std::optional<DigestAlgo> algo_from_key(const std::string& lower_key) {
    // keys look like "sha-256-digest" / "sha1-digest"
    if (lower_key.size() < 7 || lower_key.compare(lower_key.size() - 7, 7, "-digest") != 0)
        return std::nullopt;
    std::string algo = lower_key.substr(0, lower_key.size() - 7);
    if (algo == "sha-256" || algo == "sha256") return DigestAlgo::sha256;
    if (algo == "sha1" || algo == "sha-1") return DigestAlgo::sha1;
    return std::nullopt;
}

inline std::string compute_digest_b64(DigestAlgo algo, ByteView data) {
    if (algo == DigestAlgo::sha256) {
        auto d = digest::sha256(data);
        return digest::base64_encode(ByteView(d.data(), d.size()));
    }
    auto d = digest::sha1(data);
    return digest::base64_encode(ByteView(d.data(), d.size()));
}

}  // namespace detail

/// True iff every MANIFEST.MF named section whose entry exists in the
/// archive carries a digest matching the recomputed hash. Mismatches are
/// reported per entry through the warnings sink.
inline bool verify_entry_digests(const zip::ApkArchive& archive, Warnings* detail_log = nullptr) {
    if (!archive.contains("META-INF/MANIFEST.MF"))
        throw MissingManifest("META-INF/MANIFEST.MF not found");
    Bytes mf = zip::read_entry(archive, "META-INF/MANIFEST.MF");
    auto sections = detail::parse_jar_manifest(mf);

    bool all_ok = true;
    for (const auto& section : sections) {
        if (section.name.empty()) continue;
        if (!archive.contains(section.name)) continue;
        for (const auto& [key, recorded] : section.attrs) {
            auto algo = detail::algo_from_key(key);
            if (!algo) continue;
            std::string computed;
            try {
                Bytes content = zip::read_entry(archive, section.name);
                computed = detail::compute_digest_b64(*algo, content);
            } catch (const Error& e) {
                warn(detail_log, "digest check failed to read " + section.name + ": " + e.what());
                all_ok = false;
                continue;
            }
            if (computed != recorded) {
                warn(detail_log, "digest mismatch for " + section.name + " (" + key + ")");
                all_ok = false;
            }
        }
    }
    return all_ok;
}

/// Validity window, self-issuance and expiry of the first certificate in
/// a DER signature block. `now` is always an explicit parameter.
inline CertValidity parse_certificate_validity(ByteView pkcs7_der, UnixTime now) {
    der::CertificateInfo info = der::first_certificate(pkcs7_der);
    CertValidity v;
    v.not_before = info.not_before;
    v.not_after = info.not_after;
    v.self_signed = info.self_signed;
    v.expired = now < info.not_before || now > info.not_after;
    return v;
}

inline std::vector<std::string> signature_block_names(const zip::ApkArchive& archive) {
    std::vector<std::string> names;
    for (const auto& e : archive.entries()) {
        if (e.name.rfind("META-INF/", 0) != 0) continue;
        std::string lower = detail::lower_ascii(e.name);
        for (const char* ext : {".rsa", ".dsa", ".ec"}) {
            std::string suffix(ext);
            if (lower.size() >= suffix.size() &&
                lower.compare(lower.size() - suffix.size(), suffix.size(), suffix) == 0) {
                names.push_back(e.name);
                break;
            }
        }
    }
    std::sort(names.begin(), names.end());
    return names;
}

/// Full fs4 verdict. All sub-errors collapse to invalid with a recorded
/// reason rather than propagating.
inline SignatureReport signature_report(const zip::ApkArchive& archive, UnixTime now) {
    SignatureReport report;
    std::vector<std::string> blocks = signature_block_names(archive);
    bool has_manifest = archive.contains("META-INF/MANIFEST.MF");
    report.has_signature = has_manifest && !blocks.empty();
    if (!report.has_signature) {
        report.reasons.push_back(has_manifest ? "no signature block (META-INF/*.RSA|DSA|EC)"
                                              : "no META-INF/MANIFEST.MF");
        report.verdict_invalid = true;
        return report;
    }

    try {
        report.digest_ok = verify_entry_digests(archive, &report.reasons);
    } catch (const Error& e) {
        report.digest_ok = false;
        report.reasons.push_back(std::string("digest verification failed: ") + e.what());
    }
    if (!report.digest_ok && report.reasons.empty())
        report.reasons.push_back("entry digest mismatch");

    bool in_window = false;
    try {
        Bytes block = zip::read_entry(archive, blocks.front());
        CertValidity v = parse_certificate_validity(block, now);
        report.cert_window = {v.not_before, v.not_after};
        report.self_signed = v.self_signed;
        in_window = !v.expired;
        if (v.expired) report.reasons.push_back("scan time outside certificate validity window");
    } catch (const Error& e) {
        report.reasons.push_back(std::string("certificate unreadable: ") + e.what());
    }

    report.verdict_invalid = !report.has_signature || !report.digest_ok || !in_window;
    return report;
}

/// The fs4 feature bit.
inline bool certificate_invalid(const zip::ApkArchive& archive, UnixTime now,
                                SignatureReport* out_report = nullptr) {
    SignatureReport report = signature_report(archive, now);
    bool verdict = report.verdict_invalid;
    if (out_report) *out_report = std::move(report);
    return verdict;
}

}  // namespace amdet::cert

#endif  // AMDET_CERT_HPP
