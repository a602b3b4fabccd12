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

// The feature universe S is the ordered union of five Boolean feature
// sets: permission combinations (fs1), intent-filter actions (fs2), API
// call categories (fs3), the invalid-certificate bit (fs4) and the
// APK-in-assets bit (fs5). An application embeds into {0,1}^|S| via the
// indicator "application contains feature s".

#ifndef AMDET_FEATURES_HPP
#define AMDET_FEATURES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amdet/axml.hpp"
#include "amdet/cert.hpp"
#include "amdet/common.hpp"
#include "amdet/dex.hpp"
#include "amdet/zip.hpp"

namespace amdet::features {

enum class FeatureSetId { fs1, fs2, fs3, fs4, fs5 };

constexpr std::array<FeatureSetId, 5> kAllFeatureSets = {
    FeatureSetId::fs1, FeatureSetId::fs2, FeatureSetId::fs3, FeatureSetId::fs4,
    FeatureSetId::fs5};

inline std::string to_string(FeatureSetId id) {
    switch (id) {
        case FeatureSetId::fs1: return "fs1";
        case FeatureSetId::fs2: return "fs2";
        case FeatureSetId::fs3: return "fs3";
        case FeatureSetId::fs4: return "fs4";
        case FeatureSetId::fs5: return "fs5";
    }
    return "?";
}

inline std::optional<FeatureSetId> feature_set_from_string(std::string_view s) {
    if (s == "fs1") return FeatureSetId::fs1;
    if (s == "fs2") return FeatureSetId::fs2;
    if (s == "fs3") return FeatureSetId::fs3;
    if (s == "fs4") return FeatureSetId::fs4;
    if (s == "fs5") return FeatureSetId::fs5;
    return std::nullopt;
}

enum class FeatureKind { perm, permpair, intent, api, cert_invalid, apk_in_assets };

struct FeatureDescriptor {
    FeatureKind kind;
    std::string key;   // permission / action / category id; empty for flags
    std::string key2;  // second permission for permpair

    FeatureSetId feature_set() const {
        switch (kind) {
            case FeatureKind::perm:
            case FeatureKind::permpair: return FeatureSetId::fs1;
            case FeatureKind::intent: return FeatureSetId::fs2;
            case FeatureKind::api: return FeatureSetId::fs3;
            case FeatureKind::cert_invalid: return FeatureSetId::fs4;
            case FeatureKind::apk_in_assets: return FeatureSetId::fs5;
        }
        return FeatureSetId::fs1;
    }

    std::string label() const {
        switch (kind) {
            case FeatureKind::perm: return "perm " + key;
            case FeatureKind::permpair: return "permpair " + key + "+" + key2;
            case FeatureKind::intent: return "intent " + key;
            case FeatureKind::api: return "api " + key;
            case FeatureKind::cert_invalid: return "cert invalid";
            case FeatureKind::apk_in_assets: return "asset apk_in_assets";
        }
        return "?";
    }
};

struct FeatureSchema {
    std::vector<FeatureDescriptor> descriptors;
    // contiguous [begin, end) position range per feature set present
    std::map<FeatureSetId, std::pair<std::size_t, std::size_t>> set_spans;

    std::size_t size() const { return descriptors.size(); }

    std::size_t span_width(FeatureSetId id) const {
        auto it = set_spans.find(id);
        return it == set_spans.end() ? 0 : it->second.second - it->second.first;
    }
};

/// The application, pre-embedding.
struct AppFeatures {
    std::set<std::string> permissions;
    std::set<axml::PermissionPair> permission_pairs;
    std::set<std::string> intent_actions;
    std::set<std::string> api_categories;
    bool cert_invalid = false;
    bool apk_in_assets = false;
};

struct FeatureVector {
    std::vector<std::uint8_t> bits;
    std::string app_id;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

/// Line-oriented schema format:
///   perm <name> | permpair <a>+<b> | intent <action> | api <category>
///   | cert invalid | asset apk_in_assets
/// '#' lines are comments. Position equals line order; each feature set
/// must occupy one contiguous block.
inline FeatureSchema load_schema(std::string_view text) {
    FeatureSchema schema;
    std::set<std::string> seen;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line = detail::trim(text.substr(pos, end - pos));
        bool at_end = (end == text.size());
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line[0] != '#') {
            std::size_t space = line.find(' ');
            if (space == std::string::npos)
                throw SchemaParseError("line " + std::to_string(line_no) + ": missing payload");
            std::string kind = line.substr(0, space);
            std::string payload = detail::trim(line.substr(space + 1));
            if (payload.empty())
                throw SchemaParseError("line " + std::to_string(line_no) + ": missing payload");

            FeatureDescriptor d;
            if (kind == "perm") {
                d.kind = FeatureKind::perm;
                d.key = payload;
            } else if (kind == "permpair") {
                std::size_t plus = payload.find('+');
                if (plus == std::string::npos || plus == 0 || plus + 1 >= payload.size())
                    throw SchemaParseError("line " + std::to_string(line_no) +
                                           ": permpair needs <a>+<b>");
                auto [a, b] = axml::make_pair_sorted(detail::trim(payload.substr(0, plus)),
                                                     detail::trim(payload.substr(plus + 1)));
                if (a == b)
                    throw SchemaParseError("line " + std::to_string(line_no) +
                                           ": permpair members must differ");
                d.kind = FeatureKind::permpair;
                d.key = a;
                d.key2 = b;
            } else if (kind == "intent") {
                d.kind = FeatureKind::intent;
                d.key = payload;
            } else if (kind == "api") {
                d.kind = FeatureKind::api;
                d.key = payload;
            } else if (kind == "cert") {
                if (payload != "invalid")
                    throw SchemaParseError("line " + std::to_string(line_no) +
                                           ": expected 'cert invalid'");
                d.kind = FeatureKind::cert_invalid;
            } else if (kind == "asset") {
                if (payload != "apk_in_assets")
                    throw SchemaParseError("line " + std::to_string(line_no) +
                                           ": expected 'asset apk_in_assets'");
                d.kind = FeatureKind::apk_in_assets;
            } else {
                throw SchemaParseError("line " + std::to_string(line_no) + ": unknown kind '" +
                                       kind + "'");
            }

            std::string dedup_key = d.label();
            if (!seen.insert(dedup_key).second)
                throw SchemaParseError("line " + std::to_string(line_no) +
                                       ": duplicate descriptor '" + dedup_key + "'");
            schema.descriptors.push_back(std::move(d));
        }
        if (at_end) break;
    }
    if (schema.descriptors.empty()) throw SchemaParseError("schema defines no features");

    for (std::size_t i = 0; i < schema.descriptors.size(); ++i) {
        FeatureSetId id = schema.descriptors[i].feature_set();
        auto it = schema.set_spans.find(id);
        if (it == schema.set_spans.end()) {
            schema.set_spans[id] = {i, i + 1};
        } else {
            if (it->second.second != i)
                throw SchemaParseError("feature set " + to_string(id) +
                                       " does not occupy a contiguous block");
            it->second.second = i + 1;
        }
    }
    return schema;
}

/// Default 40-feature universe, sized to the classifier's input width.
inline const std::string& default_schema_text() {
    static const std::string text =
        "# amdet default feature schema\n"
        "# fs1: permission combinations (12 single + 8 pairs)\n"
        "perm android.permission.SEND_SMS\n"
        "perm android.permission.RECEIVE_SMS\n"
        "perm android.permission.READ_SMS\n"
        "perm android.permission.READ_CONTACTS\n"
        "perm android.permission.READ_PHONE_STATE\n"
        "perm android.permission.RECEIVE_BOOT_COMPLETED\n"
        "perm android.permission.SYSTEM_ALERT_WINDOW\n"
        "perm android.permission.WRITE_EXTERNAL_STORAGE\n"
        "perm android.permission.ACCESS_FINE_LOCATION\n"
        "perm android.permission.RECORD_AUDIO\n"
        "perm android.permission.CHANGE_WIFI_STATE\n"
        "perm android.permission.INSTALL_PACKAGES\n"
        "permpair android.permission.INTERNET+android.permission.READ_PHONE_STATE\n"
        "permpair android.permission.INTERNET+android.permission.READ_SMS\n"
        "permpair android.permission.INTERNET+android.permission.ACCESS_FINE_LOCATION\n"
        "permpair android.permission.INTERNET+android.permission.RECORD_AUDIO\n"
        "permpair android.permission.SEND_SMS+android.permission.READ_CONTACTS\n"
        "permpair android.permission.RECEIVE_BOOT_COMPLETED+android.permission.SEND_SMS\n"
        "permpair android.permission.READ_SMS+android.permission.WRITE_EXTERNAL_STORAGE\n"
        "permpair android.permission.READ_CONTACTS+android.permission.WRITE_EXTERNAL_STORAGE\n"
        "# fs2: intent-filter actions\n"
        "intent android.intent.action.BOOT_COMPLETED\n"
        "intent android.provider.Telephony.SMS_RECEIVED\n"
        "intent android.intent.action.DATA_SMS_RECEIVED\n"
        "intent android.intent.action.PHONE_STATE\n"
        "intent android.intent.action.NEW_OUTGOING_CALL\n"
        "intent android.intent.action.USER_PRESENT\n"
        "intent android.intent.action.PACKAGE_ADDED\n"
        "intent android.intent.action.PACKAGE_REMOVED\n"
        "intent android.net.conn.CONNECTIVITY_CHANGE\n"
        "intent android.intent.action.BATTERY_LOW\n"
        "intent android.intent.action.ACTION_POWER_CONNECTED\n"
        "# fs3: API call categories\n"
        "api telephony\n"
        "api net\n"
        "api dexloader\n"
        "api reflection\n"
        "api sysservice\n"
        "api runtime_exec\n"
        "api crypto\n"
        "# fs4 / fs5\n"
        "cert invalid\n"
        "asset apk_in_assets\n";
    return text;
}

inline const FeatureSchema& default_schema() {
    static const FeatureSchema schema = load_schema(default_schema_text());
    return schema;
}

inline bool descriptor_matches(const FeatureDescriptor& d, const AppFeatures& f) {
    switch (d.kind) {
        case FeatureKind::perm:
            return f.permissions.count(d.key) > 0;
        case FeatureKind::permpair:
            // combination semantics: both members requested
            return f.permissions.count(d.key) > 0 && f.permissions.count(d.key2) > 0;
        case FeatureKind::intent:
            return f.intent_actions.count(d.key) > 0;
        case FeatureKind::api:
            return f.api_categories.count(d.key) > 0;
        case FeatureKind::cert_invalid:
            return f.cert_invalid;
        case FeatureKind::apk_in_assets:
            return f.apk_in_assets;
    }
    return false;
}

/// The Boolean embedding: bit p is the indicator of descriptor p.
inline FeatureVector vectorize(const AppFeatures& f, const FeatureSchema& schema,
                               std::string app_id = {}) {
    FeatureVector v;
    v.app_id = std::move(app_id);
    v.bits.reserve(schema.size());
    for (const FeatureDescriptor& d : schema.descriptors)
        v.bits.push_back(descriptor_matches(d, f) ? 1 : 0);
    return v;
}

/// Concatenation of the span slices for the chosen sets, in schema order.
inline FeatureVector project(const FeatureVector& v, const FeatureSchema& schema,
                             const std::set<FeatureSetId>& subset) {
    if (subset.empty()) throw EmptySubset("feature subset must not be empty");
    if (v.bits.size() != schema.size())
        throw DimMismatch("vector width does not match schema");
    FeatureVector out;
    out.app_id = v.app_id;
    // spans are walked in schema position order, not subset-id order
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (FeatureSetId id : subset) {
        auto it = schema.set_spans.find(id);
        if (it != schema.set_spans.end()) spans.push_back(it->second);
    }
    std::sort(spans.begin(), spans.end());
    for (auto [begin, end] : spans)
        for (std::size_t i = begin; i < end; ++i) out.bits.push_back(v.bits[i]);
    return out;
}

struct ExtractOptions {
    bool lenient = false;
    const std::vector<dex::ApiCategoryRule>* api_rules = nullptr;  // default rules when null
};

/// Composes the manifest, dex, certificate and asset detectors into one
/// record. A failed stage aborts with stage attribution unless lenient,
/// in which case it degrades to the empty set with a warning.
inline AppFeatures extract(const zip::ApkArchive& archive, UnixTime now,
                           const ExtractOptions& options = {}, Warnings* warnings = nullptr) {
    AppFeatures f;

    try {
        if (!archive.contains("AndroidManifest.xml"))
            throw MalformedAxml("AndroidManifest.xml entry missing");
        Bytes manifest = zip::read_entry(archive, "AndroidManifest.xml");
        axml::ManifestInfo info = axml::parse_axml(manifest);
        f.permissions = std::move(info.permissions);
        f.intent_actions = std::move(info.intent_actions);
        f.permission_pairs = axml::permission_pairs(axml::ManifestInfo{
            .package_name = {}, .permissions = f.permissions, .intent_actions = {},
            .component_counts = {}});
    } catch (const Error& e) {
        if (!options.lenient) throw ExtractionError("manifest", e.what());
        warn(warnings, std::string("manifest stage degraded: ") + e.what());
    }

    try {
        dex::DexSummary summary = dex::scan_all_dex(archive);
        const auto& rules = options.api_rules ? *options.api_rules : dex::default_api_rules();
        f.api_categories = dex::detect_api_categories(summary, rules);
    } catch (const Error& e) {
        if (!options.lenient) throw ExtractionError("dex", e.what());
        warn(warnings, std::string("dex stage degraded: ") + e.what());
    }

    f.cert_invalid = cert::certificate_invalid(archive, now);
    f.apk_in_assets = zip::assets_contain_apk(archive, warnings);
    return f;
}

}  // namespace amdet::features

#endif  // AMDET_FEATURES_HPP
