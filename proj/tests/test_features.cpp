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

#include <catch2/catch_amalgamated.hpp>

#include "amdet/features.hpp"
#include "amdet/rng.hpp"
#include "test_util.hpp"

using namespace amdet;
using namespace amdet::features;
using testutil::fixture;

namespace {

const UnixTime kNow2024 = civil_to_unix(2024, 6, 1);

// Test-side matcher, written independently of descriptor_matches: walks
// the schema and decides each bit straight from the definition.
std::vector<std::uint8_t> brute_force_bits(const FeatureSchema& schema, const AppFeatures& f) {
    std::vector<std::uint8_t> bits;
    for (const FeatureDescriptor& d : schema.descriptors) {
        bool hit = false;
        if (d.kind == FeatureKind::perm) {
            for (const auto& p : f.permissions) hit = hit || p == d.key;
        } else if (d.kind == FeatureKind::permpair) {
            bool a = false, b = false;
            for (const auto& p : f.permissions) {
                a = a || p == d.key;
                b = b || p == d.key2;
            }
            hit = a && b;
        } else if (d.kind == FeatureKind::intent) {
            for (const auto& i : f.intent_actions) hit = hit || i == d.key;
        } else if (d.kind == FeatureKind::api) {
            for (const auto& c : f.api_categories) hit = hit || c == d.key;
        } else if (d.kind == FeatureKind::cert_invalid) {
            hit = f.cert_invalid;
        } else {
            hit = f.apk_in_assets;
        }
        bits.push_back(hit ? 1 : 0);
    }
    return bits;
}

AppFeatures random_features(DetRng& rng) {
    AppFeatures f;
    const FeatureSchema& schema = default_schema();
    for (const FeatureDescriptor& d : schema.descriptors) {
        if (rng.bounded(2) == 0) continue;
        switch (d.kind) {
            case FeatureKind::perm: f.permissions.insert(d.key); break;
            case FeatureKind::permpair:
                f.permissions.insert(d.key);
                f.permissions.insert(d.key2);
                break;
            case FeatureKind::intent: f.intent_actions.insert(d.key); break;
            case FeatureKind::api: f.api_categories.insert(d.key); break;
            case FeatureKind::cert_invalid: f.cert_invalid = true; break;
            case FeatureKind::apk_in_assets: f.apk_in_assets = true; break;
        }
    }
    return f;
}

}  // namespace

TEST_CASE("default schema layout") {
    const FeatureSchema& schema = default_schema();
    CHECK(schema.size() == 40);
    CHECK(schema.set_spans.at(FeatureSetId::fs1) == std::pair<std::size_t, std::size_t>{0, 20});
    CHECK(schema.set_spans.at(FeatureSetId::fs2) == std::pair<std::size_t, std::size_t>{20, 31});
    CHECK(schema.set_spans.at(FeatureSetId::fs3) == std::pair<std::size_t, std::size_t>{31, 38});
    CHECK(schema.set_spans.at(FeatureSetId::fs4) == std::pair<std::size_t, std::size_t>{38, 39});
    CHECK(schema.set_spans.at(FeatureSetId::fs5) == std::pair<std::size_t, std::size_t>{39, 40});
    CHECK(schema.span_width(FeatureSetId::fs1) == 20);
    CHECK(schema.span_width(FeatureSetId::fs2) == 11);
    CHECK(schema.span_width(FeatureSetId::fs3) == 7);
    CHECK(schema.span_width(FeatureSetId::fs4) == 1);
    CHECK(schema.span_width(FeatureSetId::fs5) == 1);
}

TEST_CASE("load_schema rejects bad input") {
    CHECK_THROWS_AS(load_schema(""), SchemaParseError);
    CHECK_THROWS_AS(load_schema("# only comments\n\n"), SchemaParseError);
    CHECK_THROWS_AS(load_schema("perm a\nperm a\n"), SchemaParseError);
    CHECK_THROWS_AS(load_schema("frob a\n"), SchemaParseError);
    CHECK_THROWS_AS(load_schema("permpair justone\n"), SchemaParseError);
    CHECK_THROWS_AS(load_schema("permpair a+a\n"), SchemaParseError);
    CHECK_THROWS_AS(load_schema("cert something\n"), SchemaParseError);
    CHECK_THROWS_AS(load_schema("perm a\nintent x\nperm b\n"), SchemaParseError);  // split span
    // a permpair and the equal-named perm are distinct descriptors
    FeatureSchema ok = load_schema("perm a\npermpair a+b\nintent x\n");
    CHECK(ok.size() == 3);
}

TEST_CASE("vectorize basics") {
    const FeatureSchema& schema = default_schema();

    SECTION("all-empty features embed to the zero vector") {
        FeatureVector v = vectorize(AppFeatures{}, schema);
        REQUIRE(v.bits.size() == 40);
        for (auto b : v.bits) CHECK(b == 0);
    }
    SECTION("a single matching descriptor sets exactly its unit bit") {
        AppFeatures f;
        f.permissions = {"android.permission.READ_CONTACTS"};  // schema position 3
        FeatureVector v = vectorize(f, schema);
        for (std::size_t i = 0; i < v.bits.size(); ++i) CHECK(v.bits[i] == (i == 3 ? 1 : 0));
    }
    SECTION("malicious-style features match the hand-enumerated position list") {
        AppFeatures f;
        f.permissions = {"android.permission.SEND_SMS", "android.permission.READ_CONTACTS"};
        f.intent_actions = {"android.intent.action.BOOT_COMPLETED"};
        f.api_categories = {"telephony", "crypto"};
        f.cert_invalid = true;
        f.apk_in_assets = true;
        FeatureVector v = vectorize(f, schema);
        // positions: SEND_SMS=0, READ_CONTACTS=3, pair SEND_SMS+READ_CONTACTS=16,
        // BOOT_COMPLETED=20, telephony=31, crypto=37, cert=38, assets=39
        std::set<std::size_t> expected = {0, 3, 16, 20, 31, 37, 38, 39};
        for (std::size_t i = 0; i < v.bits.size(); ++i)
            CHECK(v.bits[i] == (expected.count(i) ? 1 : 0));
    }
    SECTION("vectorize agrees with the independent brute-force matcher") {
        DetRng rng(42);
        for (int trial = 0; trial < 50; ++trial) {
            AppFeatures f = random_features(rng);
            CHECK(vectorize(f, schema).bits == brute_force_bits(schema, f));
        }
    }
    SECTION("permpair fires only when both members are requested") {
        AppFeatures f;
        f.permissions = {"android.permission.INTERNET"};
        CHECK(vectorize(f, schema).bits[12] == 0);
        f.permissions.insert("android.permission.READ_PHONE_STATE");
        FeatureVector v = vectorize(f, schema);
        CHECK(v.bits[12] == 1);  // INTERNET+READ_PHONE_STATE
        CHECK(v.bits[4] == 1);   // READ_PHONE_STATE alone
    }
}

TEST_CASE("project") {
    const FeatureSchema& schema = default_schema();
    DetRng rng(9);
    AppFeatures f = random_features(rng);
    FeatureVector v = vectorize(f, schema);

    SECTION("full subset is the identity") {
        std::set<FeatureSetId> all(kAllFeatureSets.begin(), kAllFeatureSets.end());
        CHECK(project(v, schema, all).bits == v.bits);
    }
    SECTION("fs3 alone is the 7-bit span slice") {
        FeatureVector p = project(v, schema, {FeatureSetId::fs3});
        REQUIRE(p.bits.size() == 7);
        for (std::size_t i = 0; i < 7; ++i) CHECK(p.bits[i] == v.bits[31 + i]);
    }
    SECTION("empty subset is rejected") {
        CHECK_THROWS_AS(project(v, schema, {}), EmptySubset);
    }
    SECTION("union decomposition: concatenating per-set projections rebuilds the vector") {
        std::vector<std::uint8_t> rebuilt;
        for (FeatureSetId id : kAllFeatureSets) {
            FeatureVector p = project(v, schema, {id});
            rebuilt.insert(rebuilt.end(), p.bits.begin(), p.bits.end());
        }
        CHECK(rebuilt == v.bits);
    }
}

TEST_CASE("vectorize monotonicity: adding an element never clears a bit") {
    const FeatureSchema& schema = default_schema();
    DetRng rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        AppFeatures f = random_features(rng);
        FeatureVector before = vectorize(f, schema);
        AppFeatures g = f;
        // add one more schema element
        const FeatureDescriptor& d =
            schema.descriptors[static_cast<std::size_t>(rng.bounded(schema.size()))];
        switch (d.kind) {
            case FeatureKind::perm: g.permissions.insert(d.key); break;
            case FeatureKind::permpair:
                g.permissions.insert(d.key);
                g.permissions.insert(d.key2);
                break;
            case FeatureKind::intent: g.intent_actions.insert(d.key); break;
            case FeatureKind::api: g.api_categories.insert(d.key); break;
            case FeatureKind::cert_invalid: g.cert_invalid = true; break;
            case FeatureKind::apk_in_assets: g.apk_in_assets = true; break;
        }
        FeatureVector after = vectorize(g, schema);
        for (std::size_t i = 0; i < before.bits.size(); ++i)
            CHECK(after.bits[i] >= before.bits[i]);
    }
}

TEST_CASE("extract composes the detectors") {
    SECTION("benign fixture: everything empty, both flags false") {
        zip::ApkArchive archive = zip::open_apk(fixture("benign_clean.apk"));
        AppFeatures f = extract(archive, kNow2024);
        CHECK(f.permissions.empty());
        CHECK(f.permission_pairs.empty());
        CHECK(f.intent_actions.empty());
        CHECK(f.api_categories.empty());
        CHECK_FALSE(f.cert_invalid);
        CHECK_FALSE(f.apk_in_assets);
    }
    SECTION("malicious-style fixture: all five sets fire") {
        zip::ApkArchive archive = zip::open_apk(fixture("signed_tampered.apk"));
        AppFeatures f = extract(archive, kNow2024);
        CHECK(f.permissions == std::set<std::string>{"android.permission.SEND_SMS",
                                                     "android.permission.READ_CONTACTS"});
        CHECK(f.permission_pairs.count({"android.permission.READ_CONTACTS",
                                        "android.permission.SEND_SMS"}) == 1);
        CHECK(f.intent_actions == std::set<std::string>{"android.intent.action.BOOT_COMPLETED"});
        CHECK(f.api_categories == std::set<std::string>{"telephony", "crypto"});
        CHECK(f.cert_invalid);  // tampered signature
        CHECK(f.apk_in_assets);
    }
    SECTION("missing dex aborts with stage attribution in strict mode") {
        zip::ApkArchive archive = zip::open_apk(fixture("nodex.apk"));
        try {
            extract(archive, kNow2024);
            FAIL("expected ExtractionError");
        } catch (const ExtractionError& e) {
            CHECK(e.stage == "dex");
        }
    }
    SECTION("missing dex degrades to the empty set with --lenient") {
        zip::ApkArchive archive = zip::open_apk(fixture("nodex.apk"));
        ExtractOptions options;
        options.lenient = true;
        Warnings warnings;
        AppFeatures f = extract(archive, kNow2024, options, &warnings);
        CHECK(f.api_categories.empty());
        REQUIRE_FALSE(warnings.empty());
        CHECK(warnings[0].find("dex") != std::string::npos);
    }
}
