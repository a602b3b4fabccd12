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

#include "amdet/eval.hpp"
#include "amdet/synth.hpp"

using namespace amdet;
using namespace amdet::eval;
using Catch::Approx;

namespace {

LabeledDataset tiny_dataset(int benign, int malicious, std::uint64_t seed, int width = 8) {
    DetRng rng(seed);
    LabeledDataset data;
    for (int i = 0; i < benign + malicious; ++i) {
        int label = i < benign ? 0 : 1;
        features::FeatureVector v;
        for (int c = 0; c < width; ++c)
            v.bits.push_back(rng.unit_real() < (label ? 0.8 : 0.2) ? 1 : 0);
        data.push("app" + std::to_string(i), std::move(v), label);
    }
    return data;
}

}  // namespace

TEST_CASE("split is stratified, disjoint and covering") {
    SECTION("600+600 at 0.8 gives 480+480 / 120+120") {
        LabeledDataset data = tiny_dataset(600, 600, 1);
        auto [train, valid] = split(data, 0.8, 7);
        CHECK(train.size() == 960);
        CHECK(valid.size() == 240);
        auto count = [](const LabeledDataset& d, int label) {
            std::size_t n = 0;
            for (int y : d.labels) n += static_cast<std::size_t>(y == label);
            return n;
        };
        CHECK(count(train, 0) == 480);
        CHECK(count(train, 1) == 480);
        CHECK(count(valid, 0) == 120);
        CHECK(count(valid, 1) == 120);
    }
    SECTION("10 samples (5/5) at 0.8 gives 4+4 / 1+1") {
        LabeledDataset data = tiny_dataset(5, 5, 2);
        auto [train, valid] = split(data, 0.8, 3);
        CHECK(train.size() == 8);
        CHECK(valid.size() == 2);
    }
    SECTION("the same seed reproduces the partition") {
        LabeledDataset data = tiny_dataset(30, 30, 5);
        auto [t1, v1] = split(data, 0.7, 11);
        auto [t2, v2] = split(data, 0.7, 11);
        CHECK(t1.ids == t2.ids);
        CHECK(v1.ids == v2.ids);
        auto [t3, v3] = split(data, 0.7, 12);
        CHECK(t1.ids != t3.ids);  // different seed shuffles differently
    }
    SECTION("union covers, intersection empty") {
        LabeledDataset data = tiny_dataset(21, 17, 6);
        auto [train, valid] = split(data, 0.8, 2);
        std::set<std::string> seen;
        for (const auto& id : train.ids) CHECK(seen.insert(id).second);
        for (const auto& id : valid.ids) CHECK(seen.insert(id).second);
        CHECK(seen.size() == data.size());
    }
    SECTION("stratification error at most one sample per class") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            LabeledDataset data = tiny_dataset(23, 31, seed + 40);
            auto [train, valid] = split(data, 0.8, seed);
            (void)valid;
            auto count = [&](int label) {
                std::size_t n = 0;
                for (int y : train.labels) n += static_cast<std::size_t>(y == label);
                return static_cast<double>(n);
            };
            CHECK(std::abs(count(0) - 0.8 * 23) <= 1.0);
            CHECK(std::abs(count(1) - 0.8 * 31) <= 1.0);
        }
    }
    SECTION("insufficient data is rejected") {
        LabeledDataset data = tiny_dataset(1, 5, 1);
        CHECK_THROWS_AS(split(data, 0.8, 0), InsufficientData);
    }
}

TEST_CASE("compute_metrics on the worked examples") {
    SECTION("symmetric counts give 0.75 across the board") {
        Metrics m = compute_metrics({3, 3, 1, 1});
        CHECK(m.accuracy == Approx(0.75));
        CHECK(m.precision == Approx(0.75));
        CHECK(m.recall == Approx(0.75));
        CHECK(m.f1 == Approx(0.75));
    }
    SECTION("perfect classifier") {
        Metrics m = compute_metrics({1, 1, 0, 0});
        CHECK(m.accuracy == 1.0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
    }
    SECTION("tp=0, fp=0: precision undefined, reported as 0 with flag") {
        Metrics m = compute_metrics({0, 5, 0, 5});
        CHECK(m.precision == 0.0);
        CHECK_FALSE(m.precision_defined);
        CHECK(m.recall == 0.0);
        CHECK_FALSE(m.f1_defined);
    }
    SECTION("empty evaluation is an error") {
        CHECK_THROWS_AS(compute_metrics({0, 0, 0, 0}), EmptyEvaluation);
    }
    SECTION("accuracy identity: 1 - (fp+fn)/total") {
        DetRng rng(14);
        for (int trial = 0; trial < 50; ++trial) {
            ConfusionMatrix cm{static_cast<std::int64_t>(rng.bounded(20)),
                               static_cast<std::int64_t>(rng.bounded(20)),
                               static_cast<std::int64_t>(rng.bounded(20)),
                               static_cast<std::int64_t>(rng.bounded(20))};
            if (cm.total() == 0) continue;
            Metrics m = compute_metrics(cm);
            double identity = 1.0 - static_cast<double>(cm.fp + cm.fn) /
                                        static_cast<double>(cm.total());
            CHECK(m.accuracy == Approx(identity).margin(1e-15));
        }
    }
}

TEST_CASE("metrics agree with exhaustive brute force over small matrices") {
    // all confusion matrices with total <= 20 here; the acceptance suite
    // runs the full <= 50 sweep
    for (int total = 1; total <= 20; ++total) {
        for (int tp = 0; tp <= total; ++tp) {
            for (int tn = 0; tn + tp <= total; ++tn) {
                for (int fp = 0; fp + tn + tp <= total; ++fp) {
                    int fn = total - tp - tn - fp;
                    Metrics m = compute_metrics(
                        {static_cast<std::int64_t>(tp), static_cast<std::int64_t>(tn),
                         static_cast<std::int64_t>(fp), static_cast<std::int64_t>(fn)});
                    double acc = static_cast<double>(tp + tn) / total;
                    double prec = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
                    double rec = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
                    double f1 = (prec + rec > 0) ? 2 * prec * rec / (prec + rec) : 0.0;
                    REQUIRE(m.accuracy == Approx(acc).margin(1e-12));
                    REQUIRE(m.precision == Approx(prec).margin(1e-12));
                    REQUIRE(m.recall == Approx(rec).margin(1e-12));
                    REQUIRE(m.f1 == Approx(f1).margin(1e-12));
                }
            }
        }
    }
}

TEST_CASE("confusion_from_predictions") {
    ConfusionMatrix cm = confusion_from_predictions({1, 1, 0, 0, 1}, {1, 0, 0, 1, 1});
    CHECK(cm.tp == 2);
    CHECK(cm.fn == 1);
    CHECK(cm.tn == 1);
    CHECK(cm.fp == 1);
    CHECK_THROWS_AS(confusion_from_predictions({1}, {1, 0}), DimMismatch);
}

TEST_CASE("ablation rows are deterministic and reuse one split") {
    synth::SyntheticConfig cfg;
    cfg.n_benign = 40;
    cfg.n_malicious = 40;
    cfg.seed = 5;
    LabeledDataset data = synth::generate(cfg, features::default_schema());

    dnn::TrainConfig tc;
    tc.epochs = 3;
    tc.seed = 9;
    // hidden widths shrunk for test speed; input width still varies per row
    ModelFactory factory = [](int width) {
        return dnn::init_model({width, 16, 8, 2}, 9);
    };
    using enum features::FeatureSetId;
    std::vector<std::set<features::FeatureSetId>> rows = {{fs3}, {fs3}, {fs1, fs2}};
    auto result = ablation(data, features::default_schema(), rows, factory, tc);
    REQUIRE(result.size() == 3);
    CHECK(result[0].ok);
    CHECK(result[0].description == "fs3");
    CHECK(result[0].width == 7);
    // identical subsets in two rows give identical accuracies
    CHECK(result[0].accuracy == result[1].accuracy);
    CHECK(result[2].width == 31);
}

TEST_CASE("ablation isolates a failing row and continues") {
    LabeledDataset data = tiny_dataset(10, 10, 3, 40);
    dnn::TrainConfig tc;
    tc.epochs = 1;
    // the factory throws for one specific width
    ModelFactory factory = [](int width) {
        if (width == 7) throw BadDims("factory rejects width 7");
        return dnn::init_model({width, 4, 2}, 1);
    };
    using enum features::FeatureSetId;
    auto result = ablation(data, features::default_schema(), {{fs3}, {fs1}}, factory, tc);
    REQUIRE(result.size() == 2);
    CHECK_FALSE(result[0].ok);
    CHECK(result[0].error.find("width 7") != std::string::npos);
    CHECK(result[1].ok);
}

TEST_CASE("compare: 1-NN memorizes a duplicated validation fold") {
    // every class is one constant vector, so each validation sample has
    // exact duplicates in the train fold
    LabeledDataset data;
    for (int i = 0; i < 30; ++i) {
        features::FeatureVector v;
        int label = i % 2;
        for (int c = 0; c < 6; ++c) v.bits.push_back(label ? 1 : 0);
        data.push("a" + std::to_string(i), std::move(v), label);
    }
    CompareConfig cfg;
    cfg.dnn.epochs = 2;
    cfg.dnn.seed = 4;
    cfg.knn_k = 1;
    cfg.forest_trees = 5;
    auto rows = compare(data, cfg);
    REQUIRE(rows.size() == 5);
    bool found_knn = false;
    for (const auto& row : rows) {
        if (row.classifier == "knn") {
            found_knn = true;
            REQUIRE(row.ok);
            CHECK(row.metrics.accuracy == 1.0);
        }
    }
    CHECK(found_knn);
}

TEST_CASE("compare is deterministic for a fixed seed") {
    LabeledDataset data = tiny_dataset(25, 25, 77, 10);
    CompareConfig cfg;
    cfg.dnn.epochs = 3;
    cfg.dnn.seed = 21;
    cfg.forest_trees = 7;
    auto a = compare(data, cfg);
    auto b = compare(data, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].classifier == b[i].classifier);
        CHECK(a[i].metrics.accuracy == b[i].metrics.accuracy);
        CHECK(a[i].metrics.f1 == b[i].metrics.f1);
    }
}

TEST_CASE("feature CSV round-trip") {
    LabeledDataset data = tiny_dataset(4, 3, 2, 5);
    std::string csv = write_feature_csv(data);
    LabeledDataset back = read_feature_csv(csv);
    CHECK(back.ids == data.ids);
    CHECK(back.labels == data.labels);
    REQUIRE(back.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(back.vectors[i].bits == data.vectors[i].bits);
    CHECK(write_feature_csv(back) == csv);

    SECTION("header-only CSV reads as an empty dataset") {
        LabeledDataset empty = read_feature_csv("id,label,f0,f1\n");
        CHECK(empty.size() == 0);
    }
    SECTION("malformed inputs") {
        CHECK_THROWS_AS(read_feature_csv(""), CsvParseError);
        CHECK_THROWS_AS(read_feature_csv("nope\n"), CsvParseError);
        CHECK_THROWS_AS(read_feature_csv("id,label,f0\nx,2,1\n"), CsvParseError);
        CHECK_THROWS_AS(read_feature_csv("id,label,f0\nx,1,7\n"), CsvParseError);
        CHECK_THROWS_AS(read_feature_csv("id,label,f0\nx,1\n"), CsvParseError);
    }
}

TEST_CASE("dataset manifest parsing") {
    cli::DatasetManifest m = cli::parse_dataset_manifest("apk_path,label\na.apk,0\nb.apk,1\n");
    REQUIRE(m.rows.size() == 2);
    CHECK(m.rows[0].apk_path == "a.apk");
    CHECK(m.rows[0].label == 0);
    CHECK(m.rows[1].label == 1);
    CHECK_THROWS_AS(cli::parse_dataset_manifest(""), ManifestParseError);
    CHECK_THROWS_AS(cli::parse_dataset_manifest("wrong,header\n"), ManifestParseError);
    CHECK_THROWS_AS(cli::parse_dataset_manifest("apk_path,label\n,1\n"), ManifestParseError);
    CHECK_THROWS_AS(cli::parse_dataset_manifest("apk_path,label\na.apk,2\n"),
                    ManifestParseError);
}
