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

// Evaluation protocol drivers: the stratified 80/20 split, the
// feature-subset ablation table, and the five-classifier comparison.
// Every row of every table reuses one split, one seed, one dataset.

#ifndef AMDET_EVAL_HPP
#define AMDET_EVAL_HPP

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amdet/baselines.hpp"
#include "amdet/dataset.hpp"
#include "amdet/features.hpp"
#include "amdet/metrics.hpp"
#include "amdet/mlp.hpp"
#include "amdet/rng.hpp"

namespace amdet::eval {

/// Stratified disjoint partition; per-class train fraction within one
/// sample of the ratio; seeded and deterministic.
inline std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, double ratio,
                                                       std::uint64_t seed) {
    auto [train_idx, valid_idx] = stratified_split_indices(data.labels, ratio, seed);
    LabeledDataset train, valid;
    for (std::size_t i : train_idx) train.push(data.ids[i], data.vectors[i], data.labels[i]);
    for (std::size_t i : valid_idx) valid.push(data.ids[i], data.vectors[i], data.labels[i]);
    return {std::move(train), std::move(valid)};
}

inline std::string subset_description(const std::set<features::FeatureSetId>& subset) {
    if (subset.size() == features::kAllFeatureSets.size()) return "all";
    std::string out;
    for (features::FeatureSetId id : subset) {
        if (!out.empty()) out.push_back('+');
        out += features::to_string(id);
    }
    return out;
}

/// The seven ablation rows evaluated in the reference protocol.
inline std::vector<std::set<features::FeatureSetId>> default_ablation_subsets() {
    using enum features::FeatureSetId;
    return {
        {fs1, fs2, fs3, fs4, fs5},
        {fs3},
        {fs1},
        {fs2},
        {fs3, fs1, fs4, fs5},
        {fs3, fs2, fs4, fs5},
        {fs1, fs4, fs5},
    };
}

struct AblationRow {
    std::string description;
    std::size_t width = 0;
    double accuracy = 0.0;
    bool ok = false;
    std::string error;
};

using ModelFactory = std::function<dnn::MlpModel(int input_width)>;

inline ModelFactory paper_model_factory(std::uint64_t seed) {
    return [seed](int input_width) {
        return dnn::init_model(dnn::paper_dims(input_width), seed);
    };
}

/// Retrains a fresh model per feature subset on projected vectors; the
/// split indices and seed are shared across rows so accuracy differences
/// are attributable to the subsets alone. A failing row is recorded and
/// the remaining rows still run.
inline std::vector<AblationRow> ablation(const LabeledDataset& data,
                                         const features::FeatureSchema& schema,
                                         const std::vector<std::set<features::FeatureSetId>>& subsets,
                                         const ModelFactory& factory,
                                         const dnn::TrainConfig& cfg) {
    if (data.width() != schema.size())
        throw DimMismatch("dataset width does not match schema");
    auto [train_idx, valid_idx] = stratified_split_indices(data.labels, cfg.split_ratio, cfg.seed);

    std::vector<AblationRow> rows;
    for (const auto& subset : subsets) {
        AblationRow row;
        row.description = subset_description(subset);
        try {
            std::vector<std::vector<double>> xs;
            xs.reserve(data.size());
            for (const auto& v : data.vectors) {
                features::FeatureVector p = features::project(v, schema, subset);
                std::vector<double> real;
                real.reserve(p.bits.size());
                for (std::uint8_t b : p.bits) real.push_back(b ? 1.0 : 0.0);
                xs.push_back(std::move(real));
            }
            row.width = xs.empty() ? 0 : xs[0].size();
            dnn::MlpModel model = factory(static_cast<int>(row.width));
            auto [trained, report] =
                dnn::train_on_folds(std::move(model), xs, data.labels, train_idx, valid_idx, cfg);
            (void)trained;
            row.accuracy = report.final_metrics.accuracy;
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

struct CompareConfig {
    dnn::TrainConfig dnn;
    int knn_k = 5;
    int tree_max_depth = 10;
    int tree_min_leaf = 2;
    int forest_trees = 100;
    int forest_max_depth = 10;
    double svm_lambda = 1e-3;
    int svm_epochs = 100;
};

struct CompareRow {
    std::string classifier;
    Metrics metrics;
    bool ok = false;
    std::string error;
};

/// Trains the network and the four classical baselines on one shared
/// train fold and scores them on one shared validation fold. A failing
/// classifier is isolated to its row.
inline std::vector<CompareRow> compare(const LabeledDataset& data, const CompareConfig& cfg) {
    auto [train_idx, valid_idx] =
        stratified_split_indices(data.labels, cfg.dnn.split_ratio, cfg.dnn.seed);
    std::vector<std::vector<double>> all = to_real_matrix(data);

    baselines::Matrix train_xs;
    baselines::Labels train_ys;
    for (std::size_t i : train_idx) {
        train_xs.push_back(all[i]);
        train_ys.push_back(data.labels[i]);
    }

    auto score = [&](const std::function<int(const std::vector<double>&)>& predict) {
        ConfusionMatrix cm;
        for (std::size_t i : valid_idx) cm.add(data.labels[i], predict(all[i]));
        return compute_metrics(cm);
    };

    std::vector<CompareRow> rows;
    auto run = [&](std::string name, const std::function<Metrics()>& body) {
        CompareRow row;
        row.classifier = std::move(name);
        try {
            row.metrics = body();
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    };

    run("dnn", [&] {
        dnn::MlpModel model =
            dnn::init_model(dnn::paper_dims(static_cast<int>(data.width())), cfg.dnn.seed);
        auto [trained, report] =
            dnn::train_on_folds(std::move(model), all, data.labels, train_idx, valid_idx, cfg.dnn);
        (void)trained;
        return report.final_metrics;
    });
    run("svm", [&] {
        baselines::SvmModel m = baselines::svm_train(train_xs, train_ys, cfg.svm_lambda,
                                                     cfg.svm_epochs, cfg.dnn.seed);
        return score([&](const std::vector<double>& x) { return baselines::svm_predict(m, x); });
    });
    run("rforest", [&] {
        baselines::ForestModel m = baselines::rforest_train(train_xs, train_ys, cfg.forest_trees,
                                                            cfg.forest_max_depth, cfg.dnn.seed);
        return score([&](const std::vector<double>& x) { return baselines::rforest_predict(m, x); });
    });
    run("dtree", [&] {
        baselines::DTreeModel m = baselines::dtree_train(train_xs, train_ys, cfg.tree_max_depth,
                                                         cfg.tree_min_leaf, cfg.dnn.seed);
        return score([&](const std::vector<double>& x) { return baselines::dtree_predict(m, x); });
    });
    run("knn", [&] {
        baselines::KnnModel m = baselines::knn_train(train_xs, train_ys, cfg.knn_k);
        return score([&](const std::vector<double>& x) { return baselines::knn_predict(m, x); });
    });
    return rows;
}

}  // namespace amdet::eval

#endif  // AMDET_EVAL_HPP
