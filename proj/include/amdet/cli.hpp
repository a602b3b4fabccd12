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

// Command drivers behind the amdet binary. Each command prints its full
// effective configuration (seeds included) and is deterministic given it.
// Exit codes: 0 success/benign, 3 malicious (scan), 1 usage or parse
// error, 2 internal invariant violation.

#ifndef AMDET_CLI_HPP
#define AMDET_CLI_HPP

#include <charconv>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amdet/dataset.hpp"
#include "amdet/eval.hpp"
#include "amdet/features.hpp"
#include "amdet/io.hpp"
#include "amdet/mlp.hpp"
#include "amdet/synth.hpp"

namespace amdet::cli {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInternal = 2;
constexpr int kExitMalicious = 3;

inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline features::FeatureSchema load_schema_arg(const std::string& schema_path) {
    if (schema_path.empty()) return features::default_schema();
    return features::load_schema(read_text_file(schema_path));
}

inline void print_warnings(std::ostream& err, const Warnings& warnings) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
}

// ---------------------------------------------------------------------
// scan

struct ScanArgs {
    std::string apk_path;
    std::string model_path;
    std::string schema_path;
    UnixTime now = 0;
    bool lenient = false;
};

inline int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& err) {
    features::FeatureSchema schema = load_schema_arg(args.schema_path);
    dnn::MlpModel model = dnn::load_model(read_text_file(args.model_path));
    if (static_cast<std::size_t>(model.input_dim()) != schema.size())
        throw DimMismatch("model input width " + std::to_string(model.input_dim()) +
                          " does not match schema size " + std::to_string(schema.size()));

    out << "config: scan apk=" << args.apk_path << " model=" << args.model_path
        << " schema=" << (args.schema_path.empty() ? "<default>" : args.schema_path)
        << " now=" << format_iso8601(args.now) << " lenient=" << (args.lenient ? "1" : "0")
        << "\n";

    Warnings warnings;
    zip::ApkArchive archive = zip::open_apk(read_file(args.apk_path), &warnings);
    features::ExtractOptions options;
    options.lenient = args.lenient;
    features::AppFeatures app = features::extract(archive, args.now, options, &warnings);
    features::FeatureVector vec = features::vectorize(app, schema, args.apk_path);
    print_warnings(err, warnings);

    for (features::FeatureSetId set : features::kAllFeatureSets) {
        auto it = schema.set_spans.find(set);
        if (it == schema.set_spans.end()) continue;
        out << features::to_string(set) << ":";
        bool any = false;
        for (std::size_t i = it->second.first; i < it->second.second; ++i) {
            if (vec.bits[i]) {
                out << "\n  [" << i << "] " << schema.descriptors[i].label();
                any = true;
            }
        }
        out << (any ? "\n" : " (no features fired)\n");
    }

    std::vector<double> x;
    x.reserve(vec.bits.size());
    for (std::uint8_t b : vec.bits) x.push_back(b ? 1.0 : 0.0);
    auto [label, probability] = dnn::predict(model, x);
    out << "label: " << (label == 1 ? "malicious" : "benign") << "\n";
    out << "probability: " << fmt_double(probability) << "\n";
    return label == 1 ? kExitMalicious : kExitOk;
}

// ---------------------------------------------------------------------
// extract

struct ExtractArgs {
    std::string manifest_path;
    std::string schema_path;
    std::string out_csv;
    UnixTime now = 0;
    bool lenient = false;
};

inline int cmd_extract(const ExtractArgs& args, std::ostream& out, std::ostream& err) {
    features::FeatureSchema schema = load_schema_arg(args.schema_path);
    DatasetManifest manifest =
        parse_dataset_manifest(read_text_file(args.manifest_path), args.manifest_path);

    out << "config: extract manifest=" << args.manifest_path
        << " schema=" << (args.schema_path.empty() ? "<default>" : args.schema_path)
        << " now=" << format_iso8601(args.now) << " lenient=" << (args.lenient ? "1" : "0")
        << " rows=" << manifest.rows.size() << "\n";

    eval::LabeledDataset data;
    for (const ManifestRow& row : manifest.rows) {
        Warnings warnings;
        try {
            zip::ApkArchive archive = zip::open_apk(read_file(row.apk_path), &warnings);
            features::ExtractOptions options;
            options.lenient = args.lenient;
            features::AppFeatures app = features::extract(archive, args.now, options, &warnings);
            data.push(row.apk_path, features::vectorize(app, schema, row.apk_path), row.label);
        } catch (const Error& e) {
            if (!args.lenient) throw;
            warn(&warnings, row.apk_path + ": degraded to all-zero row (" + e.what() + ")");
            features::FeatureVector empty;
            empty.app_id = row.apk_path;
            empty.bits.assign(schema.size(), 0);
            data.push(row.apk_path, std::move(empty), row.label);
        }
        print_warnings(err, warnings);
    }
    std::string csv = eval::write_feature_csv(data, schema.size());
    write_file(args.out_csv, csv);
    out << "wrote " << data.size() << " rows to " << args.out_csv << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------
// synth

struct SynthArgs {
    std::string schema_path;
    std::string out_csv;
    synth::SyntheticConfig cfg;
};

inline int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream&) {
    features::FeatureSchema schema = load_schema_arg(args.schema_path);
    out << "config: synth benign=" << args.cfg.n_benign << " malicious=" << args.cfg.n_malicious
        << " seed=" << args.cfg.seed << " noise=" << fmt_double(args.cfg.noise) << " weights=";
    bool first = true;
    for (const auto& [id, w] : args.cfg.signal_weights) {
        if (!first) out << ",";
        out << features::to_string(id) << "=" << fmt_double(w);
        first = false;
    }
    out << "\n";
    eval::LabeledDataset data = synth::generate(args.cfg, schema);
    write_file(args.out_csv, eval::write_feature_csv(data, schema.size()));
    out << "wrote " << data.size() << " rows to " << args.out_csv << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------
// train

struct TrainArgs {
    std::string data_csv;
    std::string model_out;
    std::string curves_out;   // optional
    std::string metrics_out;  // optional
    dnn::TrainConfig cfg;
};

inline void print_train_config(std::ostream& out, const char* name, const dnn::TrainConfig& cfg) {
    out << "config: " << name << " lr=" << fmt_double(cfg.learning_rate)
        << " epochs=" << cfg.epochs << " batch=" << cfg.batch_size << " seed=" << cfg.seed
        << " split=" << fmt_double(cfg.split_ratio) << "\n";
}

inline std::string curves_csv(const dnn::TrainReport& report) {
    std::string csv = "epoch,train_loss,valid_loss,train_acc,valid_acc\n";
    for (std::size_t e = 0; e < report.epochs.size(); ++e) {
        const auto& s = report.epochs[e];
        csv += std::to_string(e + 1) + "," + fmt_double(s.train_loss) + "," +
               fmt_double(s.valid_loss) + "," + fmt_double(s.train_acc) + "," +
               fmt_double(s.valid_acc) + "\n";
    }
    return csv;
}

inline std::string metrics_csv(const eval::Metrics& m) {
    std::string csv = "metric,value\n";
    csv += "accuracy," + fmt_double(m.accuracy) + "\n";
    csv += "precision," + fmt_double(m.precision) + "\n";
    csv += "recall," + fmt_double(m.recall) + "\n";
    csv += "f1," + fmt_double(m.f1) + "\n";
    return csv;
}

inline int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream&) {
    print_train_config(out, "train", args.cfg);
    eval::LabeledDataset data = eval::read_feature_csv(read_text_file(args.data_csv));
    std::vector<std::vector<double>> xs = eval::to_real_matrix(data);
    dnn::MlpModel model =
        dnn::init_model(dnn::paper_dims(static_cast<int>(data.width())), args.cfg.seed);
    auto [trained, report] = dnn::train(std::move(model), xs, data.labels, args.cfg);

    write_file(args.model_out, dnn::save_model(trained));
    out << "wrote model to " << args.model_out << " (params=" << dnn::param_count(trained)
        << ")\n";
    if (!args.curves_out.empty()) {
        write_file(args.curves_out, curves_csv(report));
        out << "wrote curves to " << args.curves_out << "\n";
    }
    std::string metrics = metrics_csv(report.final_metrics);
    if (!args.metrics_out.empty()) {
        write_file(args.metrics_out, metrics);
        out << "wrote metrics to " << args.metrics_out << "\n";
    }
    out << metrics;
    return kExitOk;
}

// ---------------------------------------------------------------------
// eval

struct EvalArgs {
    std::string model_path;
    std::string data_csv;
    std::string metrics_out;  // optional
};

inline int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream&) {
    out << "config: eval model=" << args.model_path << " data=" << args.data_csv << "\n";
    dnn::MlpModel model = dnn::load_model(read_text_file(args.model_path));
    eval::LabeledDataset data = eval::read_feature_csv(read_text_file(args.data_csv));
    if (static_cast<std::size_t>(model.input_dim()) != data.width())
        throw DimMismatch("model input width does not match dataset width");
    eval::ConfusionMatrix cm;
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::vector<double> x;
        x.reserve(data.width());
        for (std::uint8_t b : data.vectors[i].bits) x.push_back(b ? 1.0 : 0.0);
        auto [label, probability] = dnn::predict(model, x);
        (void)probability;
        cm.add(data.labels[i], label);
    }
    std::string metrics = metrics_csv(eval::compute_metrics(cm));
    if (!args.metrics_out.empty()) write_file(args.metrics_out, metrics);
    out << metrics;
    return kExitOk;
}

// ---------------------------------------------------------------------
// ablate

struct AblateArgs {
    std::string data_csv;
    std::string schema_path;
    std::string subsets;  // e.g. "all,fs3,fs1,fs2"; empty = the 7 default rows
    std::string out_csv;  // optional
    dnn::TrainConfig cfg;
};

inline std::vector<std::set<features::FeatureSetId>> parse_subsets(const std::string& text) {
    std::vector<std::set<features::FeatureSetId>> subsets;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        std::set<features::FeatureSetId> subset;
        if (item == "all") {
            subset.insert(features::kAllFeatureSets.begin(), features::kAllFeatureSets.end());
        } else {
            std::size_t p = 0;
            while (p <= item.size()) {
                std::size_t plus = item.find('+', p);
                if (plus == std::string::npos) plus = item.size();
                std::string name = item.substr(p, plus - p);
                p = plus + 1;
                auto id = features::feature_set_from_string(name);
                if (!id) throw EmptySubset("unknown feature set: " + name);
                subset.insert(*id);
            }
        }
        if (subset.empty()) throw EmptySubset("empty subset in list");
        subsets.push_back(std::move(subset));
        if (comma == text.size()) break;
    }
    if (subsets.empty()) throw EmptySubset("no subsets given");
    return subsets;
}

inline std::string ablation_csv(const std::vector<eval::AblationRow>& rows) {
    std::string csv = "subset,width,accuracy,error\n";
    for (const auto& row : rows) {
        csv += row.description + "," + std::to_string(row.width) + ",";
        csv += row.ok ? fmt_double(row.accuracy) : "";
        csv += ",";
        csv += row.ok ? "" : row.error;
        csv += "\n";
    }
    return csv;
}

inline int cmd_ablate(const AblateArgs& args, std::ostream& out, std::ostream&) {
    print_train_config(out, "ablate", args.cfg);
    features::FeatureSchema schema = load_schema_arg(args.schema_path);
    eval::LabeledDataset data = eval::read_feature_csv(read_text_file(args.data_csv));
    auto subsets =
        args.subsets.empty() ? eval::default_ablation_subsets() : parse_subsets(args.subsets);
    auto rows = eval::ablation(data, schema, subsets, eval::paper_model_factory(args.cfg.seed),
                               args.cfg);
    std::string csv = ablation_csv(rows);
    if (!args.out_csv.empty()) write_file(args.out_csv, csv);
    out << csv;
    return kExitOk;
}

// ---------------------------------------------------------------------
// compare

struct CompareArgs {
    std::string data_csv;
    std::string out_csv;  // optional
    eval::CompareConfig cfg;
};

inline std::string compare_table_csv(const std::vector<eval::CompareRow>& rows) {
    std::string csv = "classifier,accuracy,precision,recall,f1,error\n";
    for (const auto& row : rows) {
        csv += row.classifier + ",";
        if (row.ok) {
            csv += fmt_double(row.metrics.accuracy) + "," + fmt_double(row.metrics.precision) +
                   "," + fmt_double(row.metrics.recall) + "," + fmt_double(row.metrics.f1) + ",";
        } else {
            csv += ",,,," + row.error;
        }
        csv += "\n";
    }
    return csv;
}

inline int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream&) {
    print_train_config(out, "compare", args.cfg.dnn);
    out << "config: baselines knn_k=" << args.cfg.knn_k
        << " tree_depth=" << args.cfg.tree_max_depth << " tree_min_leaf=" << args.cfg.tree_min_leaf
        << " forest_trees=" << args.cfg.forest_trees
        << " forest_depth=" << args.cfg.forest_max_depth
        << " svm_lambda=" << fmt_double(args.cfg.svm_lambda)
        << " svm_epochs=" << args.cfg.svm_epochs << "\n";
    eval::LabeledDataset data = eval::read_feature_csv(read_text_file(args.data_csv));
    auto rows = eval::compare(data, args.cfg);
    std::string csv = compare_table_csv(rows);
    if (!args.out_csv.empty()) write_file(args.out_csv, csv);
    out << csv;
    return kExitOk;
}

}  // namespace amdet::cli

#endif  // AMDET_CLI_HPP
