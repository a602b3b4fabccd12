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

#include <ctime>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "amdet/cli.hpp"

namespace {

amdet::UnixTime resolve_now(const std::string& now_flag) {
    if (now_flag.empty()) return static_cast<amdet::UnixTime>(std::time(nullptr));
    return amdet::parse_iso8601(now_flag);
}

std::map<amdet::features::FeatureSetId, double> parse_weights(const std::string& text) {
    auto weights = amdet::synth::SyntheticConfig::default_signal_weights();
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw amdet::Error("bad weight item (want fsK=value): " + item);
        auto id = amdet::features::feature_set_from_string(item.substr(0, eq));
        if (!id) throw amdet::Error("unknown feature set in weights: " + item);
        weights[*id] = std::stod(item.substr(eq + 1));
    }
    return weights;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"amdet: APK static-analysis features and malware classifiers"};
    app.require_subcommand(1);

    // shared option storage
    std::string schema_path, now_flag, out_path;
    bool lenient = false;
    amdet::dnn::TrainConfig train_cfg;

    auto add_train_flags = [&](CLI::App* cmd) {
        cmd->add_option("--lr", train_cfg.learning_rate, "learning rate")
            ->capture_default_str();
        cmd->add_option("--epochs", train_cfg.epochs, "training epochs")->capture_default_str();
        cmd->add_option("--batch", train_cfg.batch_size, "mini-batch size")
            ->capture_default_str();
        cmd->add_option("--seed", train_cfg.seed, "deterministic seed")->capture_default_str();
        cmd->add_option("--split", train_cfg.split_ratio, "train fraction of the split")
            ->capture_default_str();
    };

    // scan
    auto* scan = app.add_subcommand("scan", "extract features from one APK and classify it");
    std::string scan_apk, scan_model;
    scan->add_option("apk", scan_apk, "APK file")->required();
    scan->add_option("--model", scan_model, "trained model file")->required();
    scan->add_option("--schema", schema_path, "feature schema file (default: built-in)");
    scan->add_option("--now", now_flag, "scan timestamp, ISO-8601 (default: current time)");
    scan->add_flag("--lenient", lenient, "degrade failed extraction stages to empty sets");

    // extract
    auto* extract = app.add_subcommand("extract", "batch-extract feature vectors from a corpus");
    std::string extract_manifest;
    extract->add_option("manifest", extract_manifest, "CSV manifest: apk_path,label")->required();
    extract->add_option("--schema", schema_path, "feature schema file (default: built-in)");
    extract->add_option("--out", out_path, "output feature CSV")->required();
    extract->add_option("--now", now_flag, "scan timestamp, ISO-8601 (default: current time)");
    extract->add_flag("--lenient", lenient, "emit degraded all-zero rows for failing APKs");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    amdet::synth::SyntheticConfig synth_cfg;
    std::string weights_flag;
    synth_cmd->add_option("--benign", synth_cfg.n_benign, "benign row count")
        ->capture_default_str();
    synth_cmd->add_option("--malicious", synth_cfg.n_malicious, "malicious row count")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_cfg.seed, "deterministic seed")->capture_default_str();
    synth_cmd->add_option("--noise", synth_cfg.noise, "benign bit rate / malicious floor")
        ->capture_default_str();
    synth_cmd->add_option("--weights", weights_flag,
                          "per-set signal weights, e.g. fs3=0.8,fs1=0.42");
    synth_cmd->add_option("--schema", schema_path, "feature schema file (default: built-in)");
    synth_cmd->add_option("--out", out_path, "output feature CSV")->required();

    // train
    auto* train = app.add_subcommand("train", "train the network on a feature CSV");
    std::string train_data, curves_out, metrics_out;
    train->add_option("data", train_data, "feature CSV")->required();
    train->add_option("--out", out_path, "output model file")->required();
    train->add_option("--curves", curves_out, "per-epoch loss/accuracy CSV");
    train->add_option("--metrics", metrics_out, "final validation metrics CSV");
    add_train_flags(train);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a saved model on a feature CSV");
    std::string eval_model, eval_data;
    eval_cmd->add_option("data", eval_data, "feature CSV")->required();
    eval_cmd->add_option("--model", eval_model, "trained model file")->required();
    eval_cmd->add_option("--out", out_path, "metrics CSV output");

    // ablate
    auto* ablate = app.add_subcommand("ablate", "retrain per feature subset and tabulate");
    std::string ablate_data, subsets_flag;
    ablate->add_option("data", ablate_data, "feature CSV")->required();
    ablate->add_option("--schema", schema_path, "feature schema file (default: built-in)");
    ablate->add_option("--subsets", subsets_flag,
                       "comma list, e.g. all,fs3,fs1,fs2 (default: the 7 standard rows)");
    ablate->add_option("--out", out_path, "ablation table CSV output");
    add_train_flags(ablate);

    // compare
    auto* compare = app.add_subcommand("compare", "network vs 4 classical baselines");
    std::string compare_data;
    amdet::eval::CompareConfig compare_cfg;
    compare->add_option("data", compare_data, "feature CSV")->required();
    compare->add_option("--out", out_path, "comparison table CSV output");
    compare->add_option("--knn-k", compare_cfg.knn_k, "k for KNN")->capture_default_str();
    compare->add_option("--tree-depth", compare_cfg.tree_max_depth, "decision tree max depth")
        ->capture_default_str();
    compare->add_option("--min-leaf", compare_cfg.tree_min_leaf, "decision tree min leaf size")
        ->capture_default_str();
    compare->add_option("--trees", compare_cfg.forest_trees, "random forest size")
        ->capture_default_str();
    compare->add_option("--forest-depth", compare_cfg.forest_max_depth, "forest tree max depth")
        ->capture_default_str();
    compare->add_option("--svm-lambda", compare_cfg.svm_lambda, "SVM regularization")
        ->capture_default_str();
    compare->add_option("--svm-epochs", compare_cfg.svm_epochs, "SVM training epochs")
        ->capture_default_str();
    add_train_flags(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? amdet::cli::kExitOk : amdet::cli::kExitError;
    }

    try {
        if (scan->parsed()) {
            amdet::cli::ScanArgs args{scan_apk, scan_model, schema_path, resolve_now(now_flag),
                                      lenient};
            return amdet::cli::cmd_scan(args, std::cout, std::cerr);
        }
        if (extract->parsed()) {
            amdet::cli::ExtractArgs args{extract_manifest, schema_path, out_path,
                                         resolve_now(now_flag), lenient};
            return amdet::cli::cmd_extract(args, std::cout, std::cerr);
        }
        if (synth_cmd->parsed()) {
            if (!weights_flag.empty()) synth_cfg.signal_weights = parse_weights(weights_flag);
            amdet::cli::SynthArgs args{schema_path, out_path, synth_cfg};
            return amdet::cli::cmd_synth(args, std::cout, std::cerr);
        }
        if (train->parsed()) {
            amdet::cli::TrainArgs args{train_data, out_path, curves_out, metrics_out, train_cfg};
            return amdet::cli::cmd_train(args, std::cout, std::cerr);
        }
        if (eval_cmd->parsed()) {
            amdet::cli::EvalArgs args{eval_model, eval_data, out_path};
            return amdet::cli::cmd_eval(args, std::cout, std::cerr);
        }
        if (ablate->parsed()) {
            amdet::cli::AblateArgs args{ablate_data, schema_path, subsets_flag, out_path,
                                        train_cfg};
            return amdet::cli::cmd_ablate(args, std::cout, std::cerr);
        }
        if (compare->parsed()) {
            compare_cfg.dnn = train_cfg;
            amdet::cli::CompareArgs args{compare_data, out_path, compare_cfg};
            return amdet::cli::cmd_compare(args, std::cout, std::cerr);
        }
    } catch (const amdet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return amdet::cli::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return amdet::cli::kExitInternal;
    }
    return amdet::cli::kExitError;
}
