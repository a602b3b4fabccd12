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

// Classical baseline classifiers: k-nearest-neighbour, CART decision
// tree, random forest and a Pegasos-style linear SVM. All are seeded
// and bit-deterministic; labels are 0 (benign) and 1 (malicious).

#ifndef AMDET_BASELINES_HPP
#define AMDET_BASELINES_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "amdet/common.hpp"
#include "amdet/rng.hpp"

namespace amdet::baselines {

using Matrix = std::vector<std::vector<double>>;
using Labels = std::vector<int>;

// ---------------------------------------------------------------------
// KNN

struct KnnModel {
    int k = 5;
    Matrix xs;
    Labels ys;
};

inline KnnModel knn_train(Matrix xs, Labels ys, int k) {
    if (xs.empty()) throw EmptyTrainSet("knn needs a non-empty training set");
    if (xs.size() != ys.size()) throw DimMismatch("sample/label count mismatch");
    if (k < 1 || k % 2 == 0) throw BadK("k must be an odd positive integer");
    if (static_cast<std::size_t>(k) > xs.size())
        throw BadK("k exceeds the training set size");
    return KnnModel{k, std::move(xs), std::move(ys)};
}

/// Majority label among the k nearest by squared Euclidean distance
/// (Hamming distance on 0/1 vectors). Distance ties break toward the
/// lower sample index; odd k makes vote ties impossible for 2 classes.
inline int knn_predict(const KnnModel& m, const std::vector<double>& x) {
    if (m.xs.empty()) throw EmptyTrainSet("knn model has no training data");
    if (x.size() != m.xs[0].size()) throw DimMismatch("query width mismatch");
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(m.xs.size());
    for (std::size_t i = 0; i < m.xs.size(); ++i) {
        double d = 0.0;
        const auto& t = m.xs[i];
        for (std::size_t j = 0; j < x.size(); ++j) {
            double diff = t[j] - x[j];
            d += diff * diff;
        }
        dist.emplace_back(d, i);
    }
    std::sort(dist.begin(), dist.end());
    int votes = 0;
    for (int n = 0; n < m.k; ++n)
        votes += m.ys[dist[static_cast<std::size_t>(n)].second] == 1 ? 1 : -1;
    return votes > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------
// CART decision tree on Gini impurity over Boolean splits

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    int label = 0;
    int left = -1;   // child when bit is 0
    int right = -1;  // child when bit is 1
};

struct DTreeModel {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

namespace detail {

inline double gini(std::size_t pos, std::size_t total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(pos) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

struct SplitChoice {
    int feature = -1;
    double gain = 0.0;
};

// Best Gini-gain split over the candidate features; feature-index ties
// resolve to the lowest index.
inline SplitChoice best_split(const Matrix& xs, const Labels& ys,
                              const std::vector<std::size_t>& idx,
                              const std::vector<int>& candidates, int min_leaf) {
    std::size_t total = idx.size();
    std::size_t pos_total = 0;
    for (std::size_t i : idx) pos_total += static_cast<std::size_t>(ys[i] == 1);
    double parent = gini(pos_total, total);

    SplitChoice best;
    for (int f : candidates) {
        std::size_t n1 = 0, pos1 = 0;
        for (std::size_t i : idx) {
            if (xs[i][static_cast<std::size_t>(f)] != 0.0) {
                ++n1;
                pos1 += static_cast<std::size_t>(ys[i] == 1);
            }
        }
        std::size_t n0 = total - n1;
        if (n0 < static_cast<std::size_t>(min_leaf) || n1 < static_cast<std::size_t>(min_leaf))
            continue;
        std::size_t pos0 = pos_total - pos1;
        double weighted = (static_cast<double>(n0) * gini(pos0, n0) +
                           static_cast<double>(n1) * gini(pos1, n1)) /
                          static_cast<double>(total);
        double gain = parent - weighted;
        if (gain > best.gain + 1e-12) {
            best.gain = gain;
            best.feature = f;
        }
    }
    return best;
}

inline int majority_label(const Labels& ys, const std::vector<std::size_t>& idx) {
    std::size_t pos = 0;
    for (std::size_t i : idx) pos += static_cast<std::size_t>(ys[i] == 1);
    // tie goes to benign
    return 2 * pos > idx.size() ? 1 : 0;
}

inline int grow_tree(DTreeModel& model, const Matrix& xs, const Labels& ys,
                     const std::vector<std::size_t>& idx, int depth, int max_depth,
                     int min_leaf, DetRng* rng, int subset_size) {
    std::size_t pos = 0;
    for (std::size_t i : idx) pos += static_cast<std::size_t>(ys[i] == 1);
    bool pure = (pos == 0 || pos == idx.size());

    int node_index = static_cast<int>(model.nodes.size());
    model.nodes.push_back(TreeNode{});
    if (pure || depth >= max_depth) {
        model.nodes[static_cast<std::size_t>(node_index)].label = majority_label(ys, idx);
        return node_index;
    }

    int n_features = static_cast<int>(xs[0].size());
    std::vector<int> candidates;
    if (rng && subset_size > 0 && subset_size < n_features) {
        std::vector<int> all(static_cast<std::size_t>(n_features));
        std::iota(all.begin(), all.end(), 0);
        rng->shuffle(all);
        candidates.assign(all.begin(), all.begin() + subset_size);
        std::sort(candidates.begin(), candidates.end());
    } else {
        candidates.resize(static_cast<std::size_t>(n_features));
        std::iota(candidates.begin(), candidates.end(), 0);
    }

    SplitChoice split = best_split(xs, ys, idx, candidates, min_leaf);
    if (split.feature < 0) {
        model.nodes[static_cast<std::size_t>(node_index)].label = majority_label(ys, idx);
        return node_index;
    }

    std::vector<std::size_t> zeros, ones;
    for (std::size_t i : idx)
        (xs[i][static_cast<std::size_t>(split.feature)] != 0.0 ? ones : zeros).push_back(i);
    int left = grow_tree(model, xs, ys, zeros, depth + 1, max_depth, min_leaf, rng, subset_size);
    int right = grow_tree(model, xs, ys, ones, depth + 1, max_depth, min_leaf, rng, subset_size);
    TreeNode& node = model.nodes[static_cast<std::size_t>(node_index)];
    node.feature = split.feature;
    node.left = left;
    node.right = right;
    return node_index;
}

}  // namespace detail

inline DTreeModel dtree_train(const Matrix& xs, const Labels& ys, int max_depth, int min_leaf,
                              std::uint64_t seed = 0) {
    if (xs.empty()) throw EmptyTrainSet("decision tree needs a non-empty training set");
    if (xs.size() != ys.size()) throw DimMismatch("sample/label count mismatch");
    (void)seed;  // seed only matters for feature subsampling under a forest
    DTreeModel model;
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), 0);
    detail::grow_tree(model, xs, ys, idx, 0, max_depth, std::max(1, min_leaf), nullptr, 0);
    return model;
}

inline int dtree_predict(const DTreeModel& m, const std::vector<double>& x) {
    if (m.nodes.empty()) throw EmptyTrainSet("empty tree");
    int at = 0;
    for (;;) {
        const TreeNode& node = m.nodes[static_cast<std::size_t>(at)];
        if (node.feature < 0) return node.label;
        if (static_cast<std::size_t>(node.feature) >= x.size())
            throw DimMismatch("query narrower than tree features");
        at = (x[static_cast<std::size_t>(node.feature)] != 0.0) ? node.right : node.left;
    }
}

// ---------------------------------------------------------------------
// Random forest: seeded bootstrap samples, sqrt-width feature subsets

struct ForestModel {
    std::vector<DTreeModel> trees;
};

inline ForestModel rforest_train(const Matrix& xs, const Labels& ys, int n_trees, int max_depth,
                                 std::uint64_t seed) {
    if (xs.empty()) throw EmptyTrainSet("random forest needs a non-empty training set");
    if (n_trees < 1) throw EmptyTrainSet("n_trees must be >= 1");
    int n_features = static_cast<int>(xs[0].size());
    int subset = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_features))));
    ForestModel forest;
    for (int t = 0; t < n_trees; ++t) {
        // per-tree seed derived from the master seed keeps trees independent
        // of each other while preserving bit-determinism
        DetRng rng(seed + static_cast<std::uint64_t>(t));
        std::vector<std::size_t> boot(xs.size());
        for (auto& i : boot) i = static_cast<std::size_t>(rng.bounded(xs.size()));
        std::sort(boot.begin(), boot.end());
        DTreeModel tree;
        detail::grow_tree(tree, xs, ys, boot, 0, max_depth, 1, &rng, subset);
        forest.trees.push_back(std::move(tree));
    }
    return forest;
}

inline int rforest_predict(const ForestModel& m, const std::vector<double>& x) {
    if (m.trees.empty()) throw EmptyTrainSet("empty forest");
    int votes = 0;
    for (const auto& tree : m.trees) votes += dtree_predict(tree, x) == 1 ? 1 : -1;
    return votes > 0 ? 1 : 0;  // tie goes to benign
}

// ---------------------------------------------------------------------
// Linear SVM, Pegasos-style primal subgradient descent on hinge loss

struct SvmModel {
    std::vector<double> w;
    double b = 0.0;
};

/// lambda/2 * (|w|^2 + b^2) + mean hinge loss; the quantity the trainer
/// minimizes (the bias is regularized along with the weights).
inline double svm_objective(const SvmModel& m, const Matrix& xs, const Labels& ys,
                            double lambda) {
    double norm = m.b * m.b;
    for (double wi : m.w) norm += wi * wi;
    double hinge = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double margin = m.b;
        for (std::size_t j = 0; j < m.w.size(); ++j) margin += m.w[j] * xs[i][j];
        double y = ys[i] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * margin);
    }
    return 0.5 * lambda * norm + hinge / static_cast<double>(xs.size());
}

inline SvmModel svm_train(const Matrix& xs, const Labels& ys, double lambda, int epochs,
                          std::uint64_t seed) {
    if (xs.empty()) throw EmptyTrainSet("svm needs a non-empty training set");
    if (xs.size() != ys.size()) throw DimMismatch("sample/label count mismatch");
    bool has_pos = false, has_neg = false;
    for (int y : ys) (y == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw SingleClassData("svm needs both classes present");

    SvmModel m;
    m.w.assign(xs[0].size(), 0.0);
    DetRng rng(seed);
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 1;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            double eta = 1.0 / (lambda * static_cast<double>(t));
            double y = ys[i] == 1 ? 1.0 : -1.0;
            double margin = m.b;
            for (std::size_t j = 0; j < m.w.size(); ++j) margin += m.w[j] * xs[i][j];
            double shrink = 1.0 - eta * lambda;
            for (double& wj : m.w) wj *= shrink;
            m.b *= shrink;
            if (y * margin < 1.0) {
                for (std::size_t j = 0; j < m.w.size(); ++j) m.w[j] += eta * y * xs[i][j];
                m.b += eta * y;
            }
            ++t;
        }
    }
    return m;
}

inline int svm_predict(const SvmModel& m, const std::vector<double>& x) {
    if (x.size() != m.w.size()) throw DimMismatch("query width mismatch");
    double margin = m.b;
    for (std::size_t j = 0; j < m.w.size(); ++j) margin += m.w[j] * x[j];
    return margin > 0.0 ? 1 : 0;
}

// ---------------------------------------------------------------------
// Unified model wrapper and text persistence
// (headers KNN v1 / DT v1 / RF v1 / SVM v1, analogous to the MLP format)

struct BaselineModel {
    std::variant<KnnModel, DTreeModel, ForestModel, SvmModel> model;

    std::string kind() const {
        switch (model.index()) {
            case 0: return "knn";
            case 1: return "dtree";
            case 2: return "rforest";
            default: return "svm";
        }
    }
};

inline int baseline_predict(const BaselineModel& m, const std::vector<double>& x) {
    return std::visit(
        [&](const auto& inner) {
            using T = std::decay_t<decltype(inner)>;
            if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(inner, x);
            else if constexpr (std::is_same_v<T, DTreeModel>) return dtree_predict(inner, x);
            else if constexpr (std::is_same_v<T, ForestModel>) return rforest_predict(inner, x);
            else return svm_predict(inner, x);
        },
        m.model);
}

namespace detail {

inline std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void save_tree(std::string& out, const DTreeModel& tree) {
    out += std::to_string(tree.nodes.size());
    out.push_back('\n');
    for (const TreeNode& n : tree.nodes) {
        out += std::to_string(n.feature);
        out.push_back(' ');
        out += std::to_string(n.label);
        out.push_back(' ');
        out += std::to_string(n.left);
        out.push_back(' ');
        out += std::to_string(n.right);
        out.push_back('\n');
    }
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool line(std::vector<std::string_view>& tokens) {
        tokens.clear();
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view l = text.substr(pos, end - pos);
        pos = end + 1;
        std::size_t i = 0;
        while (i < l.size()) {
            while (i < l.size() && (l[i] == ' ' || l[i] == '\r')) ++i;
            std::size_t start = i;
            while (i < l.size() && l[i] != ' ' && l[i] != '\r') ++i;
            if (i > start) tokens.push_back(l.substr(start, i - start));
        }
        return true;
    }
};

template <typename T>
inline T parse_num(std::string_view tok) {
    T v{};
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ModelParseError("bad number: " + std::string(tok));
    return v;
}

inline DTreeModel load_tree(Cursor& c) {
    std::vector<std::string_view> tok;
    if (!c.line(tok) || tok.size() != 1) throw ModelParseError("missing tree node count");
    auto count = parse_num<std::size_t>(tok[0]);
    DTreeModel tree;
    for (std::size_t i = 0; i < count; ++i) {
        if (!c.line(tok) || tok.size() != 4) throw ModelParseError("bad tree node line");
        TreeNode n;
        n.feature = parse_num<int>(tok[0]);
        n.label = parse_num<int>(tok[1]);
        n.left = parse_num<int>(tok[2]);
        n.right = parse_num<int>(tok[3]);
        if (n.feature >= 0 &&
            (n.left < 0 || n.right < 0 || static_cast<std::size_t>(n.left) >= count ||
             static_cast<std::size_t>(n.right) >= count ||
             n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i)))
            throw ModelParseError("tree child index out of bounds or cyclic");
        tree.nodes.push_back(n);
    }
    if (tree.nodes.empty()) throw ModelParseError("empty tree");
    return tree;
}

}  // namespace detail

inline std::string save_baseline(const BaselineModel& m) {
    std::string out;
    if (const auto* knn = std::get_if<KnnModel>(&m.model)) {
        out = "KNN v1\n";
        out += std::to_string(knn->k) + " " + std::to_string(knn->xs.size()) + " " +
               std::to_string(knn->xs.empty() ? 0 : knn->xs[0].size()) + "\n";
        for (std::size_t i = 0; i < knn->xs.size(); ++i) {
            out += std::to_string(knn->ys[i]);
            for (double v : knn->xs[i]) {
                out.push_back(' ');
                out += detail::fmt(v);
            }
            out.push_back('\n');
        }
    } else if (const auto* tree = std::get_if<DTreeModel>(&m.model)) {
        out = "DT v1\n";
        detail::save_tree(out, *tree);
    } else if (const auto* forest = std::get_if<ForestModel>(&m.model)) {
        out = "RF v1\n";
        out += std::to_string(forest->trees.size());
        out.push_back('\n');
        for (const auto& tree : forest->trees) detail::save_tree(out, tree);
    } else {
        const auto& svm = std::get<SvmModel>(m.model);
        out = "SVM v1\n";
        out += std::to_string(svm.w.size());
        out.push_back('\n');
        for (std::size_t j = 0; j < svm.w.size(); ++j) {
            if (j) out.push_back(' ');
            out += detail::fmt(svm.w[j]);
        }
        out.push_back('\n');
        out += detail::fmt(svm.b);
        out.push_back('\n');
    }
    return out;
}

inline BaselineModel load_baseline(std::string_view text) {
    detail::Cursor c{text};
    std::vector<std::string_view> tok;
    if (!c.line(tok) || tok.size() != 2 || tok[1] != "v1")
        throw ModelParseError("bad baseline model header");
    BaselineModel out;
    if (tok[0] == "KNN") {
        if (!c.line(tok) || tok.size() != 3) throw ModelParseError("bad KNN shape line");
        KnnModel knn;
        knn.k = detail::parse_num<int>(tok[0]);
        auto rows = detail::parse_num<std::size_t>(tok[1]);
        auto width = detail::parse_num<std::size_t>(tok[2]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (!c.line(tok) || tok.size() != width + 1)
                throw ModelParseError("bad KNN sample line");
            knn.ys.push_back(detail::parse_num<int>(tok[0]));
            std::vector<double> row;
            for (std::size_t j = 1; j < tok.size(); ++j)
                row.push_back(detail::parse_num<double>(tok[j]));
            knn.xs.push_back(std::move(row));
        }
        if (knn.k < 1 || knn.k % 2 == 0 || static_cast<std::size_t>(knn.k) > knn.xs.size())
            throw ModelParseError("bad k for stored training set");
        out.model = std::move(knn);
    } else if (tok[0] == "DT") {
        out.model = detail::load_tree(c);
    } else if (tok[0] == "RF") {
        if (!c.line(tok) || tok.size() != 1) throw ModelParseError("missing forest size");
        auto n = detail::parse_num<std::size_t>(tok[0]);
        if (n == 0) throw ModelParseError("forest must be non-empty");
        ForestModel forest;
        for (std::size_t i = 0; i < n; ++i) forest.trees.push_back(detail::load_tree(c));
        out.model = std::move(forest);
    } else if (tok[0] == "SVM") {
        if (!c.line(tok) || tok.size() != 1) throw ModelParseError("missing svm width");
        auto width = detail::parse_num<std::size_t>(tok[0]);
        SvmModel svm;
        if (!c.line(tok) || tok.size() != width) throw ModelParseError("bad svm weight line");
        for (auto t : tok) {
            double v = detail::parse_num<double>(t);
            if (!std::isfinite(v)) throw ModelParseError("non-finite svm weight");
            svm.w.push_back(v);
        }
        if (!c.line(tok) || tok.size() != 1) throw ModelParseError("bad svm bias line");
        svm.b = detail::parse_num<double>(tok[0]);
        out.model = std::move(svm);
    } else {
        throw ModelParseError("unknown baseline kind: " + std::string(tok[0]));
    }
    while (c.line(tok))
        if (!tok.empty()) throw ModelParseError("trailing content after model");
    return out;
}

}  // namespace amdet::baselines

#endif  // AMDET_BASELINES_HPP
