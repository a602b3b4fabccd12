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

// Multilayer perceptron with relu hidden layers and a softmax output,
// trained by mini-batch gradient descent on mean squared error.
// All arithmetic is double precision and single threaded: a given
// (data, config, seed) triple reproduces every number bit for bit.

#ifndef AMDET_MLP_HPP
#define AMDET_MLP_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amdet/common.hpp"
#include "amdet/metrics.hpp"
#include "amdet/rng.hpp"

namespace amdet::dnn {

enum class Activation { relu, softmax };

struct LayerParams {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> weights;  // row-major, out_dim rows of in_dim
    std::vector<double> biases;   // out_dim
    Activation activation = Activation::relu;
};

struct MlpModel {
    std::vector<int> dims;  // [d0, ..., dN]; dN is the class count
    std::vector<LayerParams> layers;

    int input_dim() const { return dims.front(); }
    int output_dim() const { return dims.back(); }
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 300;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double split_ratio = 0.8;
};

struct EpochStats {
    double train_loss = 0.0;
    double train_acc = 0.0;
    double valid_loss = 0.0;
    double valid_acc = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    eval::Metrics final_metrics;
    eval::ConfusionMatrix final_confusion;
};

struct GradLayer {
    std::vector<double> weights;
    std::vector<double> biases;
};

struct Gradients {
    std::vector<GradLayer> layers;
};

inline MlpModel init_model(const std::vector<int>& dims, std::uint64_t seed) {
    if (dims.size() < 2) throw BadDims("need at least input and output dims");
    for (int d : dims)
        if (d < 1) throw BadDims("all dims must be >= 1");
    MlpModel m;
    m.dims = dims;
    DetRng rng(seed);
    for (std::size_t j = 1; j < dims.size(); ++j) {
        LayerParams layer;
        layer.in_dim = dims[j - 1];
        layer.out_dim = dims[j];
        layer.activation =
            (j + 1 == dims.size()) ? Activation::softmax : Activation::relu;
        // Glorot-uniform weights, zero biases.
        double limit = std::sqrt(6.0 / (layer.in_dim + layer.out_dim));
        layer.weights.resize(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
        for (double& w : layer.weights) w = (2.0 * rng.unit_real() - 1.0) * limit;
        layer.biases.assign(static_cast<std::size_t>(layer.out_dim), 0.0);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

inline std::int64_t param_count(const MlpModel& m) {
    std::int64_t n = 0;
    for (const auto& layer : m.layers)
        n += static_cast<std::int64_t>(layer.in_dim + 1) * layer.out_dim;
    return n;
}

inline std::int64_t layer_param_count(const LayerParams& layer) {
    return static_cast<std::int64_t>(layer.in_dim + 1) * layer.out_dim;
}

namespace detail {

inline void affine(const LayerParams& layer, const double* in, double* out) {
    const double* w = layer.weights.data();
    for (int o = 0; o < layer.out_dim; ++o) {
        const double* row = w + static_cast<std::size_t>(o) * layer.in_dim;
        double acc = layer.biases[static_cast<std::size_t>(o)];
        for (int i = 0; i < layer.in_dim; ++i) acc += row[i] * in[i];
        out[o] = acc;
    }
}

inline void relu_inplace(double* v, int n) {
    for (int i = 0; i < n; ++i)
        if (v[i] < 0.0) v[i] = 0.0;
}

// Max-subtracted softmax: stable for pre-activations of any finite magnitude.
inline void softmax_inplace(double* v, int n) {
    double mx = v[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, v[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = std::exp(v[i] - mx);
        sum += v[i];
    }
    for (int i = 0; i < n; ++i) v[i] /= sum;
}

// Per-layer activation buffers for a batch; reused across batches.
struct Workspace {
    // acts[l] holds batch_size rows of dims[l] values; acts[0] is the input.
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> deltas;  // one per layer, batch rows of out_dim

    void resize(const MlpModel& m, int batch) {
        acts.resize(m.dims.size());
        for (std::size_t l = 0; l < m.dims.size(); ++l)
            acts[l].assign(static_cast<std::size_t>(batch) * m.dims[l], 0.0);
        deltas.resize(m.layers.size());
        for (std::size_t l = 0; l < m.layers.size(); ++l)
            deltas[l].assign(static_cast<std::size_t>(batch) * m.layers[l].out_dim, 0.0);
    }
};

inline void forward_batch(const MlpModel& m, Workspace& ws, int batch) {
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const LayerParams& layer = m.layers[l];
        const double* in = ws.acts[l].data();
        double* out = ws.acts[l + 1].data();
        for (int s = 0; s < batch; ++s) {
            const double* x = in + static_cast<std::size_t>(s) * layer.in_dim;
            double* y = out + static_cast<std::size_t>(s) * layer.out_dim;
            affine(layer, x, y);
            if (layer.activation == Activation::relu)
                relu_inplace(y, layer.out_dim);
            else
                softmax_inplace(y, layer.out_dim);
        }
    }
}

// Exact gradient of the mean batch MSE through softmax and relu.
// Output delta: dL/dz_k = p_k * (g_k - sum_c g_c p_c) with g = 2(p - y)/C,
// relu backward uses the subgradient 0 at 0.
inline void backward_batch(const MlpModel& m, Workspace& ws, int batch,
                           const double* targets, Gradients& grads) {
    const std::size_t n_layers = m.layers.size();
    const int out_dim = m.layers.back().out_dim;
    const double inv_batch = 1.0 / batch;

    {
        const double* probs = ws.acts[n_layers].data();
        double* delta = ws.deltas[n_layers - 1].data();
        for (int s = 0; s < batch; ++s) {
            const double* p = probs + static_cast<std::size_t>(s) * out_dim;
            const double* y = targets + static_cast<std::size_t>(s) * out_dim;
            double* d = delta + static_cast<std::size_t>(s) * out_dim;
            double dot = 0.0;
            for (int c = 0; c < out_dim; ++c) {
                double g = 2.0 * (p[c] - y[c]) / out_dim;
                d[c] = g;
                dot += g * p[c];
            }
            for (int c = 0; c < out_dim; ++c) d[c] = p[c] * (d[c] - dot);
        }
    }

    for (std::size_t l = n_layers; l-- > 0;) {
        const LayerParams& layer = m.layers[l];
        GradLayer& g = grads.layers[l];
        const double* h_prev = ws.acts[l].data();
        const double* delta = ws.deltas[l].data();

        std::fill(g.weights.begin(), g.weights.end(), 0.0);
        std::fill(g.biases.begin(), g.biases.end(), 0.0);
        for (int s = 0; s < batch; ++s) {
            const double* h = h_prev + static_cast<std::size_t>(s) * layer.in_dim;
            const double* d = delta + static_cast<std::size_t>(s) * layer.out_dim;
            for (int o = 0; o < layer.out_dim; ++o) {
                double dv = d[o] * inv_batch;
                if (dv == 0.0) continue;
                double* grow = g.weights.data() + static_cast<std::size_t>(o) * layer.in_dim;
                for (int i = 0; i < layer.in_dim; ++i) grow[i] += dv * h[i];
                g.biases[static_cast<std::size_t>(o)] += dv;
            }
        }

        if (l == 0) break;
        double* delta_prev = ws.deltas[l - 1].data();
        std::fill(ws.deltas[l - 1].begin(),
                  ws.deltas[l - 1].begin() + static_cast<std::ptrdiff_t>(batch) * layer.in_dim,
                  0.0);
        for (int s = 0; s < batch; ++s) {
            const double* d = delta + static_cast<std::size_t>(s) * layer.out_dim;
            double* dp = delta_prev + static_cast<std::size_t>(s) * layer.in_dim;
            for (int o = 0; o < layer.out_dim; ++o) {
                double dv = d[o];
                if (dv == 0.0) continue;
                const double* wrow =
                    layer.weights.data() + static_cast<std::size_t>(o) * layer.in_dim;
                for (int i = 0; i < layer.in_dim; ++i) dp[i] += dv * wrow[i];
            }
            const double* h = h_prev + static_cast<std::size_t>(s) * layer.in_dim;
            for (int i = 0; i < layer.in_dim; ++i)
                if (h[i] <= 0.0) dp[i] = 0.0;
        }
    }
}

inline Gradients make_zero_gradients(const MlpModel& m) {
    Gradients g;
    g.layers.resize(m.layers.size());
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        g.layers[l].weights.assign(m.layers[l].weights.size(), 0.0);
        g.layers[l].biases.assign(m.layers[l].biases.size(), 0.0);
    }
    return g;
}

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline std::vector<double> forward(const MlpModel& m, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != m.input_dim())
        throw DimMismatch("input width does not match model input dim");
    std::vector<double> cur = x;
    std::vector<double> next;
    for (const auto& layer : m.layers) {
        next.assign(static_cast<std::size_t>(layer.out_dim), 0.0);
        detail::affine(layer, cur.data(), next.data());
        if (layer.activation == Activation::relu)
            detail::relu_inplace(next.data(), layer.out_dim);
        else
            detail::softmax_inplace(next.data(), layer.out_dim);
        cur.swap(next);
    }
    return cur;
}

inline double loss_mse(const std::vector<double>& output,
                       const std::vector<double>& target) {
    if (output.size() != target.size())
        throw DimMismatch("output/target width mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        double d = output[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(output.size());
}

/// Labels: 0 = benign, 1 = malicious. Ties go to the lower index.
inline std::pair<int, double> predict(const MlpModel& m, const std::vector<double>& x) {
    std::vector<double> p = forward(m, x);
    int best = 0;
    for (int c = 1; c < static_cast<int>(p.size()); ++c)
        if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(best)]) best = c;
    return {best, p[static_cast<std::size_t>(best)]};
}

inline std::vector<double> one_hot(int label, int classes) {
    std::vector<double> y(static_cast<std::size_t>(classes), 0.0);
    y[static_cast<std::size_t>(label)] = 1.0;
    return y;
}

/// Mean-batch MSE gradient for an explicit (input, target) batch.
inline Gradients gradients(
    const MlpModel& m,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& batch) {
    if (batch.empty()) throw DimMismatch("empty batch");
    const int b = static_cast<int>(batch.size());
    const int d0 = m.input_dim();
    const int dn = m.output_dim();
    detail::Workspace ws;
    ws.resize(m, b);
    std::vector<double> targets(static_cast<std::size_t>(b) * dn);
    for (int s = 0; s < b; ++s) {
        const auto& [x, y] = batch[static_cast<std::size_t>(s)];
        if (static_cast<int>(x.size()) != d0 || static_cast<int>(y.size()) != dn)
            throw DimMismatch("batch sample width mismatch");
        std::copy(x.begin(), x.end(),
                  ws.acts[0].begin() + static_cast<std::ptrdiff_t>(s) * d0);
        std::copy(y.begin(), y.end(),
                  targets.begin() + static_cast<std::ptrdiff_t>(s) * dn);
    }
    detail::forward_batch(m, ws, b);
    Gradients g = detail::make_zero_gradients(m);
    detail::backward_batch(m, ws, b, targets.data(), g);
    return g;
}

namespace detail {

struct FoldEval {
    double loss = 0.0;
    double acc = 0.0;
};

inline FoldEval evaluate_fold(const MlpModel& m, Workspace& ws,
                              const std::vector<std::vector<double>>& xs,
                              const std::vector<int>& ys,
                              const std::vector<std::size_t>& idx, int chunk) {
    const int d0 = m.input_dim();
    const int dn = m.output_dim();
    double loss_sum = 0.0;
    std::int64_t correct = 0;
    for (std::size_t start = 0; start < idx.size(); start += static_cast<std::size_t>(chunk)) {
        int b = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(chunk),
                                                       idx.size() - start));
        for (int s = 0; s < b; ++s) {
            const auto& x = xs[idx[start + static_cast<std::size_t>(s)]];
            std::copy(x.begin(), x.end(),
                      ws.acts[0].begin() + static_cast<std::ptrdiff_t>(s) * d0);
        }
        forward_batch(m, ws, b);
        const double* probs = ws.acts[m.layers.size()].data();
        for (int s = 0; s < b; ++s) {
            int label = ys[idx[start + static_cast<std::size_t>(s)]];
            const double* p = probs + static_cast<std::size_t>(s) * dn;
            double l = 0.0;
            for (int c = 0; c < dn; ++c) {
                double t = (c == label) ? 1.0 : 0.0;
                double d = p[c] - t;
                l += d * d;
            }
            loss_sum += l / dn;
            int best = 0;
            for (int c = 1; c < dn; ++c)
                if (p[c] > p[best]) best = c;
            if (best == label) ++correct;
        }
    }
    FoldEval ev;
    ev.loss = loss_sum / static_cast<double>(idx.size());
    ev.acc = static_cast<double>(correct) / static_cast<double>(idx.size());
    return ev;
}

}  // namespace detail

/// Core training loop over externally supplied folds (index lists into
/// xs/ys). Used directly by the ablation/comparison drivers, which must
/// reuse one split across rows.
inline std::pair<MlpModel, TrainReport> train_on_folds(
    MlpModel model, const std::vector<std::vector<double>>& xs,
    const std::vector<int>& ys, const std::vector<std::size_t>& train_idx,
    const std::vector<std::size_t>& valid_idx, const TrainConfig& cfg) {
    const int d0 = model.input_dim();
    const int dn = model.output_dim();
    if (cfg.batch_size < 1) throw InsufficientData("batch_size must be >= 1");
    if (cfg.epochs < 0) throw InsufficientData("epochs must be >= 0");
    if (train_idx.empty() || valid_idx.empty())
        throw InsufficientData("both folds must be non-empty");
    for (const auto& x : xs)
        if (static_cast<int>(x.size()) != d0)
            throw DimMismatch("sample width does not match model input dim");

    TrainReport report;
    if (cfg.epochs == 0) {
        detail::Workspace ws0;
        ws0.resize(model, std::min<int>(cfg.batch_size, static_cast<int>(valid_idx.size())));
        eval::ConfusionMatrix cm;
        for (std::size_t i : valid_idx) {
            auto [label, prob] = predict(model, xs[i]);
            (void)prob;
            cm.add(ys[i], label);
        }
        report.final_confusion = cm;
        report.final_metrics = eval::compute_metrics(cm);
        return {std::move(model), std::move(report)};
    }

    DetRng rng(cfg.seed);
    std::vector<std::size_t> order = train_idx;
    const int batch = cfg.batch_size;
    detail::Workspace ws;
    ws.resize(model, batch);
    Gradients grads = detail::make_zero_gradients(model);
    std::vector<double> targets(static_cast<std::size_t>(batch) * dn);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double train_loss_sum = 0.0;
        std::int64_t train_correct = 0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(batch)) {
            int b = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(batch),
                                                           order.size() - start));
            for (int s = 0; s < b; ++s) {
                std::size_t i = order[start + static_cast<std::size_t>(s)];
                std::copy(xs[i].begin(), xs[i].end(),
                          ws.acts[0].begin() + static_cast<std::ptrdiff_t>(s) * d0);
                for (int c = 0; c < dn; ++c)
                    targets[static_cast<std::size_t>(s) * dn + static_cast<std::size_t>(c)] =
                        (c == ys[i]) ? 1.0 : 0.0;
            }
            detail::forward_batch(model, ws, b);

            const double* probs = ws.acts[model.layers.size()].data();
            for (int s = 0; s < b; ++s) {
                const double* p = probs + static_cast<std::size_t>(s) * dn;
                const double* t = targets.data() + static_cast<std::size_t>(s) * dn;
                double l = 0.0;
                int best = 0;
                for (int c = 0; c < dn; ++c) {
                    double d = p[c] - t[c];
                    l += d * d;
                    if (p[c] > p[best]) best = c;
                }
                train_loss_sum += l / dn;
                if (t[best] == 1.0) ++train_correct;
            }

            detail::backward_batch(model, ws, b, targets.data(), grads);
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                auto& layer = model.layers[l];
                const auto& g = grads.layers[l];
                for (std::size_t k = 0; k < layer.weights.size(); ++k)
                    layer.weights[k] -= cfg.learning_rate * g.weights[k];
                for (std::size_t k = 0; k < layer.biases.size(); ++k)
                    layer.biases[k] -= cfg.learning_rate * g.biases[k];
            }
        }

        EpochStats stats;
        stats.train_loss = train_loss_sum / static_cast<double>(order.size());
        stats.train_acc =
            static_cast<double>(train_correct) / static_cast<double>(order.size());
        detail::FoldEval ve = detail::evaluate_fold(model, ws, xs, ys, valid_idx, batch);
        stats.valid_loss = ve.loss;
        stats.valid_acc = ve.acc;
        if (!std::isfinite(stats.train_loss) || !std::isfinite(stats.valid_loss))
            throw NonFiniteLoss("training diverged at epoch " + std::to_string(epoch + 1),
                                epoch + 1);
        report.epochs.push_back(stats);
    }

    eval::ConfusionMatrix cm;
    for (std::size_t i : valid_idx) {
        auto [label, prob] = predict(model, xs[i]);
        (void)prob;
        cm.add(ys[i], label);
    }
    report.final_confusion = cm;
    report.final_metrics = eval::compute_metrics(cm);
    return {std::move(model), std::move(report)};
}

/// Stratified seeded split followed by mini-batch gradient descent.
inline std::pair<MlpModel, TrainReport> train(MlpModel model,
                                              const std::vector<std::vector<double>>& xs,
                                              const std::vector<int>& ys,
                                              const TrainConfig& cfg) {
    if (xs.size() != ys.size()) throw DimMismatch("sample/label count mismatch");
    auto [train_idx, valid_idx] = stratified_split_indices(ys, cfg.split_ratio, cfg.seed);
    return train_on_folds(std::move(model), xs, ys, train_idx, valid_idx, cfg);
}

// Model file: line 1 "MLP v1", line 2 dims, then per layer one line per
// weight row plus one bias line, and the activation list last. Doubles are
// written in shortest round-trip form, so save-load-save is a fixed point.
inline std::string save_model(const MlpModel& m) {
    std::string out = "MLP v1\n";
    for (std::size_t i = 0; i < m.dims.size(); ++i) {
        if (i) out.push_back(' ');
        out += std::to_string(m.dims[i]);
    }
    out.push_back('\n');
    for (const auto& layer : m.layers) {
        for (int o = 0; o < layer.out_dim; ++o) {
            for (int i = 0; i < layer.in_dim; ++i) {
                if (i) out.push_back(' ');
                out += detail::format_double(
                    layer.weights[static_cast<std::size_t>(o) * layer.in_dim +
                                  static_cast<std::size_t>(i)]);
            }
            out.push_back('\n');
        }
        for (int o = 0; o < layer.out_dim; ++o) {
            if (o) out.push_back(' ');
            out += detail::format_double(layer.biases[static_cast<std::size_t>(o)]);
        }
        out.push_back('\n');
    }
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        if (l) out.push_back(' ');
        out += (m.layers[l].activation == Activation::relu) ? "relu" : "softmax";
    }
    out.push_back('\n');
    return out;
}

namespace detail {

class LineTokens {
public:
    explicit LineTokens(std::string_view text) : text_(text) {}

    bool next_line(std::vector<std::string_view>& tokens) {
        tokens.clear();
        if (pos_ >= text_.size()) return false;
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        std::string_view line = text_.substr(pos_, end - pos_);
        pos_ = end + 1;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\r') ++i;
            if (i > start) tokens.push_back(line.substr(start, i - start));
        }
        return true;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

inline double parse_double_token(std::string_view tok) {
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ModelParseError("bad number: " + std::string(tok));
    if (!std::isfinite(v)) throw ModelParseError("non-finite parameter value");
    return v;
}

}  // namespace detail

inline MlpModel load_model(std::string_view text) {
    detail::LineTokens lines(text);
    std::vector<std::string_view> tok;
    if (!lines.next_line(tok) || tok.size() != 2 || tok[0] != "MLP" || tok[1] != "v1")
        throw ModelParseError("bad or missing MLP v1 header");
    if (!lines.next_line(tok) || tok.empty())
        throw ModelParseError("missing dims line");
    MlpModel m;
    for (auto t : tok) {
        int d = 0;
        auto res = std::from_chars(t.data(), t.data() + t.size(), d);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size() || d < 1)
            throw ModelParseError("bad dimension: " + std::string(t));
        m.dims.push_back(d);
    }
    if (m.dims.size() < 2) throw ModelParseError("need at least two dims");

    for (std::size_t j = 1; j < m.dims.size(); ++j) {
        LayerParams layer;
        layer.in_dim = m.dims[j - 1];
        layer.out_dim = m.dims[j];
        layer.weights.reserve(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
        for (int o = 0; o < layer.out_dim; ++o) {
            if (!lines.next_line(tok) || static_cast<int>(tok.size()) != layer.in_dim)
                throw ModelParseError("weight row shape mismatch");
            for (auto t : tok) layer.weights.push_back(detail::parse_double_token(t));
        }
        if (!lines.next_line(tok) || static_cast<int>(tok.size()) != layer.out_dim)
            throw ModelParseError("bias row shape mismatch");
        layer.biases.clear();
        for (auto t : tok) layer.biases.push_back(detail::parse_double_token(t));
        m.layers.push_back(std::move(layer));
    }

    if (!lines.next_line(tok) || tok.size() != m.layers.size())
        throw ModelParseError("activation list shape mismatch");
    for (std::size_t l = 0; l < tok.size(); ++l) {
        bool last = (l + 1 == tok.size());
        if (tok[l] == "relu" && !last)
            m.layers[l].activation = Activation::relu;
        else if (tok[l] == "softmax" && last)
            m.layers[l].activation = Activation::softmax;
        else
            throw ModelParseError("activation list must be relu* softmax");
    }
    while (lines.next_line(tok))
        if (!tok.empty()) throw ModelParseError("trailing content after model");
    return m;
}

/// Fig. 2 stack: hidden widths 250/200/150/100 feeding a 2-way softmax.
inline std::vector<int> paper_dims(int input_width) {
    return {input_width, 250, 200, 150, 100, 2};
}

}  // namespace amdet::dnn

#endif  // AMDET_MLP_HPP
