//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/rainnet.hpp"

#include "rainsense/log.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rainsense {

namespace {

void init_layer(LinearLayer& layer, std::size_t in, std::size_t out, Rng& rng) {
    layer.w.resize(in, out);
    layer.b.assign(out, 0.0);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (std::size_t i = 0; i < in; ++i) {
        for (std::size_t j = 0; j < out; ++j) {
            layer.w(i, j) = rng.uniform(-bound, bound);
        }
    }
}

DenseMatrix graph_adjacency(const SensingGraph& graph, double sigma_e_km) {
    DenseMatrix edge(graph.n, graph.n);
    std::copy(graph.edge_dist_km.begin(), graph.edge_dist_km.end(), edge.data());
    return normalized_adjacency(edge, sigma_e_km);
}

void require_dims(const RainNetModel& model, const SensingGraph& graph) {
    if (graph.feat_dim != model.in_dim) {
        throw std::invalid_argument("conv1: graph feature dimension " +
                                    std::to_string(graph.feat_dim) + " does not match model " +
                                    std::to_string(model.in_dim));
    }
    if (graph.n < 2) {
        throw std::invalid_argument("forward: graph has fewer than 2 nodes");
    }
}

double softmax_cross_entropy(std::span<const double> logits, int label,
                             std::span<double> dlogits) {
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < logits.size(); ++c) {
        dlogits[c] = std::exp(logits[c] - max_logit);
        sum += dlogits[c];
    }
    const double log_sum = std::log(sum) + max_logit;
    for (std::size_t c = 0; c < logits.size(); ++c) {
        dlogits[c] /= sum;
    }
    dlogits[static_cast<std::size_t>(label)] -= 1.0;
    return log_sum - logits[static_cast<std::size_t>(label)];
}

} // namespace

RainNetModel init_model(int k, int classes, std::size_t in_dim, std::size_t hidden,
                        double sigma_e_km, std::uint64_t seed) {
    if (classes < 2 || in_dim == 0 || hidden == 0) {
        throw std::invalid_argument("init_model: bad dimensions");
    }
    if (!(sigma_e_km > 0.0)) {
        throw std::invalid_argument("init_model: sigma_e must be positive");
    }
    RainNetModel model;
    model.k = k;
    model.classes = classes;
    model.in_dim = in_dim;
    model.hidden = hidden;
    model.sigma_e_km = sigma_e_km;
    Rng rng(derive_seed(seed, seed_tag::weight_init));
    init_layer(model.conv1, in_dim, hidden, rng);
    init_layer(model.conv2, hidden, hidden, rng);
    init_layer(model.conv3, hidden, hidden, rng);
    init_layer(model.head, hidden, static_cast<std::size_t>(classes), rng);
    return model;
}

std::size_t parameter_count(const RainNetModel& model) {
    return model.conv1.w.size() + model.conv1.b.size() + model.conv2.w.size() +
           model.conv2.b.size() + model.conv3.w.size() + model.conv3.b.size() +
           model.head.w.size() + model.head.b.size();
}

DenseMatrix normalized_adjacency(const DenseMatrix& edge_dist_km, double sigma_e_km) {
    if (!(sigma_e_km > 0.0)) {
        throw std::invalid_argument("normalized_adjacency: sigma_e must be positive");
    }
    const std::size_t n = edge_dist_km.rows();
    if (edge_dist_km.cols() != n || n == 0) {
        throw std::invalid_argument("normalized_adjacency: edge matrix must be square");
    }
    const double inv_sigma_sq = 1.0 / (sigma_e_km * sigma_e_km);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = 1.0; // self-loop
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = edge_dist_km(i, j);
            if (!std::isfinite(d) || d < 0.0 || d != edge_dist_km(j, i)) {
                throw std::invalid_argument("normalized_adjacency: invalid distance matrix");
            }
            const double w = std::exp(-d * d * inv_sigma_sq);
            a(i, j) = w;
            a(j, i) = w;
        }
        if (edge_dist_km(i, i) != 0.0) {
            throw std::invalid_argument("normalized_adjacency: nonzero diagonal");
        }
    }
    std::vector<double> inv_sqrt_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            deg += a(i, j);
        }
        inv_sqrt_deg[i] = 1.0 / std::sqrt(deg);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) *= inv_sqrt_deg[i] * inv_sqrt_deg[j];
        }
    }
    return a;
}

void forward_ws(const RainNetModel& model, const SensingGraph& graph, const DenseMatrix* a_hat,
                RainNetWorkspace& ws) {
    require_dims(model, graph);
    const std::size_t n = graph.n;

    if (a_hat == nullptr) {
        ws.a_hat = graph_adjacency(graph, model.sigma_e_km);
        a_hat = &ws.a_hat;
    }
    ws.x.resize(n, model.in_dim);
    std::copy(graph.node_features.begin(), graph.node_features.end(), ws.x.data());

    matmul(*a_hat, ws.x, ws.ax);
    matmul(ws.ax, model.conv1.w, ws.z1);
    add_row_bias(ws.z1, model.conv1.b);
    relu(ws.z1, ws.h1);

    matmul(*a_hat, ws.h1, ws.ah1);
    matmul(ws.ah1, model.conv2.w, ws.z2);
    add_row_bias(ws.z2, model.conv2.b);
    relu(ws.z2, ws.h2);

    matmul(*a_hat, ws.h2, ws.ah2);
    matmul(ws.ah2, model.conv3.w, ws.z3);
    add_row_bias(ws.z3, model.conv3.b);
    relu(ws.z3, ws.h3);

    ws.pooled.resize(model.hidden);
    column_means(ws.h3, ws.pooled);

    ws.logits.assign(static_cast<std::size_t>(model.classes), 0.0);
    for (std::size_t j = 0; j < model.hidden; ++j) {
        const double pj = ws.pooled[j];
        for (std::size_t c = 0; c < ws.logits.size(); ++c) {
            ws.logits[c] += pj * model.head.w(j, c);
        }
    }
    for (std::size_t c = 0; c < ws.logits.size(); ++c) {
        ws.logits[c] += model.head.b[c];
    }
}

std::vector<double> forward(const RainNetModel& model, const SensingGraph& graph) {
    RainNetWorkspace ws;
    forward_ws(model, graph, nullptr, ws);
    return ws.logits;
}

void ModelGrads::resize_like(const RainNetModel& model) {
    w1.resize(model.conv1.w.rows(), model.conv1.w.cols());
    w2.resize(model.conv2.w.rows(), model.conv2.w.cols());
    w3.resize(model.conv3.w.rows(), model.conv3.w.cols());
    wh.resize(model.head.w.rows(), model.head.w.cols());
    b1.assign(model.conv1.b.size(), 0.0);
    b2.assign(model.conv2.b.size(), 0.0);
    b3.assign(model.conv3.b.size(), 0.0);
    bh.assign(model.head.b.size(), 0.0);
}

void ModelGrads::zero() {
    w1.fill(0.0);
    w2.fill(0.0);
    w3.fill(0.0);
    wh.fill(0.0);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(b2.begin(), b2.end(), 0.0);
    std::fill(b3.begin(), b3.end(), 0.0);
    std::fill(bh.begin(), bh.end(), 0.0);
}

namespace {

void accumulate_tn(const DenseMatrix& a, const DenseMatrix& b, DenseMatrix& out) {
    // out += a^T * b, shapes fixed by the caller
    const std::size_t m = a.cols();
    const std::size_t k = a.rows();
    const std::size_t n = b.cols();
    const double* ap = a.data();
    const double* bp = b.data();
    double* cp = out.data();
    for (std::size_t p = 0; p < k; ++p) {
        const double* arow = ap + p * m;
        const double* brow = bp + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double av = arow[i];
            double* crow = cp + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += av * brow[j];
            }
        }
    }
}

void accumulate_column_sums(const DenseMatrix& m, std::vector<double>& out) {
    const double* p = m.data();
    for (std::size_t i = 0; i < m.rows(); ++i, p += m.cols()) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j] += p[j];
        }
    }
}

// Backward pass for one graph; forward tensors live in ws, dlogits already
// scaled by the batch weight.
void backward_ws(const RainNetModel& model, const DenseMatrix& a_hat, RainNetWorkspace& ws,
                 ModelGrads& grads) {
    const std::size_t n = ws.h3.rows();
    const std::size_t hidden = model.hidden;
    const std::size_t classes = static_cast<std::size_t>(model.classes);

    // Head: logits = pooled * Wh + bh
    ws.dpooled.assign(hidden, 0.0);
    for (std::size_t j = 0; j < hidden; ++j) {
        const double pj = ws.pooled[j];
        double acc = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            grads.wh(j, c) += pj * ws.dlogits[c];
            acc += model.head.w(j, c) * ws.dlogits[c];
        }
        ws.dpooled[j] = acc;
    }
    for (std::size_t c = 0; c < classes; ++c) {
        grads.bh[c] += ws.dlogits[c];
    }

    // Mean pool spreads the pooled gradient evenly over rows.
    ws.dh.resize(n, hidden);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < hidden; ++j) {
            ws.dh(i, j) = ws.dpooled[j] * inv_n;
        }
    }

    // Layer 3
    relu_backward_inplace(ws.dh, ws.z3);
    accumulate_tn(ws.ah2, ws.dh, grads.w3);
    accumulate_column_sums(ws.dh, grads.b3);
    matmul_nt(ws.dh, model.conv3.w, ws.dah);
    matmul(a_hat, ws.dah, ws.dh);

    // Layer 2
    relu_backward_inplace(ws.dh, ws.z2);
    accumulate_tn(ws.ah1, ws.dh, grads.w2);
    accumulate_column_sums(ws.dh, grads.b2);
    matmul_nt(ws.dh, model.conv2.w, ws.dah);
    matmul(a_hat, ws.dah, ws.dh);

    // Layer 1
    relu_backward_inplace(ws.dh, ws.z1);
    accumulate_tn(ws.ax, ws.dh, grads.w1);
    accumulate_column_sums(ws.dh, grads.b1);
}

} // namespace

double loss_and_grads_cached(const RainNetModel& model, std::span<const SensingGraph> graphs,
                             std::span<const std::size_t> batch_indices,
                             std::span<const DenseMatrix> a_hat_cache, ModelGrads& grads,
                             RainNetWorkspace& ws) {
    if (batch_indices.empty()) {
        throw std::invalid_argument("loss_and_grads: empty batch");
    }
    grads.zero();
    const double inv_batch = 1.0 / static_cast<double>(batch_indices.size());
    double loss = 0.0;
    ws.dlogits.assign(static_cast<std::size_t>(model.classes), 0.0);
    for (const std::size_t idx : batch_indices) {
        const SensingGraph& graph = graphs[idx];
        if (graph.label < 0 || graph.label >= model.classes) {
            throw std::invalid_argument("loss_and_grads: label " + std::to_string(graph.label) +
                                        " outside [0, " + std::to_string(model.classes) + ")");
        }
        const DenseMatrix* a_hat = nullptr;
        if (idx < a_hat_cache.size() && a_hat_cache[idx].rows() == graph.n) {
            a_hat = &a_hat_cache[idx];
        }
        forward_ws(model, graph, a_hat, ws);
        loss += inv_batch * softmax_cross_entropy(ws.logits, graph.label, ws.dlogits);
        for (auto& d : ws.dlogits) {
            d *= inv_batch;
        }
        backward_ws(model, a_hat != nullptr ? *a_hat : ws.a_hat, ws, grads);
    }
    return loss;
}

double loss_and_grads(const RainNetModel& model, std::span<const SensingGraph> batch,
                      ModelGrads& grads) {
    std::vector<std::size_t> indices(batch.size());
    std::iota(indices.begin(), indices.end(), 0);
    grads.resize_like(model);
    RainNetWorkspace ws;
    return loss_and_grads_cached(model, batch, indices, {}, grads, ws);
}

int predict(const RainNetModel& model, const SensingGraph& graph) {
    const auto logits = forward(model, graph);
    std::size_t best = 0;
    for (std::size_t c = 1; c < logits.size(); ++c) {
        if (logits[c] > logits[best]) {
            best = c;
        }
    }
    return static_cast<int>(best);
}

void validate_train_config(const TrainConfig& cfg) {
    if (cfg.epochs < 1) {
        throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    }
    if (!(cfg.learning_rate >= 0.0)) {
        throw std::invalid_argument("TrainConfig: learning rate must not be negative");
    }
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
        throw std::invalid_argument("TrainConfig: momentum must be in [0, 1)");
    }
    if (cfg.batch_size == 0) {
        throw std::invalid_argument("TrainConfig: batch size must be positive");
    }
}

double accuracy(const RainNetModel& model, std::span<const SensingGraph> graphs,
                std::span<const std::size_t> indices) {
    if (indices.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t hits = 0;
    RainNetWorkspace ws;
    for (const std::size_t idx : indices) {
        forward_ws(model, graphs[idx], nullptr, ws);
        std::size_t best = 0;
        for (std::size_t c = 1; c < ws.logits.size(); ++c) {
            if (ws.logits[c] > ws.logits[best]) {
                best = c;
            }
        }
        if (static_cast<int>(best) == graphs[idx].label) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(indices.size());
}

double median_edge_km(std::span<const SensingGraph> graphs, std::span<const std::size_t> indices,
                      double fallback) {
    std::vector<double> dists;
    for (const std::size_t idx : indices) {
        const auto& g = graphs[idx];
        for (std::size_t i = 0; i < g.n; ++i) {
            for (std::size_t j = i + 1; j < g.n; ++j) {
                dists.push_back(g.edge(i, j));
            }
        }
    }
    if (dists.empty()) {
        return fallback;
    }
    // Lower median.
    const std::size_t mid = (dists.size() - 1) / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
    const double med = dists[mid];
    return med > 0.0 ? med : fallback;
}

namespace {

struct Momentum {
    ModelGrads v;

    void init(const RainNetModel& model) { v.resize_like(model); }

    static void step_matrix(DenseMatrix& w, DenseMatrix& vel, const DenseMatrix& g, double lr,
                            double mu) {
        double* wp = w.data();
        double* vp = vel.data();
        const double* gp = g.data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            vp[i] = mu * vp[i] - lr * gp[i];
            wp[i] += vp[i];
        }
    }

    static void step_vector(std::vector<double>& b, std::vector<double>& vel,
                            const std::vector<double>& g, double lr, double mu) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            vel[i] = mu * vel[i] - lr * g[i];
            b[i] += vel[i];
        }
    }

    void apply(RainNetModel& model, const ModelGrads& g, double lr, double mu) {
        step_matrix(model.conv1.w, v.w1, g.w1, lr, mu);
        step_matrix(model.conv2.w, v.w2, g.w2, lr, mu);
        step_matrix(model.conv3.w, v.w3, g.w3, lr, mu);
        step_matrix(model.head.w, v.wh, g.wh, lr, mu);
        step_vector(model.conv1.b, v.b1, g.b1, lr, mu);
        step_vector(model.conv2.b, v.b2, g.b2, lr, mu);
        step_vector(model.conv3.b, v.b3, g.b3, lr, mu);
        step_vector(model.head.b, v.bh, g.bh, lr, mu);
    }
};

} // namespace

std::vector<EpochMetrics> train(RainNetModel& model, std::span<const SensingGraph> graphs,
                                std::span<const std::size_t> train_idx,
                                std::span<const std::size_t> test_idx, const TrainConfig& cfg) {
    validate_train_config(cfg);
    if (train_idx.empty()) {
        throw std::invalid_argument("train: empty training set");
    }

    std::set<int> seen;
    for (const auto idx : train_idx) {
        seen.insert(graphs[idx].label);
    }
    if (static_cast<int>(seen.size()) < model.classes) {
        log_warn("train: only " + std::to_string(seen.size()) + " of " +
                 std::to_string(model.classes) + " classes present in the training folds");
    }

    // Adjacencies are constant during training; cache them for every graph
    // this run touches.
    std::vector<DenseMatrix> a_hat_cache(graphs.size());
    for (const auto idx : train_idx) {
        a_hat_cache[idx] = graph_adjacency(graphs[idx], model.sigma_e_km);
    }
    for (const auto idx : test_idx) {
        if (a_hat_cache[idx].rows() == 0) {
            a_hat_cache[idx] = graph_adjacency(graphs[idx], model.sigma_e_km);
        }
    }

    ModelGrads grads;
    grads.resize_like(model);
    Momentum momentum;
    momentum.init(model);
    RainNetWorkspace ws;

    std::vector<std::size_t> order(train_idx.begin(), train_idx.end());
    std::vector<EpochMetrics> metrics;
    metrics.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng rng(derive_seed(cfg.seed, seed_tag::epoch_shuffle, static_cast<std::uint64_t>(epoch)));
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
            std::swap(order[i], order[j]);
        }

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - start);
            const std::span<const std::size_t> batch(order.data() + start, count);
            const double loss =
                loss_and_grads_cached(model, graphs, batch, a_hat_cache, grads, ws);
            if (!std::isfinite(loss)) {
                throw std::runtime_error("train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch offset " +
                                         std::to_string(start) +
                                         "; lower the learning rate or check the features");
            }
            momentum.apply(model, grads, cfg.learning_rate, cfg.momentum);
            epoch_loss += loss * static_cast<double>(count);
        }
        epoch_loss /= static_cast<double>(order.size());

        double test_acc = std::numeric_limits<double>::quiet_NaN();
        if (!test_idx.empty()) {
            std::size_t hits = 0;
            for (const auto idx : test_idx) {
                forward_ws(model, graphs[idx], &a_hat_cache[idx], ws);
                std::size_t best = 0;
                for (std::size_t c = 1; c < ws.logits.size(); ++c) {
                    if (ws.logits[c] > ws.logits[best]) {
                        best = c;
                    }
                }
                if (static_cast<int>(best) == graphs[idx].label) {
                    ++hits;
                }
            }
            test_acc = static_cast<double>(hits) / static_cast<double>(test_idx.size());
        }
        metrics.push_back({epoch, epoch_loss, test_acc});
    }
    return metrics;
}

namespace {

constexpr char kModelMagic[8] = {'R', 'S', 'M', 'O', 'D', 'E', 'L', '1'};
constexpr std::uint32_t kModelVersion = 1;

void write_layer(std::ofstream& out, const LinearLayer& layer) {
    out.write(reinterpret_cast<const char*>(layer.w.data()),
              static_cast<std::streamsize>(layer.w.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(layer.b.data()),
              static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
}

void read_layer(std::ifstream& in, LinearLayer& layer, std::size_t rows, std::size_t cols,
                const std::string& path) {
    layer.w.resize(rows, cols);
    layer.b.assign(cols, 0.0);
    in.read(reinterpret_cast<char*>(layer.w.data()),
            static_cast<std::streamsize>(layer.w.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(layer.b.data()),
            static_cast<std::streamsize>(layer.b.size() * sizeof(double)));
    if (!in) {
        throw std::runtime_error(path + ": truncated model file");
    }
}

} // namespace

void save_model(const RainNetModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write model file: " + path);
    }
    out.write(kModelMagic, sizeof(kModelMagic));
    const std::uint32_t version = kModelVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    const std::int32_t k = model.k;
    const std::int32_t classes = model.classes;
    const std::uint32_t in_dim = static_cast<std::uint32_t>(model.in_dim);
    const std::uint32_t hidden = static_cast<std::uint32_t>(model.hidden);
    out.write(reinterpret_cast<const char*>(&k), sizeof(k));
    out.write(reinterpret_cast<const char*>(&classes), sizeof(classes));
    out.write(reinterpret_cast<const char*>(&in_dim), sizeof(in_dim));
    out.write(reinterpret_cast<const char*>(&hidden), sizeof(hidden));
    out.write(reinterpret_cast<const char*>(&model.sigma_e_km), sizeof(model.sigma_e_km));
    write_layer(out, model.conv1);
    write_layer(out, model.conv2);
    write_layer(out, model.conv3);
    write_layer(out, model.head);
    if (!out) {
        throw std::runtime_error("failed while writing model file: " + path);
    }
}

RainNetModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open model file: " + path);
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
        throw std::runtime_error(path + ": not a model file (bad magic)");
    }
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (!in || version != kModelVersion) {
        throw std::runtime_error(path + ": unsupported model version " + std::to_string(version) +
                                 ", expected " + std::to_string(kModelVersion));
    }
    std::int32_t k = 0;
    std::int32_t classes = 0;
    std::uint32_t in_dim = 0;
    std::uint32_t hidden = 0;
    RainNetModel model;
    in.read(reinterpret_cast<char*>(&k), sizeof(k));
    in.read(reinterpret_cast<char*>(&classes), sizeof(classes));
    in.read(reinterpret_cast<char*>(&in_dim), sizeof(in_dim));
    in.read(reinterpret_cast<char*>(&hidden), sizeof(hidden));
    in.read(reinterpret_cast<char*>(&model.sigma_e_km), sizeof(model.sigma_e_km));
    if (!in) {
        throw std::runtime_error(path + ": truncated model header");
    }
    model.k = k;
    model.classes = classes;
    model.in_dim = in_dim;
    model.hidden = hidden;
    read_layer(in, model.conv1, model.in_dim, model.hidden, path);
    read_layer(in, model.conv2, model.hidden, model.hidden, path);
    read_layer(in, model.conv3, model.hidden, model.hidden, path);
    read_layer(in, model.head, model.hidden, static_cast<std::size_t>(model.classes), path);
    return model;
}

RainNetModel load_model(const std::string& path, int expected_k, int expected_classes) {
    RainNetModel model = load_model(path);
    if (model.k != expected_k) {
        throw std::runtime_error(path + ": model k mismatch: expected " +
                                 std::to_string(expected_k) + ", found " +
                                 std::to_string(model.k));
    }
    if (model.classes != expected_classes) {
        throw std::runtime_error(path + ": model class count mismatch: expected " +
                                 std::to_string(expected_classes) + ", found " +
                                 std::to_string(model.classes));
    }
    return model;
}

} // namespace rainsense
