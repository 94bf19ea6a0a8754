//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_RAINNET_HPP
#define RAINSENSE_RAINNET_HPP

#include "rainsense/graph.hpp"
#include "rainsense/matrix.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rainsense {

// Graph classifier: three graph-convolution layers (symmetric-normalized
// weighted adjacency with self-loops, ReLU) followed by mean pooling over
// nodes and a linear head. Edge distances enter through a Gaussian kernel
// with bandwidth sigma_e_km.
struct LinearLayer {
    DenseMatrix w; // in x out
    std::vector<double> b;
};

struct RainNetModel {
    int k = 5;      // histogram bins per metric (metadata)
    int classes = 10;
    std::size_t in_dim = 16; // 3k+1, or 3k when POU is dropped
    std::size_t hidden = 64;
    double sigma_e_km = 1.0;
    LinearLayer conv1, conv2, conv3, head;
};

// Scaled uniform fan-in initialization (U[-1/sqrt(fan_in), 1/sqrt(fan_in)]),
// biases zero, deterministic under the seed.
RainNetModel init_model(int k, int classes, std::size_t in_dim, std::size_t hidden,
                        double sigma_e_km, std::uint64_t seed);

std::size_t parameter_count(const RainNetModel& model);

// A_w = exp(-d^2 / sigma_e^2) off-diagonal with unit self-loops, then
// D^{-1/2} A_w D^{-1/2}. Output is symmetric with spectral radius <= 1.
// Throws when sigma_e <= 0 or the input is not a valid distance matrix.
DenseMatrix normalized_adjacency(const DenseMatrix& edge_dist_km, double sigma_e_km);

// Scratch buffers reused across forward/backward calls.
struct RainNetWorkspace {
    DenseMatrix a_hat, x, ax, z1, h1, ah1, z2, h2, ah2, z3, h3;
    DenseMatrix dz, dh, dah;
    std::vector<double> pooled, logits, dlogits, dpooled;
};

// Logits for one graph. Throws on dimension mismatch naming the layer.
std::vector<double> forward(const RainNetModel& model, const SensingGraph& graph);

// Same, writing through the workspace; `a_hat` may be a cached adjacency for
// the graph (pass nullptr to compute it from the edge matrix).
void forward_ws(const RainNetModel& model, const SensingGraph& graph, const DenseMatrix* a_hat,
                RainNetWorkspace& ws);

struct ModelGrads {
    DenseMatrix w1, w2, w3, wh;
    std::vector<double> b1, b2, b3, bh;

    void resize_like(const RainNetModel& model);
    void zero();
};

// Mean cross-entropy over the batch plus gradients for every parameter.
// Throws on an empty batch or a label outside [0, classes).
double loss_and_grads(const RainNetModel& model, std::span<const SensingGraph> batch,
                      ModelGrads& grads);

// Cached-adjacency variant used by the training loop: batch graphs are
// dataset indices, a_hat_cache is indexed the same way.
double loss_and_grads_cached(const RainNetModel& model, std::span<const SensingGraph> graphs,
                             std::span<const std::size_t> batch_indices,
                             std::span<const DenseMatrix> a_hat_cache, ModelGrads& grads,
                             RainNetWorkspace& ws);

int predict(const RainNetModel& model, const SensingGraph& graph);

struct TrainConfig {
    int epochs = 150;
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::size_t batch_size = 32;
    std::uint64_t seed = 1;
};

void validate_train_config(const TrainConfig& cfg);

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double test_accuracy = 0.0;
};

// Momentum-SGD training on the given index split. Deterministic under the
// seed; aborts with diagnostics when the loss turns NaN. Returns per-epoch
// train loss and test accuracy (test accuracy is NaN when test_idx is
// empty).
std::vector<EpochMetrics> train(RainNetModel& model, std::span<const SensingGraph> graphs,
                                std::span<const std::size_t> train_idx,
                                std::span<const std::size_t> test_idx, const TrainConfig& cfg);

double accuracy(const RainNetModel& model, std::span<const SensingGraph> graphs,
                std::span<const std::size_t> indices);

// Median of the off-diagonal edge distances over the given graphs; the
// default bandwidth choice. Returns fallback when every distance is zero.
double median_edge_km(std::span<const SensingGraph> graphs, std::span<const std::size_t> indices,
                      double fallback = 1.0);

// Versioned binary model file; save -> load -> save reproduces identical
// bytes. load_model with expectations rejects mismatched k / class counts,
// naming expected and found values.
void save_model(const RainNetModel& model, const std::string& path);
RainNetModel load_model(const std::string& path);
RainNetModel load_model(const std::string& path, int expected_k, int expected_classes);

} // namespace rainsense

#endif // RAINSENSE_RAINNET_HPP
