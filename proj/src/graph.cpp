//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/graph.hpp"

#include "rainsense/log.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace rainsense {

void validate_graph(const SensingGraph& graph) {
    if (graph.n < 2) {
        throw std::invalid_argument("SensingGraph: need at least 2 nodes");
    }
    if (graph.node_features.size() != graph.n * graph.feat_dim ||
        graph.edge_dist_km.size() != graph.n * graph.n ||
        graph.node_valid.size() != graph.n) {
        throw std::invalid_argument("SensingGraph: buffer sizes inconsistent with n");
    }
    for (std::size_t i = 0; i < graph.n; ++i) {
        if (graph.edge(i, i) != 0.0) {
            throw std::invalid_argument("SensingGraph: nonzero diagonal");
        }
        for (std::size_t j = 0; j < graph.n; ++j) {
            const double d = graph.edge(i, j);
            if (!std::isfinite(d) || d < 0.0) {
                throw std::invalid_argument("SensingGraph: bad edge weight");
            }
            if (d != graph.edge(j, i)) {
                throw std::invalid_argument("SensingGraph: edge matrix not symmetric");
            }
        }
    }
}

std::vector<SensingGraph> build_graphs(std::span<const GeoPoint> centers,
                                       const std::vector<std::vector<NodeFeatures>>& features_by_window,
                                       std::span<const RadarGrid> grids,
                                       std::size_t n,
                                       const LabelBinning& binning) {
    if (n < 2 || n > centers.size()) {
        throw std::invalid_argument("build_graphs: n must be in [2, station count]");
    }
    if (features_by_window.size() != grids.size()) {
        throw std::invalid_argument("build_graphs: features/grids window count mismatch");
    }
    validate_label_binning(binning);

    // Node sets and edge matrices do not depend on the window.
    std::vector<std::vector<std::size_t>> node_sets(centers.size());
    for (std::size_t a = 0; a < centers.size(); ++a) {
        node_sets[a].push_back(a);
        const auto neighbors = nearest_neighbors(centers, a, n - 1);
        node_sets[a].insert(node_sets[a].end(), neighbors.begin(), neighbors.end());
    }

    std::vector<SensingGraph> graphs;
    graphs.reserve(centers.size() * grids.size());
    std::size_t skipped = 0;
    for (std::size_t w = 0; w < grids.size(); ++w) {
        const auto& grid = grids[w];
        const auto& feats = features_by_window[w];
        if (feats.size() != centers.size()) {
            throw std::invalid_argument("build_graphs: feature row count mismatch in window " +
                                        std::to_string(w));
        }
        for (std::size_t a = 0; a < centers.size(); ++a) {
            const auto& nodes = node_sets[a];
            bool in_grid = true;
            double rain_sum = 0.0;
            for (const auto node : nodes) {
                if (!grid.contains(centers[node])) {
                    in_grid = false;
                    break;
                }
                rain_sum += interpolate_rain(grid, centers[node]);
            }
            if (!in_grid) {
                ++skipped;
                log_warn("build_graphs: anchor " + std::to_string(a) + " window " +
                         std::to_string(w) + " has a node outside the radar grid; skipped");
                continue;
            }

            SensingGraph g;
            g.n = n;
            g.feat_dim = feats[a].values.size();
            g.anchor_station = static_cast<std::uint32_t>(a);
            g.window_start = grid.window_start;
            g.label = bin_label(binning, rain_sum / static_cast<double>(n));
            g.node_features.resize(n * g.feat_dim);
            g.edge_dist_km.assign(n * n, 0.0);
            g.node_valid.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto& nf = feats[nodes[i]];
                if (nf.values.size() != g.feat_dim) {
                    throw std::invalid_argument("build_graphs: inconsistent feature dimension");
                }
                std::copy(nf.values.begin(), nf.values.end(),
                          g.node_features.begin() + static_cast<std::ptrdiff_t>(i * g.feat_dim));
                g.node_valid[i] = nf.valid ? 1 : 0;
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double d = haversine_km(centers[nodes[i]], centers[nodes[j]]);
                    g.edge_dist_km[i * n + j] = d;
                    g.edge_dist_km[j * n + i] = d;
                }
            }
            graphs.push_back(std::move(g));
        }
    }
    if (skipped > 0) {
        log_warn("build_graphs: skipped " + std::to_string(skipped) + " graphs");
    }
    return graphs;
}

std::string to_string(SplitMode mode) {
    return mode == SplitMode::unshuffled ? "unshuffled" : "shuffled";
}

SplitMode split_mode_from_string(const std::string& s) {
    if (s == "unshuffled") return SplitMode::unshuffled;
    if (s == "shuffled") return SplitMode::shuffled;
    throw std::invalid_argument("unknown split mode: " + s);
}

std::vector<std::size_t> DatasetSplit::fold_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> DatasetSplit::complement_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) {
            out.push_back(i);
        }
    }
    return out;
}

DatasetSplit make_splits(std::size_t graph_count, SplitMode mode, std::uint64_t seed, int folds) {
    if (folds < 2) {
        throw std::invalid_argument("make_splits: folds must be >= 2");
    }
    if (graph_count < static_cast<std::size_t>(folds)) {
        throw std::invalid_argument("make_splits: need at least " + std::to_string(folds) +
                                    " graphs, got " + std::to_string(graph_count));
    }

    std::vector<std::size_t> order(graph_count);
    std::iota(order.begin(), order.end(), 0);
    if (mode == SplitMode::shuffled) {
        Rng rng(derive_seed(seed, seed_tag::split_shuffle));
        for (std::size_t i = graph_count - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)));
            std::swap(order[i], order[j]);
        }
    }

    DatasetSplit split;
    split.fold_of.resize(graph_count);
    split.folds = folds;
    split.mode = mode;
    split.seed = seed;
    const std::size_t base = graph_count / static_cast<std::size_t>(folds);
    const std::size_t rem = graph_count % static_cast<std::size_t>(folds);
    std::size_t pos = 0;
    for (int f = 0; f < folds; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < rem ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) {
            split.fold_of[order[pos++]] = f;
        }
    }
    return split;
}

namespace {

constexpr char kGraphMagic[8] = {'R', 'S', 'G', 'R', 'A', 'P', 'H', '1'};
constexpr std::uint32_t kGraphVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value, const std::string& path) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) {
        throw std::runtime_error(path + ": truncated graph container");
    }
}

} // namespace

void write_graph_dataset(const GraphDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write graph container: " + path);
    }
    out.write(kGraphMagic, sizeof(kGraphMagic));
    write_pod(out, kGraphVersion);
    const std::uint32_t n = static_cast<std::uint32_t>(dataset.n);
    const std::uint32_t feat_dim =
        dataset.graphs.empty() ? 0 : static_cast<std::uint32_t>(dataset.graphs.front().feat_dim);
    write_pod(out, n);
    write_pod(out, feat_dim);
    write_pod(out, static_cast<std::int32_t>(dataset.k));
    write_pod(out, static_cast<std::int32_t>(dataset.classes));
    write_pod(out, static_cast<std::uint64_t>(dataset.graphs.size()));
    for (const auto& g : dataset.graphs) {
        if (g.n != dataset.n || g.feat_dim != feat_dim) {
            throw std::invalid_argument("write_graph_dataset: graph dims differ from header");
        }
        write_pod(out, g.window_start);
        write_pod(out, g.anchor_station);
        write_pod(out, static_cast<std::int32_t>(g.label));
        out.write(reinterpret_cast<const char*>(g.node_valid.data()),
                  static_cast<std::streamsize>(g.node_valid.size()));
        out.write(reinterpret_cast<const char*>(g.node_features.data()),
                  static_cast<std::streamsize>(g.node_features.size() * sizeof(double)));
        out.write(reinterpret_cast<const char*>(g.edge_dist_km.data()),
                  static_cast<std::streamsize>(g.edge_dist_km.size() * sizeof(double)));
    }
    if (!out) {
        throw std::runtime_error("failed while writing graph container: " + path);
    }
}

GraphDataset read_graph_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open graph container: " + path);
    }
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kGraphMagic, sizeof(magic)) != 0) {
        throw std::runtime_error(path + ": not a graph container (bad magic)");
    }
    std::uint32_t version = 0;
    read_pod(in, version, path);
    if (version != kGraphVersion) {
        throw std::runtime_error(path + ": unsupported container version " +
                                 std::to_string(version) + ", expected " +
                                 std::to_string(kGraphVersion));
    }
    std::uint32_t n = 0;
    std::uint32_t feat_dim = 0;
    std::int32_t k = 0;
    std::int32_t classes = 0;
    std::uint64_t count = 0;
    read_pod(in, n, path);
    read_pod(in, feat_dim, path);
    read_pod(in, k, path);
    read_pod(in, classes, path);
    read_pod(in, count, path);

    GraphDataset dataset;
    dataset.n = n;
    dataset.k = k;
    dataset.classes = classes;
    dataset.graphs.resize(count);
    for (auto& g : dataset.graphs) {
        g.n = n;
        g.feat_dim = feat_dim;
        read_pod(in, g.window_start, path);
        read_pod(in, g.anchor_station, path);
        std::int32_t label = 0;
        read_pod(in, label, path);
        g.label = label;
        g.node_valid.resize(n);
        in.read(reinterpret_cast<char*>(g.node_valid.data()), n);
        g.node_features.resize(static_cast<std::size_t>(n) * feat_dim);
        in.read(reinterpret_cast<char*>(g.node_features.data()),
                static_cast<std::streamsize>(g.node_features.size() * sizeof(double)));
        g.edge_dist_km.resize(static_cast<std::size_t>(n) * n);
        in.read(reinterpret_cast<char*>(g.edge_dist_km.data()),
                static_cast<std::streamsize>(g.edge_dist_km.size() * sizeof(double)));
        if (!in) {
            throw std::runtime_error(path + ": truncated graph container");
        }
    }
    return dataset;
}

} // namespace rainsense
