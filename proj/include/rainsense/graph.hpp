//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_GRAPH_HPP
#define RAINSENSE_GRAPH_HPP

#include "rainsense/features.hpp"
#include "rainsense/geo.hpp"
#include "rainsense/radar.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rainsense {

// Undirected complete graph over n neighboring stations for one time window.
// Node features are the 3k+1 histogram vectors, edge weights the pairwise
// station distances in km, the label the binned mean rainfall at the node
// centers.
struct SensingGraph {
    std::size_t n = 0;
    std::size_t feat_dim = 0;
    std::vector<double> node_features; // n x feat_dim, row-major
    std::vector<double> edge_dist_km;  // n x n, symmetric, zero diagonal
    std::vector<std::uint8_t> node_valid;
    int label = 0;
    std::uint32_t anchor_station = 0;
    std::int64_t window_start = 0;

    double feature(std::size_t node, std::size_t j) const {
        return node_features[node * feat_dim + j];
    }
    double edge(std::size_t i, std::size_t j) const { return edge_dist_km[i * n + j]; }
};

// Throws std::invalid_argument when structural invariants are violated
// (symmetry, zero diagonal, nonnegativity, n >= 2, size mismatches).
void validate_graph(const SensingGraph& graph);

// One graph per (anchor station, window): the anchor plus its n-1 nearest
// stations. features_by_window[w][s] holds station s's features in window w,
// parallel to grids. Anchors whose node set leaves the radar grid are
// skipped with a logged reason.
std::vector<SensingGraph> build_graphs(std::span<const GeoPoint> centers,
                                       const std::vector<std::vector<NodeFeatures>>& features_by_window,
                                       std::span<const RadarGrid> grids,
                                       std::size_t n,
                                       const LabelBinning& binning);

enum class SplitMode { unshuffled, shuffled };

std::string to_string(SplitMode mode);
SplitMode split_mode_from_string(const std::string& s);

// Five-fold partition. Unshuffled keeps the dataset's time order and cuts
// contiguous blocks; shuffled cuts blocks of a seeded permutation. Fold
// sizes differ by at most one.
struct DatasetSplit {
    std::vector<int> fold_of; // per graph, in [0, folds)
    int folds = 5;
    SplitMode mode = SplitMode::unshuffled;
    std::uint64_t seed = 0;

    std::vector<std::size_t> fold_indices(int fold) const;
    std::vector<std::size_t> complement_indices(int fold) const;
};

DatasetSplit make_splits(std::size_t graph_count, SplitMode mode, std::uint64_t seed,
                         int folds = 5);

// Graph container file: versioned binary with a fixed little-endian layout;
// round-trips bit-exactly.
struct GraphDataset {
    std::size_t n = 0;
    int k = 5;
    int classes = 10;
    std::vector<SensingGraph> graphs;
};

void write_graph_dataset(const GraphDataset& dataset, const std::string& path);
GraphDataset read_graph_dataset(const std::string& path);

} // namespace rainsense

#endif // RAINSENSE_GRAPH_HPP
