//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rainsense/graph.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

using namespace rainsense;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct TestWorld {
    std::vector<GeoPoint> centers;
    std::vector<std::vector<NodeFeatures>> features;
    std::vector<RadarGrid> grids;
    LabelBinning binning{0.0, 10.0, 5};
};

TestWorld make_world(std::size_t stations, std::size_t windows, std::uint64_t seed) {
    TestWorld world;
    Rng rng(seed);
    for (std::size_t s = 0; s < stations; ++s) {
        world.centers.push_back({rng.uniform(40.0, 40.4), rng.uniform(116.0, 116.5)});
    }
    world.features.resize(windows);
    for (std::size_t w = 0; w < windows; ++w) {
        world.features[w].resize(stations);
        for (std::size_t s = 0; s < stations; ++s) {
            NodeFeatures nf;
            nf.valid = true;
            nf.values.resize(7);
            for (auto& v : nf.values) {
                v = rng.uniform(0.0, 1.0);
            }
            world.features[w][s] = nf;
        }
        RadarGrid grid;
        grid.origin = {39.95, 115.95};
        grid.cell_size_lat_deg = 0.05;
        grid.cell_size_lon_deg = 0.06;
        grid.rows = 11;
        grid.cols = 11;
        grid.window_start = 1767225600 + static_cast<std::int64_t>(w) * 1800;
        grid.values.resize(grid.rows * grid.cols);
        for (auto& v : grid.values) {
            v = rng.uniform(0.0, 10.0);
        }
        world.grids.push_back(grid);
    }
    return world;
}

} // namespace

TEST_CASE("one graph per anchor per window") {
    const auto world = make_world(20, 3, 1);
    const auto graphs = build_graphs(world.centers, world.features, world.grids, 9, world.binning);
    CHECK(graphs.size() == 20 * 3);
    for (const auto& g : graphs) {
        CHECK(g.n == 9);
        CHECK(g.feat_dim == 7);
        validate_graph(g);
    }
}

TEST_CASE("n=2 yields a single off-diagonal distance pair") {
    const auto world = make_world(5, 1, 2);
    const auto graphs = build_graphs(world.centers, world.features, world.grids, 2, world.binning);
    REQUIRE(graphs.size() == 5);
    for (const auto& g : graphs) {
        CHECK(g.n == 2);
        CHECK(g.edge(0, 0) == 0.0);
        CHECK(g.edge(1, 1) == 0.0);
        CHECK(g.edge(0, 1) == g.edge(1, 0));
        CHECK(g.edge(0, 1) > 0.0);
    }
}

TEST_CASE("graph labels match an independent re-interpolation oracle") {
    const auto world = make_world(15, 2, 3);
    const std::size_t n = 4;
    const auto graphs = build_graphs(world.centers, world.features, world.grids, n, world.binning);
    for (const auto& g : graphs) {
        // Oracle: recompute the node set, re-interpolate, re-bin.
        const std::size_t anchor = g.anchor_station;
        std::vector<std::size_t> nodes{anchor};
        const auto nn = nearest_neighbors(world.centers, anchor, n - 1);
        nodes.insert(nodes.end(), nn.begin(), nn.end());
        const RadarGrid* grid = nullptr;
        for (const auto& candidate : world.grids) {
            if (candidate.window_start == g.window_start) {
                grid = &candidate;
            }
        }
        REQUIRE(grid != nullptr);
        double sum = 0.0;
        for (const auto node : nodes) {
            sum += interpolate_rain(*grid, world.centers[node]);
        }
        CHECK(g.label == bin_label(world.binning, sum / static_cast<double>(n)));
    }
}

TEST_CASE("graphs with nodes outside the grid are skipped") {
    auto world = make_world(6, 1, 4);
    world.centers.push_back({45.0, 130.0}); // far outside the grid
    for (auto& wf : world.features) {
        NodeFeatures nf;
        nf.valid = true;
        nf.values.assign(7, 0.1);
        wf.push_back(nf);
    }
    const auto graphs = build_graphs(world.centers, world.features, world.grids, 7, world.binning);
    // Every graph includes all 7 stations, one of which is out of the grid.
    CHECK(graphs.empty());
}

TEST_CASE("edge distances satisfy the triangle inequality") {
    const auto world = make_world(12, 1, 5);
    const auto graphs = build_graphs(world.centers, world.features, world.grids, 6, world.binning);
    for (const auto& g : graphs) {
        for (std::size_t i = 0; i < g.n; ++i) {
            for (std::size_t j = 0; j < g.n; ++j) {
                for (std::size_t l = 0; l < g.n; ++l) {
                    CHECK(g.edge(i, j) <= g.edge(i, l) + g.edge(l, j) + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("splits partition ten graphs into folds of two") {
    const auto split = make_splits(10, SplitMode::unshuffled, 1);
    std::vector<std::size_t> sizes(5, 0);
    for (const int f : split.fold_of) {
        sizes[static_cast<std::size_t>(f)]++;
    }
    for (const auto s : sizes) {
        CHECK(s == 2);
    }
}

TEST_CASE("unshuffled folds are contiguous time blocks") {
    const auto split = make_splits(23, SplitMode::unshuffled, 9);
    int prev = 0;
    for (const int f : split.fold_of) {
        CHECK(f >= prev); // fold ids never decrease along the time order
        prev = f;
    }
    // Sizes differ by at most one.
    std::vector<std::size_t> sizes(5, 0);
    for (const int f : split.fold_of) {
        sizes[static_cast<std::size_t>(f)]++;
    }
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*hi - *lo <= 1);
}

TEST_CASE("shuffled splits differ across seeds but keep fold sizes") {
    const auto a = make_splits(50, SplitMode::shuffled, 1);
    const auto b = make_splits(50, SplitMode::shuffled, 2);
    CHECK(a.fold_of != b.fold_of);
    const auto a2 = make_splits(50, SplitMode::shuffled, 1);
    CHECK(a.fold_of == a2.fold_of);
    std::vector<std::size_t> sizes(5, 0);
    for (const int f : a.fold_of) {
        sizes[static_cast<std::size_t>(f)]++;
    }
    for (const auto s : sizes) {
        CHECK(s == 10);
    }
}

TEST_CASE("fewer than five graphs cannot be split") {
    CHECK_THROWS(make_splits(4, SplitMode::shuffled, 1));
}

TEST_CASE("graph container round-trips bit-exactly") {
    const auto world = make_world(10, 2, 6);
    GraphDataset dataset;
    dataset.n = 5;
    dataset.k = 2;
    dataset.classes = 5;
    dataset.graphs = build_graphs(world.centers, world.features, world.grids, 5, world.binning);
    REQUIRE(!dataset.graphs.empty());

    const std::string p1 = temp_path("rs_graphs_a.bin");
    const std::string p2 = temp_path("rs_graphs_b.bin");
    write_graph_dataset(dataset, p1);
    const GraphDataset back = read_graph_dataset(p1);
    CHECK(back.n == dataset.n);
    CHECK(back.k == dataset.k);
    CHECK(back.classes == dataset.classes);
    REQUIRE(back.graphs.size() == dataset.graphs.size());
    for (std::size_t i = 0; i < back.graphs.size(); ++i) {
        CHECK(back.graphs[i].node_features == dataset.graphs[i].node_features);
        CHECK(back.graphs[i].edge_dist_km == dataset.graphs[i].edge_dist_km);
        CHECK(back.graphs[i].label == dataset.graphs[i].label);
        CHECK(back.graphs[i].anchor_station == dataset.graphs[i].anchor_station);
        CHECK(back.graphs[i].window_start == dataset.graphs[i].window_start);
        CHECK(back.graphs[i].node_valid == dataset.graphs[i].node_valid);
    }
    write_graph_dataset(back, p2);
    CHECK(slurp(p1) == slurp(p2));
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("container loading rejects truncation and bad magic") {
    const auto world = make_world(8, 1, 7);
    GraphDataset dataset;
    dataset.n = 4;
    dataset.k = 2;
    dataset.classes = 5;
    dataset.graphs = build_graphs(world.centers, world.features, world.grids, 4, world.binning);
    const std::string path = temp_path("rs_graphs_trunc.bin");
    write_graph_dataset(dataset, path);
    auto bytes = slurp(path);
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << bytes.substr(0, bytes.size() / 2);
    }
    CHECK_THROWS(read_graph_dataset(path));
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "NOTAMAGIC" << bytes;
    }
    CHECK_THROWS(read_graph_dataset(path));
    std::filesystem::remove(path);
}
