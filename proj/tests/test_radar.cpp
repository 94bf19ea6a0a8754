//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rainsense/radar.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace rainsense;

namespace {

RadarGrid make_grid(std::size_t rows, std::size_t cols) {
    RadarGrid grid;
    grid.origin = {40.0, 116.0};
    grid.cell_size_lat_deg = 0.01;
    grid.cell_size_lon_deg = 0.02;
    grid.rows = rows;
    grid.cols = cols;
    grid.values.resize(rows * cols);
    grid.window_start = 1767225600;
    return grid;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("interpolation returns the value at a cell center") {
    auto grid = make_grid(4, 4);
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        grid.values[i] = static_cast<double>(i);
    }
    const GeoPoint center{grid.origin.lat + 2 * grid.cell_size_lat_deg,
                          grid.origin.lon + 3 * grid.cell_size_lon_deg};
    CHECK(interpolate_rain(grid, center) == doctest::Approx(grid.at(2, 3)).epsilon(1e-12));
}

TEST_CASE("interpolation at the midpoint of two adjacent centers is the mean") {
    auto grid = make_grid(3, 3);
    grid.values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0};
    const GeoPoint mid{grid.origin.lat, grid.origin.lon + 0.5 * grid.cell_size_lon_deg};
    CHECK(interpolate_rain(grid, mid) == doctest::Approx(1.5).epsilon(1e-12));
    const GeoPoint mid2{grid.origin.lat + 0.5 * grid.cell_size_lat_deg, grid.origin.lon};
    CHECK(interpolate_rain(grid, mid2) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("interpolation reproduces a bilinear field exactly") {
    // Oracle: values sampled from a + b lat + c lon + d lat lon; bilinear
    // interpolation reconstructs such a field with no error.
    auto grid = make_grid(6, 7);
    const double a = 2.0, b = 30.0, c = -12.0, d = 5.0;
    auto field = [&](double lat, double lon) {
        const double u = lat - grid.origin.lat;
        const double v = lon - grid.origin.lon;
        return a + b * u + c * v + d * u * v + 10.0;
    };
    for (std::size_t i = 0; i < grid.rows; ++i) {
        for (std::size_t j = 0; j < grid.cols; ++j) {
            grid.values[i * grid.cols + j] =
                field(grid.origin.lat + static_cast<double>(i) * grid.cell_size_lat_deg,
                      grid.origin.lon + static_cast<double>(j) * grid.cell_size_lon_deg);
        }
    }
    Rng rng(3);
    for (int t = 0; t < 500; ++t) {
        const GeoPoint p{rng.uniform(grid.lat_min(), grid.lat_max()),
                         rng.uniform(grid.lon_min(), grid.lon_max())};
        CHECK(std::abs(interpolate_rain(grid, p) - field(p.lat, p.lon)) < 1e-9);
    }
}

TEST_CASE("interpolation stays within the surrounding cell range") {
    auto grid = make_grid(5, 5);
    Rng rng(5);
    for (auto& v : grid.values) {
        v = rng.uniform(0.0, 10.0);
    }
    for (int t = 0; t < 300; ++t) {
        const GeoPoint p{rng.uniform(grid.lat_min(), grid.lat_max()),
                         rng.uniform(grid.lon_min(), grid.lon_max())};
        const double v = interpolate_rain(grid, p);
        const double lo = *std::min_element(grid.values.begin(), grid.values.end());
        const double hi = *std::max_element(grid.values.begin(), grid.values.end());
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("interpolation rejects points outside the grid, naming both") {
    auto grid = make_grid(3, 3);
    try {
        interpolate_rain(grid, {50.0, 116.0});
        FAIL("expected out_of_range");
    } catch (const std::out_of_range& e) {
        const std::string msg = e.what();
        CHECK(msg.find("50") != std::string::npos);
        CHECK(msg.find("40") != std::string::npos);
    }
}

TEST_CASE("bin_label endpoints and monotonicity") {
    const LabelBinning b{0.0, 10.0, 10};
    CHECK(bin_label(b, 0.0) == 0);
    CHECK(bin_label(b, 10.0) == 9);
    int prev = 0;
    for (double v = 0.0; v <= 10.0; v += 0.01) {
        const int cls = bin_label(b, std::min(v, 10.0));
        CHECK(cls >= prev);
        prev = cls;
    }
    CHECK_THROWS(bin_label(b, -0.1));
    CHECK_THROWS(bin_label(b, 10.1));
}

TEST_CASE("bin_label histogram equals a brute-force re-binning oracle") {
    const LabelBinning b{0.0, 7.0, 10};
    Rng rng(9);
    std::vector<double> values;
    for (int i = 0; i < 5000; ++i) {
        values.push_back(rng.uniform(0.0, 7.0));
    }
    std::vector<int> hist(10, 0);
    for (const double v : values) {
        hist[static_cast<std::size_t>(bin_label(b, v))]++;
    }
    // Oracle: linear scan over explicit interval edges.
    std::vector<int> oracle(10, 0);
    for (const double v : values) {
        int cls = 9;
        for (int c = 0; c < 10; ++c) {
            const double hi = 0.0 + (7.0 - 0.0) * static_cast<double>(c + 1) / 10.0;
            if (v < hi) {
                cls = c;
                break;
            }
        }
        oracle[static_cast<std::size_t>(cls)]++;
    }
    CHECK(hist == oracle);
}

TEST_CASE("radar grid file round-trips") {
    auto grid = make_grid(4, 5);
    Rng rng(21);
    for (auto& v : grid.values) {
        v = rng.uniform(0.0, 3.0);
    }
    const std::string path = temp_path("rs_radar_roundtrip.json");
    write_radar_grid(grid, path);
    const RadarGrid back = read_radar_grid(path);
    CHECK(back.origin.lat == grid.origin.lat);
    CHECK(back.origin.lon == grid.origin.lon);
    CHECK(back.cell_size_lat_deg == grid.cell_size_lat_deg);
    CHECK(back.cell_size_lon_deg == grid.cell_size_lon_deg);
    CHECK(back.rows == grid.rows);
    CHECK(back.cols == grid.cols);
    CHECK(back.window_start == grid.window_start);
    CHECK(back.values == grid.values);

    // Writing the parsed grid again reproduces identical bytes.
    const std::string path2 = temp_path("rs_radar_roundtrip2.json");
    write_radar_grid(back, path2);
    CHECK(slurp(path) == slurp(path2));
    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("radar parser rejects negative values with the cell location") {
    const std::string path = temp_path("rs_radar_neg.json");
    {
        std::ofstream out(path);
        out << R"({"format":"radar-grid/1","origin":{"lat":40.0,"lon":116.0},
"cell_size_deg":{"lat":0.01,"lon":0.01},"rows":2,"cols":2,
"window_start":"2026-01-01T00:00:00Z","values":[0.0,1.0,-3.0,1.0]})";
    }
    try {
        read_radar_grid(path);
        FAIL("expected failure");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("(1, 0)") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("radar parser reports the line of a syntax error") {
    const std::string path = temp_path("rs_radar_syntax.json");
    {
        std::ofstream out(path);
        out << "{\n\"format\": \"radar-grid/1\",\n\"rows\": oops\n}\n";
    }
    try {
        read_radar_grid(path);
        FAIL("expected failure");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":3:") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("radar grid validation rejects NaN and size mismatches") {
    auto grid = make_grid(2, 2);
    grid.values = {0.0, 1.0, 2.0};
    CHECK_THROWS(validate_radar_grid(grid));
    grid.values = {0.0, 1.0, 2.0, std::nan("")};
    CHECK_THROWS(validate_radar_grid(grid));
}

TEST_CASE("ISO-8601 timestamps round-trip") {
    const std::string text = "2026-01-01T12:30:00Z";
    const std::int64_t t = parse_iso8601_utc(text);
    CHECK(format_iso8601_utc(t) == text);
    CHECK_THROWS(parse_iso8601_utc("2026-01-01 12:30:00"));
    CHECK(parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
}
