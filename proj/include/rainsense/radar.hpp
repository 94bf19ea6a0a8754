//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_RADAR_HPP
#define RAINSENSE_RADAR_HPP

#include "rainsense/geo.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rainsense {

// Gridded rainfall field for one half-hour window. `origin` is the center of
// cell (0, 0); cell (r, c) is centered at origin + (r * cell_size_lat_deg,
// c * cell_size_lon_deg). Values are mm of rain per window, row-major.
struct RadarGrid {
    GeoPoint origin;
    double cell_size_lat_deg = 0.0;
    double cell_size_lon_deg = 0.0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::int64_t window_start = 0; // Unix seconds, UTC

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }

    // Bounding box of the cell centers: queries are valid inside it.
    double lat_min() const { return origin.lat; }
    double lat_max() const { return origin.lat + cell_size_lat_deg * static_cast<double>(rows - 1); }
    double lon_min() const { return origin.lon; }
    double lon_max() const { return origin.lon + cell_size_lon_deg * static_cast<double>(cols - 1); }

    bool contains(const GeoPoint& p) const {
        return p.lat >= lat_min() && p.lat <= lat_max() && p.lon >= lon_min() && p.lon <= lon_max();
    }
};

// Throws std::invalid_argument when dimensions, cell sizes, or values break
// the grid invariants (values finite and >= 0, length rows*cols).
void validate_radar_grid(const RadarGrid& grid);

// Bilinear interpolation between the four surrounding cell centers. A query
// exactly on a cell center returns that cell's value. Throws
// std::out_of_range when p is outside the cell-center bounding box.
double interpolate_rain(const RadarGrid& grid, const GeoPoint& p);

// Equal-interval rainfall classes over [min_val, max_val].
struct LabelBinning {
    double min_val = 0.0;
    double max_val = 0.0;
    int r = 2; // class count >= 2
};

void validate_label_binning(const LabelBinning& b);

// Class index floor(r * (v - min) / (max - min)); the last interval is closed
// so v == max_val maps to r - 1. Throws std::out_of_range for v outside
// [min_val, max_val].
int bin_label(const LabelBinning& b, double v);

// JSON radar-grid file format (see README). Parse errors carry the 1-based
// line for syntax problems and the cell coordinates for bad values.
RadarGrid read_radar_grid(const std::string& path);
void write_radar_grid(const RadarGrid& grid, const std::string& path);

// ISO-8601 UTC timestamps ("2026-01-01T00:30:00Z") <-> Unix seconds.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t unix_seconds);

} // namespace rainsense

#endif // RAINSENSE_RADAR_HPP
