//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/radar.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rainsense {

void validate_radar_grid(const RadarGrid& grid) {
    validate_geo_point(grid.origin);
    if (grid.rows == 0 || grid.cols == 0) {
        throw std::invalid_argument("RadarGrid: rows and cols must be positive");
    }
    if (!(grid.cell_size_lat_deg > 0.0) || !(grid.cell_size_lon_deg > 0.0)) {
        throw std::invalid_argument("RadarGrid: cell sizes must be positive");
    }
    if (grid.values.size() != grid.rows * grid.cols) {
        throw std::invalid_argument("RadarGrid: expected " +
                                    std::to_string(grid.rows * grid.cols) + " values, got " +
                                    std::to_string(grid.values.size()));
    }
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const double v = grid.values[i];
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("RadarGrid: bad value " + std::to_string(v) +
                                        " at cell (" + std::to_string(i / grid.cols) + ", " +
                                        std::to_string(i % grid.cols) + ")");
        }
    }
}

double interpolate_rain(const RadarGrid& grid, const GeoPoint& p) {
    if (!grid.contains(p)) {
        std::ostringstream os;
        os << "interpolate_rain: point (" << p.lat << ", " << p.lon << ") outside grid box lat ["
           << grid.lat_min() << ", " << grid.lat_max() << "] lon [" << grid.lon_min() << ", "
           << grid.lon_max() << "]";
        throw std::out_of_range(os.str());
    }
    // Fractional cell coordinates relative to cell centers.
    const double fr = (p.lat - grid.origin.lat) / grid.cell_size_lat_deg;
    const double fc = (p.lon - grid.origin.lon) / grid.cell_size_lon_deg;
    std::size_t r0 = std::min(static_cast<std::size_t>(fr), grid.rows > 1 ? grid.rows - 2 : 0);
    std::size_t c0 = std::min(static_cast<std::size_t>(fc), grid.cols > 1 ? grid.cols - 2 : 0);
    const std::size_t r1 = grid.rows > 1 ? r0 + 1 : r0;
    const std::size_t c1 = grid.cols > 1 ? c0 + 1 : c0;
    const double tr = grid.rows > 1 ? fr - static_cast<double>(r0) : 0.0;
    const double tc = grid.cols > 1 ? fc - static_cast<double>(c0) : 0.0;
    const double v00 = grid.at(r0, c0);
    const double v01 = grid.at(r0, c1);
    const double v10 = grid.at(r1, c0);
    const double v11 = grid.at(r1, c1);
    return (1.0 - tr) * ((1.0 - tc) * v00 + tc * v01) + tr * ((1.0 - tc) * v10 + tc * v11);
}

void validate_label_binning(const LabelBinning& b) {
    if (!(b.min_val < b.max_val)) {
        throw std::invalid_argument("LabelBinning: min_val must be < max_val");
    }
    if (b.r < 2) {
        throw std::invalid_argument("LabelBinning: class count must be >= 2");
    }
}

int bin_label(const LabelBinning& b, double v) {
    validate_label_binning(b);
    if (!(v >= b.min_val) || !(v <= b.max_val)) {
        throw std::out_of_range("bin_label: value " + std::to_string(v) + " outside [" +
                                std::to_string(b.min_val) + ", " + std::to_string(b.max_val) +
                                "]");
    }
    const double t = (v - b.min_val) / (b.max_val - b.min_val);
    const int cls = static_cast<int>(std::floor(static_cast<double>(b.r) * t));
    return std::min(cls, b.r - 1);
}

namespace {

// 1-based line number of a byte offset, for parser diagnostics.
std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return line;
}

} // namespace

RadarGrid read_radar_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open radar grid file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                                 ": " + e.what());
    }

    try {
        if (doc.at("format").get<std::string>() != "radar-grid/1") {
            throw std::runtime_error("unsupported format tag");
        }
        RadarGrid grid;
        grid.origin.lat = doc.at("origin").at("lat").get<double>();
        grid.origin.lon = doc.at("origin").at("lon").get<double>();
        grid.cell_size_lat_deg = doc.at("cell_size_deg").at("lat").get<double>();
        grid.cell_size_lon_deg = doc.at("cell_size_deg").at("lon").get<double>();
        grid.rows = doc.at("rows").get<std::size_t>();
        grid.cols = doc.at("cols").get<std::size_t>();
        grid.window_start = parse_iso8601_utc(doc.at("window_start").get<std::string>());
        const auto& vals = doc.at("values");
        if (!vals.is_array()) {
            throw std::runtime_error("values must be an array");
        }
        grid.values.reserve(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!vals[i].is_number()) {
                throw std::runtime_error("values[" + std::to_string(i) + "] is not a number");
            }
            grid.values.push_back(vals[i].get<double>());
        }
        validate_radar_grid(grid);
        return grid;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_radar_grid(const RadarGrid& grid, const std::string& path) {
    validate_radar_grid(grid);
    nlohmann::ordered_json doc;
    doc["format"] = "radar-grid/1";
    doc["origin"] = {{"lat", grid.origin.lat}, {"lon", grid.origin.lon}};
    doc["cell_size_deg"] = {{"lat", grid.cell_size_lat_deg}, {"lon", grid.cell_size_lon_deg}};
    doc["rows"] = grid.rows;
    doc["cols"] = grid.cols;
    doc["window_start"] = format_iso8601_utc(grid.window_start);
    doc["values"] = grid.values;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write radar grid file: " + path);
    }
    out << doc.dump(1) << "\n";
}

std::int64_t parse_iso8601_utc(const std::string& text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    char zone = '\0';
    const int got = std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &year, &month, &day,
                                &hour, &minute, &second, &zone);
    if (got != 7 || zone != 'Z') {
        throw std::invalid_argument("bad ISO-8601 UTC timestamp: " + text);
    }
    std::tm tm{};
    tm.tm_year = year - 1900;
    tm.tm_mon = month - 1;
    tm.tm_mday = day;
    tm.tm_hour = hour;
    tm.tm_min = minute;
    tm.tm_sec = second;
    const std::time_t t = timegm(&tm);
    if (t == static_cast<std::time_t>(-1)) {
        throw std::invalid_argument("unrepresentable timestamp: " + text);
    }
    return static_cast<std::int64_t>(t);
}

std::string format_iso8601_utc(std::int64_t unix_seconds) {
    std::time_t t = static_cast<std::time_t>(unix_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

} // namespace rainsense
