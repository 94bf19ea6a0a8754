//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rainsense {

namespace {

int metric_value(const LteRecord& rec, Metric metric) {
    switch (metric) {
    case Metric::rsrp: return rec.rsrp;
    case Metric::sinr: return rec.sinr;
    default: return rec.rssi;
    }
}

} // namespace

std::string to_string(Metric metric) {
    switch (metric) {
    case Metric::rsrp: return "rsrp";
    case Metric::sinr: return "sinr";
    default: return "rssi";
    }
}

HistogramSpec fit_histogram_spec(std::span<const LteRecord> records, int k) {
    if (records.empty()) {
        throw std::invalid_argument("fit_histogram_spec: empty record set");
    }
    if (k < 2) {
        throw std::invalid_argument("fit_histogram_spec: k must be >= 2");
    }
    HistogramSpec spec;
    spec.k = k;
    for (int m = 0; m < 3; ++m) {
        spec.min_val[m] = metric_value(records[0], static_cast<Metric>(m));
        spec.max_val[m] = spec.min_val[m];
    }
    for (const auto& rec : records) {
        for (int m = 0; m < 3; ++m) {
            const int v = metric_value(rec, static_cast<Metric>(m));
            spec.min_val[m] = std::min(spec.min_val[m], v);
            spec.max_val[m] = std::max(spec.max_val[m], v);
        }
    }
    for (int m = 0; m < 3; ++m) {
        if (spec.min_val[m] == spec.max_val[m]) {
            throw std::invalid_argument(
                "fit_histogram_spec: metric " + to_string(static_cast<Metric>(m)) +
                " has a degenerate range [" + std::to_string(spec.min_val[m]) + ", " +
                std::to_string(spec.max_val[m]) +
                "]; widen the dataset so the metric varies");
        }
    }
    return spec;
}

std::vector<double> estimate_pdf(std::span<const int> values,
                                 const HistogramSpec& spec,
                                 Metric metric) {
    const int mi = static_cast<int>(metric);
    const int lo = spec.min_val[mi];
    const int hi = spec.max_val[mi];
    std::vector<double> pdf(static_cast<std::size_t>(spec.k), 0.0);
    if (values.empty()) {
        return pdf;
    }
    const double span = static_cast<double>(hi - lo);
    for (const int v : values) {
        if (v < lo || v > hi) {
            throw std::out_of_range("estimate_pdf: " + to_string(metric) + " value " +
                                    std::to_string(v) + " outside [" + std::to_string(lo) +
                                    ", " + std::to_string(hi) + "]");
        }
        int bin = static_cast<int>(std::floor(static_cast<double>(spec.k) *
                                              static_cast<double>(v - lo) / span));
        bin = std::min(bin, spec.k - 1);
        pdf[static_cast<std::size_t>(bin)] += 1.0;
    }
    const double total = static_cast<double>(values.size());
    for (auto& p : pdf) {
        p /= total;
    }
    return pdf;
}

NodeFeatures node_features(std::span<const LteRecord> cluster_records,
                           const HistogramSpec& spec) {
    NodeFeatures out;
    out.values.assign(static_cast<std::size_t>(3 * spec.k + 1), 0.0);
    if (cluster_records.empty()) {
        out.valid = false;
        return out;
    }
    std::vector<int> values(cluster_records.size());
    for (int m = 0; m < 3; ++m) {
        const auto metric = static_cast<Metric>(m);
        for (std::size_t i = 0; i < cluster_records.size(); ++i) {
            values[i] = metric_value(cluster_records[i], metric);
        }
        const auto pdf = estimate_pdf(values, spec, metric);
        std::copy(pdf.begin(), pdf.end(),
                  out.values.begin() + static_cast<std::ptrdiff_t>(m * spec.k));
    }
    std::size_t outdoor = 0;
    for (const auto& rec : cluster_records) {
        outdoor += rec.outdoor ? 1 : 0;
    }
    out.values.back() = static_cast<double>(outdoor) / static_cast<double>(cluster_records.size());
    out.valid = true;
    return out;
}

void write_features_csv(const std::vector<NodeFeatures>& rows,
                        const std::vector<std::size_t>& station_ids,
                        const std::vector<std::int64_t>& window_starts,
                        int k,
                        const std::string& path) {
    if (rows.size() != station_ids.size() || rows.size() != window_starts.size()) {
        throw std::invalid_argument("write_features_csv: column length mismatch");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write features CSV file: " + path);
    }
    out << "station,window_start,valid";
    const char* metric_names[] = {"rsrp", "sinr", "rssi"};
    for (const auto* metric : metric_names) {
        for (int b = 0; b < k; ++b) {
            out << ',' << metric << "_pdf_" << b;
        }
    }
    out << ",pou\n";
    char buf[64];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << station_ids[i] << ',' << window_starts[i] << ',' << (rows[i].valid ? 1 : 0);
        for (const double v : rows[i].values) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ',' << buf;
        }
        out << "\n";
    }
}

} // namespace rainsense
