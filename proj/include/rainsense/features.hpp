//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_FEATURES_HPP
#define RAINSENSE_FEATURES_HPP

#include "rainsense/records.hpp"

#include <span>
#include <string>
#include <vector>

namespace rainsense {

enum class Metric { rsrp = 0, sinr = 1, rssi = 2 };

std::string to_string(Metric metric);

// Shared histogram layout for one dataset: k equal-width bins per metric over
// the dataset-global integer [min, max]. The last bin is closed, interior bin
// boundaries are half-open, matching the label binning convention.
struct HistogramSpec {
    int k = 5;
    int min_val[3] = {0, 0, 0}; // indexed by Metric
    int max_val[3] = {0, 0, 0};
};

// Scans the dataset for per-metric global min/max. Throws on empty input and
// on a degenerate (min == max) metric range, with guidance to widen the data.
HistogramSpec fit_histogram_spec(std::span<const LteRecord> records, int k = 5);

// Per-bin relative frequencies (sums to 1 for nonempty input). Throws when a
// value falls outside the spec's range for the metric, naming the value.
std::vector<double> estimate_pdf(std::span<const int> values,
                                 const HistogramSpec& spec,
                                 Metric metric);

// Node feature vector [pdf(RSRP) | pdf(SINR) | pdf(RSSI) | POU], length
// 3k + 1. A node with no records is all-zero and flagged invalid.
struct NodeFeatures {
    std::vector<double> values;
    bool valid = false;
};

NodeFeatures node_features(std::span<const LteRecord> cluster_records, const HistogramSpec& spec);

// CSV export, one row per node: station,window_start,valid,then the 3k+1
// feature columns (rsrp_pdf_0.., sinr_pdf_0.., rssi_pdf_0.., pou).
void write_features_csv(const std::vector<NodeFeatures>& rows,
                        const std::vector<std::size_t>& station_ids,
                        const std::vector<std::int64_t>& window_starts,
                        int k,
                        const std::string& path);

} // namespace rainsense

#endif // RAINSENSE_FEATURES_HPP
