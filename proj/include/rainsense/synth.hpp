//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_SYNTH_HPP
#define RAINSENSE_SYNTH_HPP

#include "rainsense/radar.hpp"
#include "rainsense/records.hpp"

#include <cstdint>
#include <vector>

namespace rainsense {

struct BoundingBox {
    double lat_min = 0.0;
    double lat_max = 0.0;
    double lon_min = 0.0;
    double lon_max = 0.0;
};

// Generator for calibrated synthetic measurement data. Records are produced
// per station and window: user positions scatter around the station, the
// base RSSI follows a log-distance path model, the local rainfall class
// subtracts its attenuation shift, a per-(station, window) bias models local
// disturbances such as antenna dampness, and zero-mean Gaussian noise is
// added before rounding to integers. The outdoor flag is Bernoulli with the
// class's outdoor probability.
struct SynthConfig {
    std::size_t m_stations = 100;
    std::size_t users_per_station = 60; // records per station per window
    int class_count = 10;               // rainfall classes r
    std::vector<double> class_shift_db; // length r, nondecreasing attenuation
    std::vector<double> outdoor_prob;   // length r, nonincreasing, in [0, 1]
    double noise_sigma_db = 2.0;
    std::uint64_t seed = 1;
    BoundingBox extent{40.35, 40.60, 115.75, 116.25};

    // Local-disturbance bias applied to all three signal metrics of one
    // station within one window (0 disables it).
    double station_bias_sigma_db = 0.0;
    double scatter_sigma_km = 0.4;  // user scatter around the station center
    double rssi_ref_dbm = -72.0;    // RSSI at the reference distance, no rain
    double ref_distance_km = 0.1;
    double path_loss_exponent = 3.0;
    int resource_blocks = 25;       // RSRP = RSSI - 10*log10(12 * blocks)
    double sinr_ref_db = 20.0;      // SINR at the reference distance
    double sinr_distance_slope = 8.0; // dB per decade of distance
    double nr5g_fraction = 0.0;     // share of records tagged 5G SA
    std::int64_t window_seconds = 1800;
};

void validate_synth_config(const SynthConfig& cfg);

// RSRP offset implied by the resource-block count.
double rsrp_offset_db(int resource_blocks);

struct SynthResult {
    std::vector<LteRecord> records;
    std::vector<int> truth_class;           // per record: generator class
    std::vector<std::size_t> truth_station; // per record: generating station
    std::vector<GeoPoint> stations;         // generator station layout
};

// Deterministic station layout for a config (uniform in the extent under the
// master seed). Shared by every window of a campaign.
std::vector<GeoPoint> station_layout(const SynthConfig& cfg);

// Generates one window of records against one rainfall grid. `binning`
// defines the class intervals (fit it over all grids of a campaign).
// `first_record_id` numbers the records. Throws when the extent is not
// covered by the grid.
SynthResult synthesize_dataset(const SynthConfig& cfg,
                               const RadarGrid& rain_truth,
                               const LabelBinning& binning,
                               std::uint64_t first_record_id = 0);

// Convenience overload: class intervals fit from the single grid's values.
SynthResult synthesize_dataset(const SynthConfig& cfg, const RadarGrid& rain_truth);

// Multi-window campaign: synthetic radar grids plus records for each window.
struct CampaignConfig {
    SynthConfig synth;
    std::size_t windows = 20;
    std::int64_t start_time = 1767225600; // 2026-01-01T00:00:00Z
    std::size_t grid_rows = 24;
    std::size_t grid_cols = 24;
    double grid_margin_deg = 0.05; // grid box inflates the extent by this
    double rain_max_mm = 10.0;     // top of the rainfall scale
    double ripple_frac = 0.1;      // spatial ripple, fraction of a class width
};

struct Campaign {
    std::vector<RadarGrid> grids;
    LabelBinning binning;
    SynthResult data;
};

// Window w carries rainfall level of class (w mod r), with a small smooth
// spatial ripple; grid extremes are pinned so that re-fitting the binning
// from the generated grids reproduces the generator classes exactly.
Campaign generate_campaign(const CampaignConfig& cfg);

// Truth sidecar CSV: id,true_class,station.
void write_truth_csv(const SynthResult& data, const std::string& path);
std::vector<std::pair<std::uint64_t, int>> read_truth_csv(const std::string& path);

} // namespace rainsense

#endif // RAINSENSE_SYNTH_HPP
