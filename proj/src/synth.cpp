//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/synth.hpp"

#include "rainsense/log.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rainsense {

namespace {

constexpr double kKmPerDegLat = 111.194926644558; // kEarthRadiusKm * pi / 180

double km_per_deg_lon(double lat_deg) {
    return kKmPerDegLat * std::cos(lat_deg * 0.017453292519943295);
}

int round_half_away(double x) {
    return static_cast<int>(std::llround(x));
}

} // namespace

void validate_synth_config(const SynthConfig& cfg) {
    if (cfg.m_stations == 0 || cfg.users_per_station == 0) {
        throw std::invalid_argument("SynthConfig: station and user counts must be positive");
    }
    if (cfg.class_count < 1) {
        throw std::invalid_argument("SynthConfig: class_count must be >= 1");
    }
    const auto r = static_cast<std::size_t>(cfg.class_count);
    if (cfg.class_shift_db.size() != r) {
        throw std::invalid_argument("SynthConfig: class_shift_db must have length r");
    }
    if (cfg.outdoor_prob.size() != r) {
        throw std::invalid_argument("SynthConfig: outdoor_prob must have length r");
    }
    for (std::size_t i = 0; i < r; ++i) {
        if (!std::isfinite(cfg.class_shift_db[i])) {
            throw std::invalid_argument("SynthConfig: non-finite class shift");
        }
        if (cfg.outdoor_prob[i] < 0.0 || cfg.outdoor_prob[i] > 1.0) {
            throw std::invalid_argument("SynthConfig: outdoor probability outside [0, 1]");
        }
        if (i > 0 && cfg.class_shift_db[i] < cfg.class_shift_db[i - 1]) {
            throw std::invalid_argument("SynthConfig: class_shift_db must be nondecreasing");
        }
        if (i > 0 && cfg.outdoor_prob[i] > cfg.outdoor_prob[i - 1]) {
            throw std::invalid_argument("SynthConfig: outdoor_prob must be nonincreasing");
        }
    }
    if (cfg.noise_sigma_db < 0.0 || cfg.station_bias_sigma_db < 0.0) {
        throw std::invalid_argument("SynthConfig: noise sigmas must be >= 0");
    }
    if (!(cfg.extent.lat_min < cfg.extent.lat_max) || !(cfg.extent.lon_min < cfg.extent.lon_max)) {
        throw std::invalid_argument("SynthConfig: degenerate extent");
    }
    if (cfg.nr5g_fraction < 0.0 || cfg.nr5g_fraction > 1.0) {
        throw std::invalid_argument("SynthConfig: nr5g_fraction outside [0, 1]");
    }
    if (cfg.resource_blocks < 1) {
        throw std::invalid_argument("SynthConfig: resource_blocks must be >= 1");
    }
    if (cfg.window_seconds < 1) {
        throw std::invalid_argument("SynthConfig: window_seconds must be >= 1");
    }
}

double rsrp_offset_db(int resource_blocks) {
    return 10.0 * std::log10(12.0 * static_cast<double>(resource_blocks));
}

std::vector<GeoPoint> station_layout(const SynthConfig& cfg) {
    validate_synth_config(cfg);
    Rng rng(derive_seed(cfg.seed, seed_tag::station_layout));
    std::vector<GeoPoint> stations(cfg.m_stations);
    for (auto& s : stations) {
        s.lat = rng.uniform(cfg.extent.lat_min, cfg.extent.lat_max);
        s.lon = rng.uniform(cfg.extent.lon_min, cfg.extent.lon_max);
    }
    return stations;
}

SynthResult synthesize_dataset(const SynthConfig& cfg,
                               const RadarGrid& rain_truth,
                               const LabelBinning& binning,
                               std::uint64_t first_record_id) {
    validate_synth_config(cfg);
    validate_radar_grid(rain_truth);
    validate_label_binning(binning);
    if (cfg.extent.lat_min < rain_truth.lat_min() || cfg.extent.lat_max > rain_truth.lat_max() ||
        cfg.extent.lon_min < rain_truth.lon_min() || cfg.extent.lon_max > rain_truth.lon_max()) {
        throw std::invalid_argument("synthesize_dataset: extent not covered by the radar grid");
    }

    const auto stations = station_layout(cfg);
    const double offset_db = rsrp_offset_db(cfg.resource_blocks);
    const auto wkey = static_cast<std::uint64_t>(rain_truth.window_start);

    SynthResult out;
    out.stations = stations;
    const std::size_t total = cfg.m_stations * cfg.users_per_station;
    out.records.reserve(total);
    out.truth_class.reserve(total);
    out.truth_station.reserve(total);

    std::uint64_t next_id = first_record_id;
    for (std::size_t s = 0; s < cfg.m_stations; ++s) {
        // One substream per (station, window) partition; partitions are
        // independent, so any evaluation order yields the same records.
        Rng rng(derive_seed(cfg.seed, seed_tag::user_scatter,
                            wkey * 1000003ULL + static_cast<std::uint64_t>(s)));
        const double bias_db =
            cfg.station_bias_sigma_db > 0.0
                ? Rng(derive_seed(cfg.seed, seed_tag::station_bias,
                                  wkey * 1000003ULL + static_cast<std::uint64_t>(s)))
                          .normal(0.0, cfg.station_bias_sigma_db)
                : 0.0;

        const GeoPoint& st = stations[s];
        const double lat_scale = cfg.scatter_sigma_km / kKmPerDegLat;
        const double lon_scale = cfg.scatter_sigma_km / km_per_deg_lon(st.lat);

        for (std::size_t u = 0; u < cfg.users_per_station; ++u) {
            GeoPoint loc;
            loc.lat = std::clamp(st.lat + rng.normal() * lat_scale, cfg.extent.lat_min,
                                 cfg.extent.lat_max);
            loc.lon = std::clamp(st.lon + rng.normal() * lon_scale, cfg.extent.lon_min,
                                 cfg.extent.lon_max);

            const double rain_mm = interpolate_rain(rain_truth, loc);
            // binning.r is at least 2 even for a single-class config.
            const int cls = std::min(bin_label(binning, rain_mm), cfg.class_count - 1);

            const double dist_km = std::max(haversine_km(st, loc), 0.01);
            const double decades = std::log10(dist_km / cfg.ref_distance_km);
            const double shift = cfg.class_shift_db[static_cast<std::size_t>(cls)];

            const double rssi_f = cfg.rssi_ref_dbm - 10.0 * cfg.path_loss_exponent * decades -
                                  shift + bias_db + rng.normal(0.0, cfg.noise_sigma_db);
            const double sinr_f = cfg.sinr_ref_db - cfg.sinr_distance_slope * decades - shift +
                                  bias_db + rng.normal(0.0, cfg.noise_sigma_db);

            LteRecord rec;
            rec.id = next_id++;
            rec.loc = loc;
            rec.rat = rng.uniform() < cfg.nr5g_fraction ? Rat::nr5g_sa : Rat::lte4g;
            rec.op = static_cast<Operator>(rng.uniform_int(0, 3));
            rec.rssi = round_half_away(rssi_f);
            rec.rsrp = std::clamp(round_half_away(rssi_f - offset_db), kRsrpMinDbm, kRsrpMaxDbm);
            if (rec.rssi < rec.rsrp) {
                rec.rssi = rec.rsrp;
            }
            rec.sinr = round_half_away(sinr_f);
            rec.outdoor = rng.bernoulli(cfg.outdoor_prob[static_cast<std::size_t>(cls)]);
            rec.timestamp =
                rain_truth.window_start + rng.uniform_int(0, cfg.window_seconds - 1);
            out.records.push_back(rec);
            out.truth_class.push_back(cls);
            out.truth_station.push_back(s);
        }
    }
    return out;
}

SynthResult synthesize_dataset(const SynthConfig& cfg, const RadarGrid& rain_truth) {
    validate_radar_grid(rain_truth);
    const auto [lo, hi] = std::minmax_element(rain_truth.values.begin(), rain_truth.values.end());
    LabelBinning binning{*lo, *hi, cfg.class_count};
    if (!(*lo < *hi)) {
        // Constant field: widen so a single class is still representable.
        binning = LabelBinning{*lo, *lo + 1.0, cfg.class_count};
    }
    if (cfg.class_count < 2) {
        binning.r = 2; // bin_label requires >= 2; all values fall in class 0
    }
    return synthesize_dataset(cfg, rain_truth, binning, 0);
}

Campaign generate_campaign(const CampaignConfig& cfg) {
    validate_synth_config(cfg.synth);
    if (cfg.windows == 0) {
        throw std::invalid_argument("CampaignConfig: windows must be >= 1");
    }
    if (cfg.grid_rows < 2 || cfg.grid_cols < 2) {
        throw std::invalid_argument("CampaignConfig: grid must be at least 2x2");
    }
    if (!(cfg.rain_max_mm > 0.0)) {
        throw std::invalid_argument("CampaignConfig: rain_max_mm must be positive");
    }
    if (cfg.ripple_frac < 0.0 || cfg.ripple_frac > 0.4) {
        throw std::invalid_argument("CampaignConfig: ripple_frac outside [0, 0.4]");
    }

    const auto& ext = cfg.synth.extent;
    const int r = cfg.synth.class_count;
    const double class_width = cfg.rain_max_mm / static_cast<double>(r);
    const double ripple = cfg.ripple_frac * class_width;

    Campaign campaign;
    campaign.grids.reserve(cfg.windows);
    for (std::size_t w = 0; w < cfg.windows; ++w) {
        RadarGrid grid;
        grid.origin = {ext.lat_min - cfg.grid_margin_deg, ext.lon_min - cfg.grid_margin_deg};
        grid.cell_size_lat_deg = (ext.lat_max - ext.lat_min + 2.0 * cfg.grid_margin_deg) /
                                 static_cast<double>(cfg.grid_rows - 1);
        grid.cell_size_lon_deg = (ext.lon_max - ext.lon_min + 2.0 * cfg.grid_margin_deg) /
                                 static_cast<double>(cfg.grid_cols - 1);
        grid.rows = cfg.grid_rows;
        grid.cols = cfg.grid_cols;
        grid.window_start = cfg.start_time + static_cast<std::int64_t>(w) *
                                                 cfg.synth.window_seconds;

        const int cls = static_cast<int>(w % static_cast<std::size_t>(r));
        const double level = (static_cast<double>(cls) + 0.5) * class_width;

        Rng rng(derive_seed(cfg.synth.seed, seed_tag::radar_field, w));
        const double phase_lat = rng.uniform(0.0, 6.283185307179586);
        const double phase_lon = rng.uniform(0.0, 6.283185307179586);

        grid.values.resize(grid.rows * grid.cols);
        for (std::size_t i = 0; i < grid.rows; ++i) {
            for (std::size_t j = 0; j < grid.cols; ++j) {
                const double a = 6.283185307179586 * static_cast<double>(i) /
                                     static_cast<double>(grid.rows) + phase_lat;
                const double b = 6.283185307179586 * static_cast<double>(j) /
                                     static_cast<double>(grid.cols) + phase_lon;
                grid.values[i * grid.cols + j] = level + ripple * std::sin(a) * std::cos(b);
            }
        }
        // Pin the window extremes so that a binning re-fitted from the grids
        // reproduces the intended class intervals exactly.
        grid.values.front() = level - ripple;
        grid.values.back() = level + ripple;
        validate_radar_grid(grid);
        campaign.grids.push_back(std::move(grid));
    }

    double vmin = campaign.grids.front().values.front();
    double vmax = vmin;
    for (const auto& grid : campaign.grids) {
        for (double v : grid.values) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    campaign.binning = LabelBinning{vmin, vmax, std::max(r, 2)};

    std::uint64_t next_id = 0;
    for (const auto& grid : campaign.grids) {
        SynthResult part = synthesize_dataset(cfg.synth, grid, campaign.binning, next_id);
        next_id += part.records.size();
        if (campaign.data.stations.empty()) {
            campaign.data.stations = part.stations;
        }
        campaign.data.records.insert(campaign.data.records.end(), part.records.begin(),
                                     part.records.end());
        campaign.data.truth_class.insert(campaign.data.truth_class.end(),
                                         part.truth_class.begin(), part.truth_class.end());
        campaign.data.truth_station.insert(campaign.data.truth_station.end(),
                                           part.truth_station.begin(),
                                           part.truth_station.end());
    }
    log_info("campaign: " + std::to_string(campaign.data.records.size()) + " records over " +
             std::to_string(cfg.windows) + " windows");
    return campaign;
}

void write_truth_csv(const SynthResult& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write truth CSV file: " + path);
    }
    out << "id,true_class,station\n";
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        out << data.records[i].id << ',' << data.truth_class[i] << ',' << data.truth_station[i]
            << "\n";
    }
}

std::vector<std::pair<std::uint64_t, int>> read_truth_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open truth CSV file: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("id,true_class", 0) != 0) {
        throw std::runtime_error(path + ": bad truth CSV header");
    }
    std::vector<std::pair<std::uint64_t, int>> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos) {
            throw std::runtime_error(path + ": malformed truth row: " + line);
        }
        const std::string id_text = line.substr(0, c1);
        const std::string cls_text =
            c2 == std::string::npos ? line.substr(c1 + 1) : line.substr(c1 + 1, c2 - c1 - 1);
        out.emplace_back(std::stoull(id_text), std::stoi(cls_text));
    }
    return out;
}

} // namespace rainsense
