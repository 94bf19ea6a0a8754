//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/pipeline.hpp"

#include "rainsense/log.hpp"
#include "rainsense/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace rainsense {

const char* to_string(ErrorClass cls) {
    switch (cls) {
    case ErrorClass::bad_config: return "bad-config";
    case ErrorClass::missing_input: return "missing-input";
    case ErrorClass::bad_input: return "bad-input";
    default: return "infeasible";
    }
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

void check_known_keys(const json& obj, const std::set<std::string>& known,
                      const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (known.find(key) == known.end()) {
            throw StageError(ErrorClass::bad_config,
                             "unknown config key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void opt(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) {
        target = obj.at(key).get<T>();
    }
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_file(const std::string& path) {
    if (!fs::exists(path)) {
        throw StageError(ErrorClass::missing_input, "input not found: " + path);
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

void echo_config(const RunConfig& cfg, const std::string& out_dir) {
    write_text_file(out_dir + "/resolved_config.json", config_echo_json(cfg));
}

} // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.campaign.synth.users_per_station = 80;
    cfg.campaign.synth.class_shift_db = linspace(0.0, 8.45, 10);
    cfg.campaign.synth.outdoor_prob = linspace(0.95, 0.05, 10);
    cfg.campaign.synth.station_bias_sigma_db = 1.0;
    cfg.ablate.windows = 20;
    cfg.ablate.users_per_station = 40;
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    try {
        validate_synth_config(cfg.campaign.synth);
        validate_energy_config(cfg.energy);
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::bad_config, e.what());
    }
    if (cfg.features.k < 2) {
        throw StageError(ErrorClass::bad_config, "features.k must be >= 2");
    }
    if (cfg.graph.n < 2) {
        throw StageError(ErrorClass::bad_config, "graph.n must be >= 2");
    }
    if (cfg.graph.n > cfg.campaign.synth.m_stations) {
        throw StageError(ErrorClass::bad_config, "graph.n exceeds the station count");
    }
    if (cfg.train.epochs < 1 || !(cfg.train.learning_rate > 0.0) || cfg.train.batch_size == 0) {
        throw StageError(ErrorClass::bad_config, "bad train section");
    }
    if (cfg.train.mode != "shuffled" && cfg.train.mode != "unshuffled") {
        throw StageError(ErrorClass::bad_config, "train.mode must be shuffled or unshuffled");
    }
    for (const auto& mode : cfg.eval.modes) {
        if (mode != "shuffled" && mode != "unshuffled") {
            throw StageError(ErrorClass::bad_config, "eval.modes entries must be shuffled or "
                                                     "unshuffled");
        }
    }
    if (cfg.ablate.n_min < 2 || cfg.ablate.n_min > cfg.ablate.n_max ||
        cfg.ablate.n_max > cfg.ablate.stations || cfg.ablate.repetitions == 0) {
        throw StageError(ErrorClass::bad_config, "bad ablate section");
    }
    if (cfg.ablate.pou_high < cfg.ablate.pou_low || cfg.ablate.pou_high > 1.0 ||
        cfg.ablate.pou_low < 0.0) {
        throw StageError(ErrorClass::bad_config, "ablate POU range must satisfy 0 <= low <= "
                                                 "high <= 1");
    }
    if (cfg.energy_sweep.pr_rain_steps < 2) {
        throw StageError(ErrorClass::bad_config, "energy.pr_rain_steps must be >= 2");
    }
    if (!(cfg.water.freq_min_ghz > 0.1) || !(cfg.water.freq_max_ghz > cfg.water.freq_min_ghz) ||
        cfg.water.freq_max_ghz > 100.0 || cfg.water.freq_steps < 2) {
        throw StageError(ErrorClass::bad_config, "bad water section");
    }
    if (cfg.campaign.windows == 0) {
        throw StageError(ErrorClass::bad_config, "synth.windows must be >= 1");
    }
}

RunConfig config_from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw StageError(ErrorClass::bad_config, origin + ": " + e.what());
    }
    RunConfig cfg = default_config();
    try {
        check_known_keys(doc, {"seed", "synth", "features", "graph", "train", "eval", "ablate",
                               "energy", "water"},
                         origin);
        opt(doc, "seed", cfg.seed);
        cfg.campaign.synth.seed = cfg.seed;
        cfg.energy.seed = cfg.seed;

        if (doc.contains("synth")) {
            const auto& s = doc.at("synth");
            check_known_keys(
                s,
                {"stations", "users_per_station", "classes", "windows", "window_seconds",
                 "noise_sigma_db", "station_bias_sigma_db", "shift_span_db", "class_shift_db",
                 "outdoor_prob_high", "outdoor_prob_low", "outdoor_prob", "extent",
                 "scatter_sigma_km", "rssi_ref_dbm", "ref_distance_km", "path_loss_exponent",
                 "resource_blocks", "sinr_ref_db", "sinr_distance_slope", "nr5g_fraction",
                 "grid_rows", "grid_cols", "grid_margin_deg", "rain_max_mm", "ripple_frac",
                 "start_time"},
                origin + "::synth");
            auto& synth = cfg.campaign.synth;
            opt(s, "stations", synth.m_stations);
            opt(s, "users_per_station", synth.users_per_station);
            opt(s, "classes", synth.class_count);
            opt(s, "windows", cfg.campaign.windows);
            opt(s, "window_seconds", synth.window_seconds);
            opt(s, "noise_sigma_db", synth.noise_sigma_db);
            opt(s, "station_bias_sigma_db", synth.station_bias_sigma_db);
            double shift_span = 8.45;
            double pou_high = 0.95;
            double pou_low = 0.05;
            opt(s, "shift_span_db", shift_span);
            opt(s, "outdoor_prob_high", pou_high);
            opt(s, "outdoor_prob_low", pou_low);
            const auto r = static_cast<std::size_t>(synth.class_count);
            synth.class_shift_db = linspace(0.0, shift_span, r);
            synth.outdoor_prob = linspace(pou_high, pou_low, r);
            opt(s, "class_shift_db", synth.class_shift_db);
            opt(s, "outdoor_prob", synth.outdoor_prob);
            if (s.contains("extent")) {
                const auto& e = s.at("extent");
                check_known_keys(e, {"lat_min", "lat_max", "lon_min", "lon_max"},
                                 origin + "::synth::extent");
                opt(e, "lat_min", synth.extent.lat_min);
                opt(e, "lat_max", synth.extent.lat_max);
                opt(e, "lon_min", synth.extent.lon_min);
                opt(e, "lon_max", synth.extent.lon_max);
            }
            opt(s, "scatter_sigma_km", synth.scatter_sigma_km);
            opt(s, "rssi_ref_dbm", synth.rssi_ref_dbm);
            opt(s, "ref_distance_km", synth.ref_distance_km);
            opt(s, "path_loss_exponent", synth.path_loss_exponent);
            opt(s, "resource_blocks", synth.resource_blocks);
            opt(s, "sinr_ref_db", synth.sinr_ref_db);
            opt(s, "sinr_distance_slope", synth.sinr_distance_slope);
            opt(s, "nr5g_fraction", synth.nr5g_fraction);
            opt(s, "grid_rows", cfg.campaign.grid_rows);
            opt(s, "grid_cols", cfg.campaign.grid_cols);
            opt(s, "grid_margin_deg", cfg.campaign.grid_margin_deg);
            opt(s, "rain_max_mm", cfg.campaign.rain_max_mm);
            opt(s, "ripple_frac", cfg.campaign.ripple_frac);
            if (s.contains("start_time")) {
                cfg.campaign.start_time = parse_iso8601_utc(s.at("start_time").get<std::string>());
            }
        }
        if (doc.contains("features")) {
            const auto& f = doc.at("features");
            check_known_keys(f, {"k", "pool_rats"}, origin + "::features");
            opt(f, "k", cfg.features.k);
            opt(f, "pool_rats", cfg.features.pool_rats);
        }
        if (doc.contains("graph")) {
            const auto& g = doc.at("graph");
            check_known_keys(g, {"n"}, origin + "::graph");
            opt(g, "n", cfg.graph.n);
        }
        if (doc.contains("train")) {
            const auto& t = doc.at("train");
            check_known_keys(t, {"epochs", "learning_rate", "momentum", "batch_size", "mode"},
                             origin + "::train");
            opt(t, "epochs", cfg.train.epochs);
            opt(t, "learning_rate", cfg.train.learning_rate);
            opt(t, "momentum", cfg.train.momentum);
            opt(t, "batch_size", cfg.train.batch_size);
            opt(t, "mode", cfg.train.mode);
        }
        if (doc.contains("eval")) {
            const auto& e = doc.at("eval");
            check_known_keys(e, {"modes"}, origin + "::eval");
            opt(e, "modes", cfg.eval.modes);
        }
        if (doc.contains("ablate")) {
            const auto& a = doc.at("ablate");
            check_known_keys(a,
                             {"n_min", "n_max", "repetitions", "stations", "windows",
                              "users_per_station", "station_bias_sigma_db", "pou_high",
                              "pou_low"},
                             origin + "::ablate");
            opt(a, "n_min", cfg.ablate.n_min);
            opt(a, "n_max", cfg.ablate.n_max);
            opt(a, "repetitions", cfg.ablate.repetitions);
            opt(a, "stations", cfg.ablate.stations);
            opt(a, "windows", cfg.ablate.windows);
            opt(a, "users_per_station", cfg.ablate.users_per_station);
            opt(a, "station_bias_sigma_db", cfg.ablate.station_bias_sigma_db);
            opt(a, "pou_high", cfg.ablate.pou_high);
            opt(a, "pou_low", cfg.ablate.pou_low);
        }
        if (doc.contains("energy")) {
            const auto& e = doc.at("energy");
            check_known_keys(e,
                             {"area_km", "micro_count", "user_count", "fc_ghz", "macro_height_m",
                              "micro_height_m", "user_height_m", "threshold_dbm", "macro_cap_dbm",
                              "micro_cap_dbm", "rain_mean_db", "rain_std_db", "shadow_fading",
                              "pr_rain_steps", "layout_seeds"},
                             origin + "::energy");
            opt(e, "area_km", cfg.energy.area_km);
            opt(e, "micro_count", cfg.energy.micro_count);
            opt(e, "user_count", cfg.energy.user_count);
            opt(e, "fc_ghz", cfg.energy.fc_ghz);
            opt(e, "macro_height_m", cfg.energy.macro_height_m);
            opt(e, "micro_height_m", cfg.energy.micro_height_m);
            opt(e, "user_height_m", cfg.energy.user_height_m);
            opt(e, "threshold_dbm", cfg.energy.threshold_dbm);
            opt(e, "macro_cap_dbm", cfg.energy.macro_cap_dbm);
            opt(e, "micro_cap_dbm", cfg.energy.micro_cap_dbm);
            opt(e, "rain_mean_db", cfg.energy.rain_mean_db);
            opt(e, "rain_std_db", cfg.energy.rain_std_db);
            opt(e, "shadow_fading", cfg.energy.shadow_fading);
            opt(e, "pr_rain_steps", cfg.energy_sweep.pr_rain_steps);
            opt(e, "layout_seeds", cfg.energy_sweep.layout_seeds);
        }
        if (doc.contains("water")) {
            const auto& w = doc.at("water");
            check_known_keys(w, {"freq_min_ghz", "freq_max_ghz", "freq_steps", "temps_c"},
                             origin + "::water");
            opt(w, "freq_min_ghz", cfg.water.freq_min_ghz);
            opt(w, "freq_max_ghz", cfg.water.freq_max_ghz);
            opt(w, "freq_steps", cfg.water.freq_steps);
            opt(w, "temps_c", cfg.water.temps_c);
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::bad_config, origin + ": " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    require_file(path);
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json_text(text, path);
}

std::string config_echo_json(const RunConfig& cfg) {
    ordered_json doc;
    doc["seed"] = cfg.seed;
    const auto& synth = cfg.campaign.synth;
    doc["synth"] = {{"stations", synth.m_stations},
                    {"users_per_station", synth.users_per_station},
                    {"classes", synth.class_count},
                    {"windows", cfg.campaign.windows},
                    {"window_seconds", synth.window_seconds},
                    {"noise_sigma_db", synth.noise_sigma_db},
                    {"station_bias_sigma_db", synth.station_bias_sigma_db},
                    {"class_shift_db", synth.class_shift_db},
                    {"outdoor_prob", synth.outdoor_prob},
                    {"extent",
                     {{"lat_min", synth.extent.lat_min},
                      {"lat_max", synth.extent.lat_max},
                      {"lon_min", synth.extent.lon_min},
                      {"lon_max", synth.extent.lon_max}}},
                    {"scatter_sigma_km", synth.scatter_sigma_km},
                    {"rssi_ref_dbm", synth.rssi_ref_dbm},
                    {"ref_distance_km", synth.ref_distance_km},
                    {"path_loss_exponent", synth.path_loss_exponent},
                    {"resource_blocks", synth.resource_blocks},
                    {"sinr_ref_db", synth.sinr_ref_db},
                    {"sinr_distance_slope", synth.sinr_distance_slope},
                    {"nr5g_fraction", synth.nr5g_fraction},
                    {"grid_rows", cfg.campaign.grid_rows},
                    {"grid_cols", cfg.campaign.grid_cols},
                    {"grid_margin_deg", cfg.campaign.grid_margin_deg},
                    {"rain_max_mm", cfg.campaign.rain_max_mm},
                    {"ripple_frac", cfg.campaign.ripple_frac},
                    {"start_time", format_iso8601_utc(cfg.campaign.start_time)}};
    doc["features"] = {{"k", cfg.features.k}, {"pool_rats", cfg.features.pool_rats}};
    doc["graph"] = {{"n", cfg.graph.n}};
    doc["train"] = {{"epochs", cfg.train.epochs},
                    {"learning_rate", cfg.train.learning_rate},
                    {"momentum", cfg.train.momentum},
                    {"batch_size", cfg.train.batch_size},
                    {"mode", cfg.train.mode}};
    doc["eval"] = {{"modes", cfg.eval.modes}};
    doc["ablate"] = {{"n_min", cfg.ablate.n_min},
                     {"n_max", cfg.ablate.n_max},
                     {"repetitions", cfg.ablate.repetitions},
                     {"stations", cfg.ablate.stations},
                     {"windows", cfg.ablate.windows},
                     {"users_per_station", cfg.ablate.users_per_station},
                     {"station_bias_sigma_db", cfg.ablate.station_bias_sigma_db},
                     {"pou_high", cfg.ablate.pou_high},
                     {"pou_low", cfg.ablate.pou_low}};
    doc["energy"] = {{"area_km", cfg.energy.area_km},
                     {"micro_count", cfg.energy.micro_count},
                     {"user_count", cfg.energy.user_count},
                     {"fc_ghz", cfg.energy.fc_ghz},
                     {"macro_height_m", cfg.energy.macro_height_m},
                     {"micro_height_m", cfg.energy.micro_height_m},
                     {"user_height_m", cfg.energy.user_height_m},
                     {"threshold_dbm", cfg.energy.threshold_dbm},
                     {"macro_cap_dbm", cfg.energy.macro_cap_dbm},
                     {"micro_cap_dbm", cfg.energy.micro_cap_dbm},
                     {"rain_mean_db", cfg.energy.rain_mean_db},
                     {"rain_std_db", cfg.energy.rain_std_db},
                     {"shadow_fading", cfg.energy.shadow_fading},
                     {"pr_rain_steps", cfg.energy_sweep.pr_rain_steps},
                     {"layout_seeds", cfg.energy_sweep.layout_seeds}};
    doc["water"] = {{"freq_min_ghz", cfg.water.freq_min_ghz},
                    {"freq_max_ghz", cfg.water.freq_max_ghz},
                    {"freq_steps", cfg.water.freq_steps},
                    {"temps_c", cfg.water.temps_c}};
    return doc.dump(1) + "\n";
}

CampaignConfig ablation_campaign(const RunConfig& cfg) {
    CampaignConfig campaign = cfg.campaign;
    campaign.synth.m_stations = cfg.ablate.stations;
    campaign.windows = cfg.ablate.windows;
    campaign.synth.users_per_station = cfg.ablate.users_per_station;
    campaign.synth.station_bias_sigma_db = cfg.ablate.station_bias_sigma_db;
    const auto r = campaign.synth.outdoor_prob.size();
    for (std::size_t c = 0; c < r; ++c) {
        const double t = r > 1 ? static_cast<double>(c) / static_cast<double>(r - 1) : 0.0;
        campaign.synth.outdoor_prob[c] =
            cfg.ablate.pou_high + (cfg.ablate.pou_low - cfg.ablate.pou_high) * t;
    }
    return campaign;
}

AssembledData assemble_graphs_from_records(std::span<const LteRecord> records,
                                           std::span<const RadarGrid> grids,
                                           const AssembleParams& params) {
    if (grids.empty()) {
        throw std::invalid_argument("assemble_graphs: no radar grids");
    }

    // Evaluation runs on 4G data unless pooling is requested.
    std::vector<const LteRecord*> used;
    used.reserve(records.size());
    for (const auto& rec : records) {
        if (params.pool_rats || rec.rat == Rat::lte4g) {
            used.push_back(&rec);
        }
    }
    if (used.empty()) {
        throw std::invalid_argument("assemble_graphs: no records after RAT filtering");
    }

    std::vector<GeoPoint> points(used.size());
    std::vector<std::uint64_t> ids(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        points[i] = used[i]->loc;
        ids[i] = used[i]->id;
    }

    AssembledData out;
    out.clusters = cluster_stations(points, ids, params.m, params.seed);
    out.centers.reserve(out.clusters.size());
    for (const auto& c : out.clusters) {
        out.centers.push_back(c.center);
    }

    std::vector<LteRecord> filtered(used.size());
    for (std::size_t i = 0; i < used.size(); ++i) {
        filtered[i] = *used[i];
    }
    out.spec = fit_histogram_spec(filtered, params.k);

    std::map<std::uint64_t, std::size_t> index_of_id;
    for (std::size_t i = 0; i < filtered.size(); ++i) {
        index_of_id[filtered[i].id] = i;
    }

    // Window lookup by timestamp.
    std::vector<std::int64_t> starts(grids.size());
    for (std::size_t w = 0; w < grids.size(); ++w) {
        starts[w] = grids[w].window_start;
        if (w > 0 && starts[w] <= starts[w - 1]) {
            throw std::invalid_argument("assemble_graphs: grids must be in ascending window "
                                        "order");
        }
    }
    auto window_of = [&](std::int64_t t) -> std::ptrdiff_t {
        auto it = std::upper_bound(starts.begin(), starts.end(), t);
        if (it == starts.begin()) {
            return -1;
        }
        const auto w = static_cast<std::size_t>(std::distance(starts.begin(), it)) - 1;
        if (t >= starts[w] + params.window_seconds) {
            return -1;
        }
        return static_cast<std::ptrdiff_t>(w);
    };

    // Bucket records per (window, station).
    std::vector<std::vector<std::vector<LteRecord>>> buckets(
        grids.size(), std::vector<std::vector<LteRecord>>(out.clusters.size()));
    std::size_t dropped = 0;
    for (std::size_t s = 0; s < out.clusters.size(); ++s) {
        for (const auto id : out.clusters[s].member_ids) {
            const auto& rec = filtered[index_of_id.at(id)];
            const auto w = window_of(rec.timestamp);
            if (w < 0) {
                ++dropped;
                continue;
            }
            buckets[static_cast<std::size_t>(w)][s].push_back(rec);
        }
    }
    if (dropped > 0) {
        log_warn("assemble_graphs: " + std::to_string(dropped) +
                 " records fall outside every radar window");
    }

    out.features_by_window.resize(grids.size());
    for (std::size_t w = 0; w < grids.size(); ++w) {
        out.features_by_window[w].resize(out.clusters.size());
        for (std::size_t s = 0; s < out.clusters.size(); ++s) {
            out.features_by_window[w][s] = node_features(buckets[w][s], out.spec);
        }
    }

    double vmin = grids[0].values[0];
    double vmax = vmin;
    for (const auto& grid : grids) {
        for (const double v : grid.values) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    }
    if (!(vmin < vmax)) {
        vmax = vmin + 1.0;
    }
    out.binning = LabelBinning{vmin, vmax, std::max(params.classes, 2)};

    out.dataset.n = params.n;
    out.dataset.k = params.k;
    out.dataset.classes = out.binning.r;
    out.dataset.graphs =
        build_graphs(out.centers, out.features_by_window, grids, params.n, out.binning);
    return out;
}

GraphDataset build_dataset(const CampaignConfig& campaign, const AssembleParams& params) {
    const Campaign c = generate_campaign(campaign);
    return assemble_graphs_from_records(c.data.records, c.grids, params).dataset;
}

void run_synth(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    const Campaign campaign = generate_campaign(cfg.campaign);
    ensure_dir(out_dir);
    ensure_dir(out_dir + "/radar");
    write_lte_csv(campaign.data.records, out_dir + "/lte.csv");
    write_truth_csv(campaign.data, out_dir + "/truth.csv");
    for (std::size_t w = 0; w < campaign.grids.size(); ++w) {
        char name[32];
        std::snprintf(name, sizeof(name), "grid_%04zu.json", w);
        write_radar_grid(campaign.grids[w], out_dir + "/radar/" + name);
    }
    std::ofstream st(out_dir + "/gen_stations.csv", std::ios::binary | std::ios::trunc);
    st << "station,lat,lon\n";
    for (std::size_t s = 0; s < campaign.data.stations.size(); ++s) {
        st << s << ',' << fmt_double(campaign.data.stations[s].lat) << ','
           << fmt_double(campaign.data.stations[s].lon) << "\n";
    }
    echo_config(cfg, out_dir);
}

void run_featurize(const RunConfig& cfg, const std::string& synth_dir,
                   const std::string& out_dir) {
    validate_config(cfg);
    require_file(synth_dir + "/lte.csv");
    const std::string radar_dir = synth_dir + "/radar";
    require_file(radar_dir);

    std::vector<std::string> grid_files;
    for (const auto& entry : fs::directory_iterator(radar_dir)) {
        if (entry.path().extension() == ".json") {
            grid_files.push_back(entry.path().string());
        }
    }
    if (grid_files.empty()) {
        throw StageError(ErrorClass::missing_input, "no radar grids in " + radar_dir);
    }
    std::sort(grid_files.begin(), grid_files.end());

    std::vector<LteRecord> records;
    std::vector<RadarGrid> grids;
    try {
        records = parse_lte_csv(synth_dir + "/lte.csv");
        grids.reserve(grid_files.size());
        for (const auto& file : grid_files) {
            grids.push_back(read_radar_grid(file));
        }
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::bad_input, e.what());
    }
    std::sort(grids.begin(), grids.end(), [](const RadarGrid& a, const RadarGrid& b) {
        return a.window_start < b.window_start;
    });

    AssembleParams params;
    params.m = cfg.campaign.synth.m_stations;
    params.k = cfg.features.k;
    params.n = cfg.graph.n;
    params.classes = cfg.campaign.synth.class_count;
    params.pool_rats = cfg.features.pool_rats;
    params.seed = cfg.seed;
    params.window_seconds = cfg.campaign.synth.window_seconds;
    AssembledData data = assemble_graphs_from_records(records, grids, params);

    ensure_dir(out_dir);
    write_graph_dataset(data.dataset, out_dir + "/graphs.bin");

    std::vector<NodeFeatures> rows;
    std::vector<std::size_t> row_station;
    std::vector<std::int64_t> row_window;
    for (std::size_t w = 0; w < data.features_by_window.size(); ++w) {
        for (std::size_t s = 0; s < data.features_by_window[w].size(); ++s) {
            rows.push_back(data.features_by_window[w][s]);
            row_station.push_back(s);
            row_window.push_back(grids[w].window_start);
        }
    }
    write_features_csv(rows, row_station, row_window, cfg.features.k,
                       out_dir + "/features.csv");

    std::ofstream st(out_dir + "/stations.csv", std::ios::binary | std::ios::trunc);
    st << "station,lat,lon,members\n";
    for (std::size_t s = 0; s < data.clusters.size(); ++s) {
        st << s << ',' << fmt_double(data.clusters[s].center.lat) << ','
           << fmt_double(data.clusters[s].center.lon) << ','
           << data.clusters[s].member_ids.size() << "\n";
    }
    echo_config(cfg, out_dir);
}

void run_train(const RunConfig& cfg, const std::string& graphs_path, const std::string& out_dir) {
    validate_config(cfg);
    require_file(graphs_path);
    GraphDataset dataset;
    try {
        dataset = read_graph_dataset(graphs_path);
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::bad_input, e.what());
    }
    if (dataset.graphs.size() < 5) {
        throw StageError(ErrorClass::bad_input, "too few graphs to train on");
    }

    const DatasetSplit split =
        make_splits(dataset.graphs.size(), split_mode_from_string(cfg.train.mode), cfg.seed);
    const auto train_idx = split.complement_indices(0);
    const auto test_idx = split.fold_indices(0);

    TrainConfig tc;
    tc.epochs = cfg.train.epochs;
    tc.learning_rate = cfg.train.learning_rate;
    tc.momentum = cfg.train.momentum;
    tc.batch_size = cfg.train.batch_size;
    tc.seed = cfg.seed;

    const double sigma_e = median_edge_km(dataset.graphs, train_idx);
    const std::size_t in_dim = dataset.graphs.front().feat_dim;
    RainNetModel model =
        init_model(dataset.k, dataset.classes, in_dim, 64, sigma_e, cfg.seed);
    const auto metrics = train(model, dataset.graphs, train_idx, test_idx, tc);

    ensure_dir(out_dir);
    save_model(model, out_dir + "/model.bin");
    write_metrics_csv(metrics, 0, out_dir + "/metrics.csv");
    echo_config(cfg, out_dir);
}

void run_eval(const RunConfig& cfg, const std::string& graphs_path, const std::string& out_dir) {
    validate_config(cfg);
    require_file(graphs_path);
    GraphDataset dataset;
    try {
        dataset = read_graph_dataset(graphs_path);
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::bad_input, e.what());
    }

    TrainConfig tc;
    tc.epochs = cfg.train.epochs;
    tc.learning_rate = cfg.train.learning_rate;
    tc.momentum = cfg.train.momentum;
    tc.batch_size = cfg.train.batch_size;
    const auto factory = rainnet_factory(tc);

    ensure_dir(out_dir);
    for (const auto& mode_name : cfg.eval.modes) {
        ExperimentReport report =
            run_baseline(dataset, split_mode_from_string(mode_name), cfg.seed, factory);
        report.config_snapshot = config_echo_json(cfg);
        write_experiment_report_json(report, out_dir + "/report_" + mode_name + ".json");
        write_confusion_csv(report, out_dir + "/confusion_" + mode_name + ".csv");
        write_curves_csv(report.folds, out_dir + "/curves_" + mode_name + ".csv");
    }
    echo_config(cfg, out_dir);
}

void run_ablate_nodes(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    const CampaignConfig campaign = ablation_campaign(cfg);

    AssembleParams params;
    params.m = campaign.synth.m_stations;
    params.k = cfg.features.k;
    params.classes = campaign.synth.class_count;
    params.pool_rats = cfg.features.pool_rats;
    params.seed = cfg.seed;
    params.window_seconds = campaign.synth.window_seconds;

    const DatasetBuilder builder = [&](std::size_t n) {
        AssembleParams p = params;
        p.n = n;
        return build_dataset(campaign, p);
    };

    std::vector<std::size_t> n_values;
    for (std::size_t n = cfg.ablate.n_min; n <= cfg.ablate.n_max; ++n) {
        n_values.push_back(n);
    }

    TrainConfig tc;
    tc.epochs = cfg.train.epochs;
    tc.learning_rate = cfg.train.learning_rate;
    tc.momentum = cfg.train.momentum;
    tc.batch_size = cfg.train.batch_size;

    const auto points = run_node_ablation(builder, n_values, cfg.ablate.repetitions, cfg.seed,
                                          rainnet_factory(tc));

    ensure_dir(out_dir);
    std::ofstream out(out_dir + "/node_ablation.csv", std::ios::binary | std::ios::trunc);
    out << "n,mean_accuracy,stddev";
    for (std::size_t rep = 0; rep < cfg.ablate.repetitions; ++rep) {
        out << ",rep" << rep;
    }
    out << ",error\n";
    for (const auto& point : points) {
        out << point.n << ',' << fmt_double(point.mean_accuracy) << ','
            << fmt_double(point.stddev);
        for (std::size_t rep = 0; rep < cfg.ablate.repetitions; ++rep) {
            out << ',';
            if (rep < point.rep_accuracies.size()) {
                out << fmt_double(point.rep_accuracies[rep]);
            }
        }
        out << ',' << point.error << "\n";
    }
    echo_config(cfg, out_dir);
}

void run_ablate_pou(const RunConfig& cfg, const std::string& graphs_path,
                    const std::string& out_dir) {
    validate_config(cfg);
    require_file(graphs_path);
    GraphDataset dataset;
    try {
        dataset = read_graph_dataset(graphs_path);
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::bad_input, e.what());
    }

    TrainConfig tc;
    tc.epochs = cfg.train.epochs;
    tc.learning_rate = cfg.train.learning_rate;
    tc.momentum = cfg.train.momentum;
    tc.batch_size = cfg.train.batch_size;

    const PouAblationResult result = run_pou_ablation(dataset, cfg.seed, rainnet_factory(tc));

    ensure_dir(out_dir);
    std::ofstream out(out_dir + "/pou_ablation.csv", std::ios::binary | std::ios::trunc);
    out << "variant,feature_dim,accuracy\n";
    out << "with_pou," << result.dim_with_pou << ',' << fmt_double(result.acc_with_pou) << "\n";
    out << "without_pou," << result.dim_without_pou << ',' << fmt_double(result.acc_without_pou)
        << "\n";
    echo_config(cfg, out_dir);
}

void run_energy(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    const EnergyScenario scenario = make_scenario(cfg.energy);

    PowerAllocation rain_alloc;
    PowerAllocation norain_alloc;
    PowerAllocation robust_alloc;
    try {
        rain_alloc = min_power_single(scenario, true);
        norain_alloc = min_power_single(scenario, false);
        robust_alloc = min_power_robust(scenario);
    } catch (const std::exception& e) {
        throw StageError(ErrorClass::infeasible, e.what());
    }

    ensure_dir(out_dir);
    std::ofstream sweep(out_dir + "/savings.csv", std::ios::binary | std::ios::trunc);
    sweep << "pr_rain,p_w_watts,p_wo_watts,savings\n";
    const std::size_t steps = cfg.energy_sweep.pr_rain_steps;
    for (std::size_t i = 0; i < steps; ++i) {
        const double pr = static_cast<double>(i) / static_cast<double>(steps - 1);
        const double p_w =
            pr * rain_alloc.total_watts + (1.0 - pr) * norain_alloc.total_watts;
        const double savings = (robust_alloc.total_watts - p_w) / robust_alloc.total_watts;
        sweep << fmt_double(pr) << ',' << fmt_double(p_w) << ','
              << fmt_double(robust_alloc.total_watts) << ',' << fmt_double(savings) << "\n";
    }

    std::vector<std::size_t> users_rain(scenario.stations.size(), 0);
    std::vector<std::size_t> users_norain(scenario.stations.size(), 0);
    std::vector<std::size_t> users_robust(scenario.stations.size(), 0);
    for (std::size_t u = 0; u < scenario.users.size(); ++u) {
        users_rain[rain_alloc.assigned_station[u]]++;
        users_norain[norain_alloc.assigned_station[u]]++;
        users_robust[robust_alloc.assigned_station[u]]++;
    }
    std::ofstream st(out_dir + "/stations.csv", std::ios::binary | std::ios::trunc);
    st << "station,kind,x_m,y_m,power_norain_dbm,power_rain_dbm,power_robust_dbm,"
          "users_norain,users_rain,users_robust\n";
    for (std::size_t s = 0; s < scenario.stations.size(); ++s) {
        const auto& station = scenario.stations[s];
        st << s << ',' << (station.kind == StationKind::macro_cell ? "macro" : "micro") << ','
           << fmt_double(station.x_m) << ',' << fmt_double(station.y_m) << ','
           << fmt_double(norain_alloc.power_dbm[s]) << ',' << fmt_double(rain_alloc.power_dbm[s])
           << ',' << fmt_double(robust_alloc.power_dbm[s]) << ',' << users_norain[s] << ','
           << users_rain[s] << ',' << users_robust[s] << "\n";
    }
    echo_config(cfg, out_dir);
}

void run_water(const RunConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    ensure_dir(out_dir);
    std::ofstream out(out_dir + "/water_attenuation.csv", std::ios::binary | std::ios::trunc);
    out << "freq_ghz,temp_c,attenuation_length_m\n";
    const std::size_t steps = cfg.water.freq_steps;
    for (const double temp : cfg.water.temps_c) {
        for (std::size_t i = 0; i < steps; ++i) {
            const double f = cfg.water.freq_min_ghz +
                             (cfg.water.freq_max_ghz - cfg.water.freq_min_ghz) *
                                 static_cast<double>(i) / static_cast<double>(steps - 1);
            out << fmt_double(f) << ',' << fmt_double(temp) << ','
                << fmt_double(water_attenuation_length_m(f, temp)) << "\n";
        }
    }
    echo_config(cfg, out_dir);
}

void write_experiment_report_json(const ExperimentReport& report, const std::string& path) {
    ordered_json doc;
    doc["classes"] = report.classes;
    doc["mode"] = to_string(report.mode);
    doc["seed"] = report.seed;
    doc["mean_accuracy"] = report.mean_accuracy;
    ordered_json folds = ordered_json::array();
    for (const auto& fold : report.folds) {
        folds.push_back({{"fold", fold.fold},
                         {"accuracy", fold.accuracy},
                         {"test_count", fold.test_count}});
    }
    doc["folds"] = folds;
    ordered_json confusion = ordered_json::array();
    for (int t = 0; t < report.classes; ++t) {
        ordered_json row = ordered_json::array();
        for (int p = 0; p < report.classes; ++p) {
            row.push_back(report.confusion_at(t, p));
        }
        confusion.push_back(row);
    }
    doc["confusion"] = confusion;
    if (!report.config_snapshot.empty()) {
        doc["config"] = json::parse(report.config_snapshot);
    }
    write_text_file(path, doc.dump(1) + "\n");
}

void write_confusion_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "true_class";
    for (int p = 0; p < report.classes; ++p) {
        out << ",pred_" << p;
    }
    out << "\n";
    for (int t = 0; t < report.classes; ++t) {
        out << t;
        for (int p = 0; p < report.classes; ++p) {
            out << ',' << report.confusion_at(t, p);
        }
        out << "\n";
    }
}

void write_curves_csv(const std::vector<FoldResult>& folds, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "epoch,fold,train_loss,test_acc\n";
    for (const auto& fold : folds) {
        for (const auto& m : fold.curve) {
            out << m.epoch << ',' << fold.fold << ',' << fmt_double(m.train_loss) << ','
                << fmt_double(m.test_accuracy) << "\n";
        }
    }
}

void write_metrics_csv(const std::vector<EpochMetrics>& metrics, int fold,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "epoch,fold,train_loss,test_acc\n";
    for (const auto& m : metrics) {
        out << m.epoch << ',' << fold << ',' << fmt_double(m.train_loss) << ','
            << fmt_double(m.test_accuracy) << "\n";
    }
}

} // namespace rainsense
