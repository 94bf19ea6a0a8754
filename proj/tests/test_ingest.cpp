//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rainsense/synth.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

using namespace rainsense;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

constexpr const char* kHeader = "id,lat,lon,rat,operator,rsrp,sinr,rssi,outdoor,timestamp";

SynthConfig small_config(int classes) {
    SynthConfig cfg;
    cfg.m_stations = 20;
    cfg.users_per_station = 50;
    cfg.class_count = classes;
    cfg.class_shift_db.assign(static_cast<std::size_t>(classes), 0.0);
    cfg.outdoor_prob.assign(static_cast<std::size_t>(classes), 0.5);
    cfg.noise_sigma_db = 2.0;
    cfg.seed = 42;
    return cfg;
}

// Rain field constant at `level` over the default extent plus margin.
RadarGrid flat_grid(double level) {
    RadarGrid grid;
    grid.origin = {40.30, 115.70};
    grid.cell_size_lat_deg = 0.05;
    grid.cell_size_lon_deg = 0.075;
    grid.rows = 8;
    grid.cols = 9;
    grid.values.assign(grid.rows * grid.cols, level);
    grid.window_start = 1767225600;
    return grid;
}

// Western half at lo, eastern half at hi (split at lon 116.0).
RadarGrid split_grid(double lo, double hi) {
    RadarGrid grid = flat_grid(lo);
    for (std::size_t i = 0; i < grid.rows; ++i) {
        for (std::size_t j = 0; j < grid.cols; ++j) {
            const double lon = grid.origin.lon + static_cast<double>(j) * grid.cell_size_lon_deg;
            grid.values[i * grid.cols + j] = lon < 116.0 ? lo : hi;
        }
    }
    return grid;
}

} // namespace

TEST_CASE("empty body with a valid header parses to an empty list") {
    const std::string path = temp_path("rs_ingest_empty.csv");
    {
        std::ofstream out(path);
        out << kHeader << "\n";
    }
    CHECK(parse_lte_csv(path).empty());
    std::filesystem::remove(path);
}

TEST_CASE("a row with rssi below rsrp is rejected, naming the row") {
    const std::string path = temp_path("rs_ingest_badrow.csv");
    {
        std::ofstream out(path);
        out << kHeader << "\n";
        out << "1,40.0,116.0,4G,A,-90,10,-85,1,2026-01-01T00:00:00Z\n";
        out << "2,40.0,116.0,4G,A,-90,10,-95,1,2026-01-01T00:00:00Z\n";
    }
    try {
        parse_lte_csv(path);
        FAIL("expected failure");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("rssi") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("malformed fields are rejected with row and field names") {
    const std::string path = temp_path("rs_ingest_malformed.csv");
    const std::string good = "1,40.0,116.0,4G,A,-90,10,-80,1,2026-01-01T00:00:00Z";
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"x,40.0,116.0,4G,A,-90,10,-80,1,2026-01-01T00:00:00Z", "id"},
        {"1,oops,116.0,4G,A,-90,10,-80,1,2026-01-01T00:00:00Z", "lat"},
        {"1,40.0,116.0,3G,A,-90,10,-80,1,2026-01-01T00:00:00Z", "rat"},
        {"1,40.0,116.0,4G,Z,-90,10,-80,1,2026-01-01T00:00:00Z", "operator"},
        {"1,40.0,116.0,4G,A,-90,10,-80,2,2026-01-01T00:00:00Z", "outdoor"},
        {"1,40.0,116.0,4G,A,-90,10,-80,1,not-a-time", "timestamp"},
    };
    for (const auto& [row, field] : cases) {
        {
            std::ofstream out(path);
            out << kHeader << "\n" << good << "\n" << row << "\n";
        }
        try {
            parse_lte_csv(path);
            FAIL("expected failure for field ", field);
        } catch (const std::exception& e) {
            const std::string msg = e.what();
            CHECK(msg.find("row 3") != std::string::npos);
            CHECK(msg.find(field) != std::string::npos);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("a bad header is rejected") {
    const std::string path = temp_path("rs_ingest_header.csv");
    {
        std::ofstream out(path);
        out << "id,lat,lon\n";
    }
    CHECK_THROWS(parse_lte_csv(path));
    std::filesystem::remove(path);
}

TEST_CASE("a 74167-row synthetic file parses to 74167 records") {
    const std::string path = temp_path("rs_ingest_become.csv");
    {
        std::ofstream out(path);
        out << kHeader << "\n";
        for (int i = 0; i < 74167; ++i) {
            out << i << ",40.5,116.0,4G,B,-100,8,-75,0,2026-01-01T06:00:00Z\n";
        }
    }
    const auto records = parse_lte_csv(path);
    CHECK(records.size() == 74167);
    std::filesystem::remove(path);
}

TEST_CASE("write/parse round-trip preserves records") {
    auto cfg = small_config(2);
    cfg.m_stations = 5;
    cfg.users_per_station = 40;
    const auto data = synthesize_dataset(cfg, split_grid(0.2, 0.8));
    const std::string path = temp_path("rs_ingest_roundtrip.csv");
    write_lte_csv(data.records, path);
    const auto back = parse_lte_csv(path);
    REQUIRE(back.size() == data.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].id == data.records[i].id);
        CHECK(back[i].rsrp == data.records[i].rsrp);
        CHECK(back[i].sinr == data.records[i].sinr);
        CHECK(back[i].rssi == data.records[i].rssi);
        CHECK(back[i].outdoor == data.records[i].outdoor);
        CHECK(back[i].timestamp == data.records[i].timestamp);
        CHECK(back[i].rat == data.records[i].rat);
        CHECK(back[i].op == data.records[i].op);
    }
    std::filesystem::remove(path);
}

TEST_CASE("zero noise and zero scatter give one identical RSSI everywhere") {
    auto cfg = small_config(2);
    cfg.noise_sigma_db = 0.0;
    cfg.scatter_sigma_km = 0.0; // all users at the station center
    const auto data = synthesize_dataset(cfg, flat_grid(0.1));
    REQUIRE(!data.records.empty());
    const int rssi = data.records.front().rssi;
    for (const auto& rec : data.records) {
        CHECK(rec.rssi == rssi);
    }
}

TEST_CASE("a two-class shift of 8.45 dB appears as the mean RSSI difference") {
    SynthConfig cfg = small_config(2);
    cfg.m_stations = 100;
    cfg.users_per_station = 1000; // 1e5 records in one window
    cfg.class_shift_db = {0.0, 8.45};
    cfg.outdoor_prob = {0.5, 0.5};
    cfg.noise_sigma_db = 2.0;
    const auto data = synthesize_dataset(cfg, split_grid(0.2, 0.8));
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const auto cls = static_cast<std::size_t>(data.truth_class[i]);
        sum[cls] += data.records[i].rssi;
        count[cls] += 1;
    }
    REQUIRE(count[0] > 10000);
    REQUIRE(count[1] > 10000);
    const double diff = sum[0] / static_cast<double>(count[0]) -
                        sum[1] / static_cast<double>(count[1]);
    CHECK(diff == doctest::Approx(8.45).epsilon(0.012)); // within 0.1 dB
}

TEST_CASE("per-class outdoor probabilities are realized") {
    SynthConfig cfg = small_config(2);
    cfg.m_stations = 50;
    cfg.users_per_station = 200; // 1e4 records
    cfg.outdoor_prob = {0.7, 0.3};
    const auto data = synthesize_dataset(cfg, split_grid(0.2, 0.8));
    double outdoor[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const auto cls = static_cast<std::size_t>(data.truth_class[i]);
        outdoor[cls] += data.records[i].outdoor ? 1.0 : 0.0;
        count[cls] += 1;
    }
    CHECK(std::abs(outdoor[0] / static_cast<double>(count[0]) - 0.7) < 0.02);
    CHECK(std::abs(outdoor[1] / static_cast<double>(count[1]) - 0.3) < 0.02);
}

TEST_CASE("identical configs produce byte-identical datasets") {
    const auto cfg = small_config(3);
    CampaignConfig campaign;
    campaign.synth = cfg;
    campaign.windows = 6;
    const Campaign a = generate_campaign(campaign);
    const Campaign b = generate_campaign(campaign);
    const std::string pa = temp_path("rs_ingest_det_a.csv");
    const std::string pb = temp_path("rs_ingest_det_b.csv");
    write_lte_csv(a.data.records, pa);
    write_lte_csv(b.data.records, pb);
    std::ifstream fa(pa, std::ios::binary);
    std::ifstream fb(pb, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(!sa.empty());
    std::filesystem::remove(pa);
    std::filesystem::remove(pb);
}

TEST_CASE("per-class mean RSSI decreases when shifts strictly increase") {
    SynthConfig cfg = small_config(4);
    cfg.m_stations = 40;
    cfg.users_per_station = 150;
    cfg.class_shift_db = {0.0, 3.0, 6.0, 9.0};
    cfg.outdoor_prob = {0.8, 0.6, 0.4, 0.2};
    CampaignConfig campaign;
    campaign.synth = cfg;
    campaign.windows = 8;
    const Campaign c = generate_campaign(campaign);
    double sum[4] = {0, 0, 0, 0};
    std::size_t count[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < c.data.records.size(); ++i) {
        const auto cls = static_cast<std::size_t>(c.data.truth_class[i]);
        sum[cls] += c.data.records[i].rssi;
        count[cls] += 1;
    }
    for (int cls = 0; cls < 4; ++cls) {
        REQUIRE(count[cls] > 1000);
    }
    for (int cls = 1; cls < 4; ++cls) {
        CHECK(sum[cls] / static_cast<double>(count[cls]) <
              sum[cls - 1] / static_cast<double>(count[cls - 1]));
    }
    // POU within 3 binomial standard deviations of its target.
    double outdoor[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < c.data.records.size(); ++i) {
        const auto cls = static_cast<std::size_t>(c.data.truth_class[i]);
        outdoor[cls] += c.data.records[i].outdoor ? 1.0 : 0.0;
    }
    for (int cls = 0; cls < 4; ++cls) {
        const double p = cfg.outdoor_prob[static_cast<std::size_t>(cls)];
        const double n = static_cast<double>(count[cls]);
        const double sd = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(outdoor[cls] / n - p) <= 3.0 * sd);
    }
}

TEST_CASE("campaign truth classes follow the window schedule") {
    SynthConfig cfg = small_config(5);
    cfg.m_stations = 10;
    cfg.users_per_station = 20;
    CampaignConfig campaign;
    campaign.synth = cfg;
    campaign.windows = 10;
    const Campaign c = generate_campaign(campaign);
    REQUIRE(c.grids.size() == 10);
    // Window w carries class w mod r; every record in that window agrees.
    for (std::size_t i = 0; i < c.data.records.size(); ++i) {
        const auto w = static_cast<std::size_t>(
            (c.data.records[i].timestamp - campaign.start_time) / cfg.window_seconds);
        CHECK(c.data.truth_class[i] == static_cast<int>(w % 5));
    }
}

TEST_CASE("synthesize rejects an extent outside the grid") {
    auto cfg = small_config(2);
    RadarGrid grid = flat_grid(0.5);
    grid.rows = 2;
    grid.cols = 2;
    grid.values.assign(4, 0.5);
    CHECK_THROWS(synthesize_dataset(cfg, grid));
}

TEST_CASE("truth sidecar round-trips") {
    auto cfg = small_config(2);
    cfg.m_stations = 4;
    cfg.users_per_station = 10;
    const auto data = synthesize_dataset(cfg, split_grid(0.2, 0.8));
    const std::string path = temp_path("rs_ingest_truth.csv");
    write_truth_csv(data, path);
    const auto truth = read_truth_csv(path);
    REQUIRE(truth.size() == data.records.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        CHECK(truth[i].first == data.records[i].id);
        CHECK(truth[i].second == data.truth_class[i]);
    }
    std::filesystem::remove(path);
}
