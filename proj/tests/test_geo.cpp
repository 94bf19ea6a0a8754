//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rainsense/geo.hpp"
#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using namespace rainsense;

namespace {

// Independent oracle: spherical law of cosines on the same radius.
double spherical_cosine_km(const GeoPoint& a, const GeoPoint& b) {
    const double deg = 0.017453292519943295769236907684886;
    const double lat1 = a.lat * deg;
    const double lat2 = b.lat * deg;
    const double dlon = (b.lon - a.lon) * deg;
    const double c = std::sin(lat1) * std::sin(lat2) + std::cos(lat1) * std::cos(lat2) * std::cos(dlon);
    return kEarthRadiusKm * std::acos(std::clamp(c, -1.0, 1.0));
}

GeoPoint random_point(Rng& rng) {
    return {rng.uniform(-80.0, 80.0), rng.uniform(-179.0, 179.0)};
}

} // namespace

TEST_CASE("haversine identity") {
    const GeoPoint p{40.35, 115.98};
    CHECK(haversine_km(p, p) == 0.0);
}

TEST_CASE("haversine agrees with the spherical-law-of-cosines oracle") {
    const GeoPoint a{40.0, 116.0};
    const GeoPoint b{40.0, 117.0};
    const double hv = haversine_km(a, b);
    const double oracle = spherical_cosine_km(a, b);
    CHECK(std::abs(hv - oracle) < 1e-6);
    CHECK(hv > 80.0); // one degree of longitude at 40N is ~85 km
    CHECK(hv < 90.0);

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const GeoPoint p = random_point(rng);
        const GeoPoint q = random_point(rng);
        CHECK(std::abs(haversine_km(p, q) - spherical_cosine_km(p, q)) < 1e-6);
    }
}

TEST_CASE("haversine symmetry on random pairs") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const GeoPoint a = random_point(rng);
        const GeoPoint b = random_point(rng);
        CHECK(haversine_km(a, b) == haversine_km(b, a));
        CHECK(haversine_km(a, b) >= 0.0);
    }
}

TEST_CASE("haversine triangle inequality") {
    Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        const GeoPoint a = random_point(rng);
        const GeoPoint b = random_point(rng);
        const GeoPoint c = random_point(rng);
        CHECK(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-9);
    }
}

TEST_CASE("geo point validation") {
    CHECK_THROWS(validate_geo_point({91.0, 0.0}));
    CHECK_THROWS(validate_geo_point({0.0, 181.0}));
    CHECK_NOTHROW(validate_geo_point({-90.0, 180.0}));
}

TEST_CASE("clustering m points into m clusters returns the points") {
    std::vector<GeoPoint> pts{{40.0, 116.0}, {40.5, 116.2}, {40.9, 115.8}};
    std::vector<std::uint64_t> ids{10, 20, 30};
    const auto clusters = cluster_stations(pts, ids, 3, 1);
    REQUIRE(clusters.size() == 3);
    std::set<std::uint64_t> seen;
    for (const auto& c : clusters) {
        REQUIRE(c.member_ids.size() == 1);
        seen.insert(c.member_ids[0]);
        bool matched = false;
        for (const auto& p : pts) {
            if (std::abs(p.lat - c.center.lat) < 1e-9 && std::abs(p.lon - c.center.lon) < 1e-9) {
                matched = true;
            }
        }
        CHECK(matched);
    }
    CHECK(seen.size() == 3);
}

TEST_CASE("clustering recovers two well-separated blobs") {
    Rng rng(17);
    std::vector<GeoPoint> pts;
    std::vector<std::uint64_t> ids;
    for (int i = 0; i < 60; ++i) {
        pts.push_back({40.0 + rng.normal() * 0.005, 116.0 + rng.normal() * 0.005});
        ids.push_back(static_cast<std::uint64_t>(i));
    }
    for (int i = 0; i < 60; ++i) {
        pts.push_back({40.5 + rng.normal() * 0.005, 116.8 + rng.normal() * 0.005});
        ids.push_back(static_cast<std::uint64_t>(1000 + i));
    }
    const auto clusters = cluster_stations(pts, ids, 2, 3);
    REQUIRE(clusters.size() == 2);
    for (const auto& c : clusters) {
        CHECK(c.member_ids.size() == 60);
        const bool first_blob = c.member_ids.front() < 1000;
        for (const auto id : c.member_ids) {
            CHECK((id < 1000) == first_blob);
        }
    }
}

TEST_CASE("clustering 100 stations over the default extent") {
    Rng rng(23);
    std::vector<GeoPoint> pts;
    std::vector<std::uint64_t> ids;
    for (int i = 0; i < 4000; ++i) {
        pts.push_back({rng.uniform(40.35, 40.60), rng.uniform(115.75, 116.25)});
        ids.push_back(static_cast<std::uint64_t>(i));
    }
    const auto clusters = cluster_stations(pts, ids, 100, 5);
    REQUIRE(clusters.size() == 100);
    std::size_t total = 0;
    for (const auto& c : clusters) {
        CHECK(!c.member_ids.empty());
        total += c.member_ids.size();
    }
    CHECK(total == pts.size());
}

TEST_CASE("clustering is invariant under input permutation") {
    Rng rng(29);
    std::vector<GeoPoint> pts;
    std::vector<std::uint64_t> ids;
    for (int i = 0; i < 300; ++i) {
        pts.push_back({rng.uniform(40.0, 41.0), rng.uniform(116.0, 117.0)});
        ids.push_back(static_cast<std::uint64_t>(i));
    }
    const auto base = cluster_stations(pts, ids, 12, 7);

    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
    }
    std::vector<GeoPoint> pts2(pts.size());
    std::vector<std::uint64_t> ids2(pts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        pts2[i] = pts[perm[i]];
        ids2[i] = ids[perm[i]];
    }
    const auto shuffled = cluster_stations(pts2, ids2, 12, 7);

    REQUIRE(base.size() == shuffled.size());
    for (std::size_t c = 0; c < base.size(); ++c) {
        CHECK(base[c].center.lat == shuffled[c].center.lat);
        CHECK(base[c].center.lon == shuffled[c].center.lon);
        CHECK(base[c].member_ids == shuffled[c].member_ids);
    }
}

TEST_CASE("clustering input errors") {
    std::vector<GeoPoint> pts{{40.0, 116.0}, {40.0, 116.0}};
    std::vector<std::uint64_t> ids{1, 2};
    CHECK_THROWS(cluster_stations(pts, ids, 2, 1)); // only one distinct point
    CHECK_THROWS(cluster_stations({}, {}, 1, 1));
}

TEST_CASE("nearest neighbors on collinear equally spaced centers") {
    std::vector<GeoPoint> centers;
    for (int i = 0; i < 5; ++i) {
        centers.push_back({40.0, 116.0 + 0.01 * i});
    }
    const auto nn = nearest_neighbors(centers, 0, 3);
    CHECK(nn == std::vector<std::size_t>{1, 2, 3});
    const auto nn_end = nearest_neighbors(centers, 4, 2);
    CHECK(nn_end == std::vector<std::size_t>{3, 2});
}

TEST_CASE("nearest neighbors match the full-sort oracle") {
    Rng rng(31);
    std::vector<GeoPoint> centers;
    for (int i = 0; i < 100; ++i) {
        centers.push_back({rng.uniform(40.0, 41.0), rng.uniform(116.0, 117.0)});
    }
    for (const std::size_t anchor : {0UL, 17UL, 99UL}) {
        // Oracle: full sort of all other indices by (distance, index).
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            if (j != anchor) {
                all.emplace_back(haversine_km(centers[anchor], centers[j]), j);
            }
        }
        std::sort(all.begin(), all.end());
        const auto nn = nearest_neighbors(centers, anchor, 8);
        REQUIRE(nn.size() == 8);
        std::set<std::size_t> distinct(nn.begin(), nn.end());
        CHECK(distinct.size() == 8);
        CHECK(distinct.find(anchor) == distinct.end());
        for (std::size_t i = 0; i < 8; ++i) {
            CHECK(nn[i] == all[i].second);
        }
    }
}

TEST_CASE("nearest neighbors errors") {
    std::vector<GeoPoint> centers{{40.0, 116.0}, {40.1, 116.1}};
    CHECK_THROWS(nearest_neighbors(centers, 5, 1));
    CHECK_THROWS(nearest_neighbors(centers, 0, 2));
}
