//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "rainsense/geo.hpp"

#include "rainsense/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace rainsense {

namespace {

constexpr double kDegToRad = 0.017453292519943295769236907684886;

struct Vec3 {
    double x, y, z;
};

Vec3 to_unit_vector(const GeoPoint& p) {
    const double lat = p.lat * kDegToRad;
    const double lon = p.lon * kDegToRad;
    const double c = std::cos(lat);
    return {c * std::cos(lon), c * std::sin(lon), std::sin(lat)};
}

GeoPoint to_geo_point(const Vec3& v) {
    const double norm = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    const double lat = std::asin(v.z / norm) / kDegToRad;
    const double lon = std::atan2(v.y, v.x) / kDegToRad;
    return {lat, lon};
}

// Squared Euclidean (chord) distance between unit vectors. Monotone in the
// great-circle distance, so nearest-center lookups agree with haversine while
// avoiding trigonometry in the inner loop.
double chord_sq(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

} // namespace

GeoPoint validate_geo_point(GeoPoint p) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || p.lat < -90.0 || p.lat > 90.0 ||
        p.lon < -180.0 || p.lon > 180.0) {
        throw std::invalid_argument("GeoPoint out of range: lat=" + std::to_string(p.lat) +
                                    " lon=" + std::to_string(p.lon));
    }
    return p;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    const double lat1 = a.lat * kDegToRad;
    const double lat2 = b.lat * kDegToRad;
    const double dlat = (b.lat - a.lat) * kDegToRad;
    const double dlon = (b.lon - a.lon) * kDegToRad;
    const double sin_dlat = std::sin(0.5 * dlat);
    const double sin_dlon = std::sin(0.5 * dlon);
    const double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<StationCluster> cluster_stations(std::span<const GeoPoint> points,
                                             std::span<const std::uint64_t> ids,
                                             std::size_t m,
                                             std::uint64_t seed) {
    if (points.empty()) {
        throw std::invalid_argument("cluster_stations: empty input");
    }
    if (points.size() != ids.size()) {
        throw std::invalid_argument("cluster_stations: points/ids size mismatch");
    }
    if (m == 0) {
        throw std::invalid_argument("cluster_stations: m must be positive");
    }

    std::set<std::pair<double, double>> distinct;
    for (const auto& p : points) {
        validate_geo_point(p);
        distinct.emplace(p.lat, p.lon);
    }
    if (m > distinct.size()) {
        throw std::invalid_argument("cluster_stations: m=" + std::to_string(m) +
                                    " exceeds distinct point count " +
                                    std::to_string(distinct.size()));
    }

    const std::size_t n = points.size();

    // Canonical order makes the seeding independent of input permutation.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].lat != points[b].lat) return points[a].lat < points[b].lat;
        if (points[a].lon != points[b].lon) return points[a].lon < points[b].lon;
        return ids[a] < ids[b]; // duplicate coordinates: order by id
    });

    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        pts[i] = to_unit_vector(points[order[i]]);
    }

    // k-means++ seeding with squared-chord weights.
    Rng rng(derive_seed(seed, seed_tag::kmeans_init));
    std::vector<Vec3> centers;
    centers.reserve(m);
    centers.push_back(pts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1))]);

    std::vector<double> min_d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        min_d2[i] = chord_sq(pts[i], centers[0]);
    }
    while (centers.size() < m) {
        double total = std::accumulate(min_d2.begin(), min_d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_d2[i];
                if (acc >= target && min_d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pts[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            min_d2[i] = std::min(min_d2[i], chord_sq(pts[i], centers.back()));
        }
    }

    // Lloyd iterations.
    std::vector<std::size_t> assign(n, 0);
    constexpr int kMaxIters = 200;
    for (int iter = 0; iter < kMaxIters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            double best = chord_sq(pts[i], centers[0]);
            std::size_t best_c = 0;
            for (std::size_t c = 1; c < m; ++c) {
                const double d = chord_sq(pts[i], centers[c]);
                if (d < best) {
                    best = d;
                    best_c = c;
                }
            }
            if (assign[i] != best_c) {
                assign[i] = best_c;
                changed = true;
            }
        }

        // Re-seed any empty cluster with the point farthest from its center
        // (lowest index on ties), then redo the assignment pass.
        std::vector<std::size_t> counts(m, 0);
        for (std::size_t i = 0; i < n; ++i) {
            counts[assign[i]]++;
        }
        bool reseeded = false;
        for (std::size_t c = 0; c < m; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assign[i]] <= 1) {
                    continue;
                }
                const double d = chord_sq(pts[i], centers[assign[i]]);
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            counts[assign[worst_i]]--;
            assign[worst_i] = c;
            counts[c] = 1;
            reseeded = true;
        }

        std::vector<Vec3> sums(m, Vec3{0.0, 0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            sums[assign[i]].x += pts[i].x;
            sums[assign[i]].y += pts[i].y;
            sums[assign[i]].z += pts[i].z;
        }
        for (std::size_t c = 0; c < m; ++c) {
            const double norm =
                std::sqrt(sums[c].x * sums[c].x + sums[c].y * sums[c].y + sums[c].z * sums[c].z);
            if (norm > 0.0) {
                centers[c] = {sums[c].x / norm, sums[c].y / norm, sums[c].z / norm};
            }
        }

        if (!changed && !reseeded) {
            break;
        }
    }

    std::vector<StationCluster> clusters(m);
    for (std::size_t c = 0; c < m; ++c) {
        clusters[c].center = to_geo_point(centers[c]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        clusters[assign[i]].member_ids.push_back(ids[order[i]]);
    }
    for (auto& cluster : clusters) {
        std::sort(cluster.member_ids.begin(), cluster.member_ids.end());
    }
    std::sort(clusters.begin(), clusters.end(), [](const StationCluster& a, const StationCluster& b) {
        if (a.center.lat != b.center.lat) return a.center.lat < b.center.lat;
        return a.center.lon < b.center.lon;
    });
    return clusters;
}

std::vector<std::size_t> nearest_neighbors(std::span<const GeoPoint> centers,
                                           std::size_t i,
                                           std::size_t n_minus_1) {
    if (i >= centers.size()) {
        throw std::out_of_range("nearest_neighbors: index " + std::to_string(i) +
                                " out of range for " + std::to_string(centers.size()) +
                                " centers");
    }
    if (n_minus_1 >= centers.size()) {
        throw std::invalid_argument("nearest_neighbors: requested " + std::to_string(n_minus_1) +
                                    " neighbors from " + std::to_string(centers.size()) +
                                    " centers");
    }
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(centers.size() - 1);
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (j == i) {
            continue;
        }
        dist.emplace_back(haversine_km(centers[i], centers[j]), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(n_minus_1),
                      dist.end());
    std::vector<std::size_t> out(n_minus_1);
    for (std::size_t k = 0; k < n_minus_1; ++k) {
        out[k] = dist[k].second;
    }
    return out;
}

} // namespace rainsense
