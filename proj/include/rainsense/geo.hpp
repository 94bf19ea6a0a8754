//
// Copyright (C) 2026 the rainsense contributors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RAINSENSE_GEO_HPP
#define RAINSENSE_GEO_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace rainsense {

// Mean Earth radius in kilometers used by every spherical-distance
// computation in this project.
constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat = 0.0; // degrees, [-90, 90]
    double lon = 0.0; // degrees, [-180, 180]

    bool operator==(const GeoPoint&) const = default;
};

// Throws std::invalid_argument when lat/lon are outside their ranges or not
// finite. Returns the point unchanged otherwise.
GeoPoint validate_geo_point(GeoPoint p);

// Great-circle distance in km (haversine formula, radius kEarthRadiusKm).
double haversine_km(const GeoPoint& a, const GeoPoint& b);

struct StationCluster {
    GeoPoint center;
    std::vector<std::uint64_t> member_ids; // record ids, nonempty
};

// Lloyd k-means over the sphere with k-means++ seeding. Assignment uses
// great-circle distance (computed through the equivalent 3D chord ordering);
// centers are spherical centroids. Points are canonicalized by (lat, lon)
// before seeding, so the result is invariant under input permutation up to
// the final canonical ordering of clusters by (lat, lon).
//
// ids[i] labels points[i]; the same id may not appear twice.
// Throws std::invalid_argument when points is empty or m exceeds the number
// of distinct coordinates.
std::vector<StationCluster> cluster_stations(std::span<const GeoPoint> points,
                                             std::span<const std::uint64_t> ids,
                                             std::size_t m,
                                             std::uint64_t seed);

// Indices of the n_minus_1 centers nearest to centers[i] (excluding i),
// ordered by ascending distance; ties broken by ascending index.
// Throws std::out_of_range for a bad index, std::invalid_argument when
// n_minus_1 >= centers.size().
std::vector<std::size_t> nearest_neighbors(std::span<const GeoPoint> centers,
                                           std::size_t i,
                                           std::size_t n_minus_1);

} // namespace rainsense

#endif // RAINSENSE_GEO_HPP
