// SPDX-License-Identifier: Apache-2.0
//
// digeo: simulation and direct geolocation of GNSS interference sources
// Copyright (C) 2026 The digeo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace digeo {

/// WGS84 reference ellipsoid.
namespace wgs84 {
inline constexpr double semi_major_axis_m = 6378137.0;
inline constexpr double flattening = 1.0 / 298.257223563;
inline constexpr double semi_minor_axis_m = semi_major_axis_m * (1.0 - flattening);
inline constexpr double eccentricity_sq = flattening * (2.0 - flattening);
}  // namespace wgs84

inline constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Earth-centered Earth-fixed rectangular coordinates, meters (or m/s when
/// used as a velocity).
struct EcefVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline EcefVector operator+(const EcefVector& a, const EcefVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline EcefVector operator-(const EcefVector& a, const EcefVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline EcefVector operator*(double s, const EcefVector& v) { return {s * v.x, s * v.y, s * v.z}; }
inline double dot(const EcefVector& a, const EcefVector& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Geodetic coordinates on the WGS84 ellipsoid.
struct GeodeticCoord {
    double lat_deg = 0.0;  ///< [-90, 90]
    double lon_deg = 0.0;  ///< [-180, 180)
    double alt_m = 0.0;    ///< height above the ellipsoid

    void validate() const {
        if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
            throw std::invalid_argument("GeodeticCoord: lat_deg out of [-90, 90]: " +
                                        std::to_string(lat_deg));
        if (!(lon_deg >= -180.0 && lon_deg < 180.0))
            throw std::invalid_argument("GeodeticCoord: lon_deg out of [-180, 180): " +
                                        std::to_string(lon_deg));
        if (!std::isfinite(alt_m))
            throw std::invalid_argument("GeodeticCoord: alt_m not finite");
    }
};

/// Geodetic-to-ECEF forward transform (WGS84).
inline EcefVector lla_to_ecef(const GeodeticCoord& g) {
    g.validate();
    const double lat = deg2rad(g.lat_deg);
    const double lon = deg2rad(g.lon_deg);
    const double slat = std::sin(lat), clat = std::cos(lat);
    const double slon = std::sin(lon), clon = std::cos(lon);
    const double n = wgs84::semi_major_axis_m / std::sqrt(1.0 - wgs84::eccentricity_sq * slat * slat);
    return {(n + g.alt_m) * clat * clon,
            (n + g.alt_m) * clat * slon,
            (n * (1.0 - wgs84::eccentricity_sq) + g.alt_m) * slat};
}

/// ECEF-to-geodetic inverse transform. Iterates the latitude until the update
/// falls below 1e-12 rad. Throws on the degenerate input at the Earth center.
inline GeodeticCoord ecef_to_lla(const EcefVector& p) {
    if (!p.finite()) throw std::invalid_argument("ecef_to_lla: non-finite input");
    const double rho = std::hypot(p.x, p.y);
    if (rho == 0.0 && p.z == 0.0)
        throw std::invalid_argument("ecef_to_lla: degenerate input at Earth center");

    const double e2 = wgs84::eccentricity_sq;
    const double a = wgs84::semi_major_axis_m;

    double lon = (rho > 0.0) ? std::atan2(p.y, p.x) : 0.0;
    double lat = std::atan2(p.z, rho * (1.0 - e2));
    double n = a;
    for (int it = 0; it < 32; ++it) {
        const double slat = std::sin(lat);
        n = a / std::sqrt(1.0 - e2 * slat * slat);
        const double next = std::atan2(p.z + e2 * n * slat, rho);
        const double delta = std::abs(next - lat);
        lat = next;
        if (delta < 1e-12) break;
    }
    const double slat = std::sin(lat), clat = std::cos(lat);
    n = a / std::sqrt(1.0 - e2 * slat * slat);
    const double alt = (std::abs(clat) > 1e-10) ? rho / clat - n : p.z / slat - n * (1.0 - e2);

    double lon_deg = rad2deg(lon);
    if (lon_deg >= 180.0) lon_deg -= 360.0;
    return {rad2deg(lat), lon_deg, alt};
}

/// Closed lat/lon rectangle.
struct LatLonBounds {
    double lat_min_deg = 0.0;
    double lat_max_deg = 0.0;
    double lon_min_deg = 0.0;
    double lon_max_deg = 0.0;

    void validate() const {
        GeodeticCoord{lat_min_deg, lon_min_deg, 0.0}.validate();
        GeodeticCoord{lat_max_deg, lon_min_deg, 0.0}.validate();
        if (lat_max_deg < lat_min_deg || lon_max_deg < lon_min_deg)
            throw std::invalid_argument("LatLonBounds: max < min");
    }
};

struct GridAxis {
    double start_deg = 0.0;
    double step_deg = 0.0;
    std::size_t count = 0;

    double value(std::size_t i) const { return start_deg + static_cast<double>(i) * step_deg; }
    bool operator==(const GridAxis&) const = default;
};

/// Geodetic lattice of candidate emitter positions with eagerly converted
/// ECEF points, flattened lat-major (latitude is the slow index).
struct CandidateGrid {
    GridAxis lat;
    GridAxis lon;
    double altitude_m = 0.0;
    std::vector<EcefVector> points;

    std::size_t size() const { return lat.count * lon.count; }
    std::size_t index(std::size_t ilat, std::size_t ilon) const { return ilat * lon.count + ilon; }
    std::pair<std::size_t, std::size_t> unindex(std::size_t flat) const {
        return {flat / lon.count, flat % lon.count};
    }
    GeodeticCoord lattice_coord(std::size_t ilat, std::size_t ilon) const {
        return {lat.value(ilat), lon.value(ilon), altitude_m};
    }
    bool same_lattice(const CandidateGrid& other) const {
        return lat == other.lat && lon == other.lon && altitude_m == other.altitude_m;
    }
};

inline constexpr std::size_t default_grid_point_cap = 20'000'000;

namespace detail {
// floor(span/step) + 1 with a guard against the quotient landing an ulp
// below an integer (10/0.01 must give 1001 points, not 1000).
inline std::size_t axis_count(double span, double step) {
    return static_cast<std::size_t>(std::floor(span / step + 1e-6)) + 1;
}
}  // namespace detail

/// Builds the candidate lattice over `bounds` at `spacing_deg`, one fixed
/// altitude for the whole grid. Grids larger than `point_cap` are rejected.
inline CandidateGrid build_candidate_grid(const LatLonBounds& bounds, double spacing_deg,
                                          double altitude_m = 0.0,
                                          std::size_t point_cap = default_grid_point_cap) {
    bounds.validate();
    if (!(spacing_deg > 0.0)) throw std::invalid_argument("build_candidate_grid: spacing_deg <= 0");
    if (!std::isfinite(altitude_m))
        throw std::invalid_argument("build_candidate_grid: altitude_m not finite");

    CandidateGrid grid;
    grid.lat = {bounds.lat_min_deg, spacing_deg,
                detail::axis_count(bounds.lat_max_deg - bounds.lat_min_deg, spacing_deg)};
    grid.lon = {bounds.lon_min_deg, spacing_deg,
                detail::axis_count(bounds.lon_max_deg - bounds.lon_min_deg, spacing_deg)};
    grid.altitude_m = altitude_m;

    const std::size_t n = grid.lat.count * grid.lon.count;
    if (n > point_cap)
        throw std::invalid_argument("build_candidate_grid: " + std::to_string(n) +
                                    " points exceed cap of " + std::to_string(point_cap));

    grid.points.reserve(n);
    for (std::size_t i = 0; i < grid.lat.count; ++i)
        for (std::size_t j = 0; j < grid.lon.count; ++j)
            grid.points.push_back(lla_to_ecef(grid.lattice_coord(i, j)));
    return grid;
}

}  // namespace digeo
