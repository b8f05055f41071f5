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
#include <span>
#include <stdexcept>
#include <vector>

#include "digeo/state.hpp"

namespace digeo {

inline constexpr double earth_mu_m3_s2 = 3.986004418e14;

/// Circular-orbit receiver trajectory generator. Two-body circular orbit at
/// a + alt_m, rotated by inclination then RAAN. Earth rotation over the short
/// capture spans handled here is neglected, so the frame doubles as ECEF.
struct CircularOrbit {
    double alt_m = 550e3;
    double inclination_deg = 53.0;
    double raan_deg = 0.0;
    double phase_deg = 0.0;  ///< argument of latitude at epoch 0
};

inline std::vector<EcefStateVector> propagate_circular_orbit(const CircularOrbit& orbit,
                                                             std::span<const double> epochs_s) {
    if (!(orbit.alt_m >= 200e3 && orbit.alt_m <= 2000e3))
        throw std::invalid_argument("propagate_circular_orbit: altitude out of [200 km, 2000 km]");

    const double radius = wgs84::semi_major_axis_m + orbit.alt_m;
    const double mean_motion = std::sqrt(earth_mu_m3_s2 / (radius * radius * radius));
    const double speed = radius * mean_motion;

    const double inc = deg2rad(orbit.inclination_deg);
    const double raan = deg2rad(orbit.raan_deg);
    const double ci = std::cos(inc), si = std::sin(inc);
    const double co = std::cos(raan), so = std::sin(raan);

    // plane -> frame: R_z(raan) * R_x(inc)
    const auto rotate = [&](double px, double py, double pz) {
        const double x1 = px;
        const double y1 = ci * py - si * pz;
        const double z1 = si * py + ci * pz;
        return EcefVector{co * x1 - so * y1, so * x1 + co * y1, z1};
    };

    std::vector<EcefStateVector> out;
    out.reserve(epochs_s.size());
    for (const double t : epochs_s) {
        const double u = deg2rad(orbit.phase_deg) + mean_motion * t;
        const double cu = std::cos(u), su = std::sin(u);
        EcefStateVector s;
        s.position = rotate(radius * cu, radius * su, 0.0);
        s.velocity = rotate(-speed * su, speed * cu, 0.0);
        out.push_back(s);
    }
    return out;
}

inline std::vector<EcefStateVector> propagate_circular_orbit(double alt_m, double inclination_deg,
                                                             double raan_deg, double phase_deg,
                                                             std::span<const double> epochs_s) {
    return propagate_circular_orbit(CircularOrbit{alt_m, inclination_deg, raan_deg, phase_deg},
                                    epochs_s);
}

}  // namespace digeo
