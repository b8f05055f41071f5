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
//
// Delay/Doppler geometry between a candidate emitter position and a moving
// receiver, and the per-pair TDOA/FDOA offsets the correlator consumes.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "digeo/geodesy.hpp"
#include "digeo/state.hpp"

namespace digeo {

inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double gps_l1_freq_hz = 1575.42e6;

/// Carrier wavelength in meters for a given center frequency.
inline double wavelength_m(double center_freq_hz) {
    if (!(center_freq_hz > 0.0)) throw std::invalid_argument("wavelength_m: center_freq_hz <= 0");
    return speed_of_light_m_s / center_freq_hz;
}

/// Range, propagation delay, and Doppler of a stationary emitter candidate as
/// observed by one receiver. The range vector points emitter -> receiver and
/// the Doppler sign convention makes a closing receiver positive.
struct GeometryPrediction {
    double range_m = 0.0;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    EcefVector unit_range;
};

inline GeometryPrediction predict_geometry(const EcefVector& candidate,
                                           const EcefStateVector& receiver,
                                           double wavelength) {
    const EcefVector r = receiver.position - candidate;
    const double rho = r.norm();
    if (!(rho > 0.0))
        throw std::invalid_argument("predict_geometry: candidate coincides with receiver");
    GeometryPrediction out;
    out.range_m = rho;
    out.delay_s = rho / speed_of_light_m_s;
    out.unit_range = (1.0 / rho) * r;
    out.doppler_hz = -dot(out.unit_range, receiver.velocity) / wavelength;
    return out;
}

/// Expected inter-receiver offsets at one candidate point: TDOA rounded to
/// whole samples (ties away from zero) and FDOA in hertz.
struct PairOffsets {
    std::int64_t tdoa_samples = 0;
    double fdoa_hz = 0.0;
};

inline PairOffsets predict_pair_offsets(const EcefVector& candidate, const EcefStateVector& rx_i,
                                        const EcefStateVector& rx_j, double sample_rate_hz,
                                        double wavelength) {
    const GeometryPrediction gi = predict_geometry(candidate, rx_i, wavelength);
    const GeometryPrediction gj = predict_geometry(candidate, rx_j, wavelength);
    const double tdoa_s = gj.delay_s - gi.delay_s;
    PairOffsets out;
    out.tdoa_samples = std::llround(tdoa_s * sample_rate_hz);
    out.fdoa_hz = gj.doppler_hz - gi.doppler_hz;
    return out;
}

}  // namespace digeo
