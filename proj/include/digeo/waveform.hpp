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
// Baseband generators for the four interference waveforms: GPS L1 C/A
// spoofing, pure tone, repeating chirp, and sawtooth (chirp followed by its
// conjugate). All generators are pure functions of (spec, f_s, duration,
// start time) and emit constant-modulus samples.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "digeo/ca_code.hpp"
#include "digeo/capture.hpp"

namespace digeo {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Random-access +1/-1 navigation bit for any (possibly negative) bit index.
inline double nav_bit(std::uint64_t seed, std::int64_t bit_index) {
    const std::uint64_t h = splitmix64(seed ^ (static_cast<std::uint64_t>(bit_index) *
                                               0xD1B54A32D192ED03ull));
    return (h >> 63) ? -1.0 : 1.0;
}

// floor with a guard for products like t * chip_rate that should land exactly
// on an integer but sit an ulp below it; 1e-6 of a chip is far below any
// physical boundary of interest.
inline std::int64_t floor_index(double value) {
    return static_cast<std::int64_t>(std::floor(value + 1e-6));
}

}  // namespace detail

struct SpooferSpec {
    int prn = 1;                     ///< 1..32
    std::uint64_t data_seed = 0;     ///< seeds the pseudorandom nav-bit stream
    static constexpr double chip_rate_hz = ca_chip_rate_hz;
    static constexpr double nav_rate_hz = nav_bit_rate_hz;

    void validate() const {
        if (prn < 1 || prn > 32) throw std::invalid_argument("SpooferSpec: prn out of 1..32");
    }
};

struct ToneSpec {
    double offset_hz = 0.0;  ///< baseband offset from the carrier
};

struct ChirpSpec {
    double bandwidth_hz = 0.0;
    double period_s = 0.0;

    void validate() const {
        if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("ChirpSpec: bandwidth_hz <= 0");
        if (!(period_s > 0.0)) throw std::invalid_argument("ChirpSpec: period_s <= 0");
    }
};

struct SawtoothSpec {
    double bandwidth_hz = 0.0;
    double chirp_period_s = 0.0;  ///< half the full sawtooth period

    double full_period_s() const { return 2.0 * chirp_period_s; }
    void validate() const {
        if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("SawtoothSpec: bandwidth_hz <= 0");
        if (!(chirp_period_s > 0.0))
            throw std::invalid_argument("SawtoothSpec: chirp_period_s <= 0");
    }
};

using WaveformSpec = std::variant<SpooferSpec, ToneSpec, ChirpSpec, SawtoothSpec>;

namespace detail {

inline std::size_t sample_count(double sample_rate_hz, double duration_s) {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("waveform: sample_rate_hz <= 0");
    if (!(duration_s > 0.0)) throw std::invalid_argument("waveform: duration_s <= 0");
    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n == 0) throw std::invalid_argument("waveform: duration shorter than one sample");
    return n;
}

inline BasebandCapture make_capture(double sample_rate_hz, double duration_s,
                                    double start_time_s) {
    BasebandCapture cap;
    cap.sample_rate_hz = sample_rate_hz;
    cap.start_time_s = start_time_s;
    // GPS L1 by default; scene-sim overwrites this with the scenario carrier.
    cap.center_freq_hz = 1575.42e6;
    cap.samples.resize(sample_count(sample_rate_hz, duration_s));
    return cap;
}

/// Chirp phase within one period: 2*pi*(B/(2T) u^2 - (B/2) u), u = t mod T.
inline double chirp_phase(double t, double bandwidth_hz, double period_s) {
    const double cycles = t / period_s;
    const double u = (cycles - std::floor(cycles)) * period_s;
    return 2.0 * std::numbers::pi *
           (bandwidth_hz / (2.0 * period_s) * u * u - 0.5 * bandwidth_hz * u);
}

}  // namespace detail

/// C/A-spread BPSK spoofing signal: seeded 50 bps nav bits times the PRN's
/// 1023-chip code at 1.023 Mcps, zero-order-hold chip lookup, code period
/// repeating every millisecond.
inline BasebandCapture generate_spoofer(const SpooferSpec& spec, double sample_rate_hz,
                                        double duration_s, double start_time_s = 0.0) {
    spec.validate();
    BasebandCapture cap = detail::make_capture(sample_rate_hz, duration_s, start_time_s);
    const ChipSequence chips = generate_ca_code(spec.prn);
    const double ts = 1.0 / sample_rate_hz;
    for (std::size_t k = 0; k < cap.samples.size(); ++k) {
        const double t = start_time_s + static_cast<double>(k) * ts;
        const std::int64_t chip_index = detail::floor_index(t * SpooferSpec::chip_rate_hz);
        const std::int64_t wrapped =
            ((chip_index % static_cast<std::int64_t>(ca_code_length)) +
             static_cast<std::int64_t>(ca_code_length)) %
            static_cast<std::int64_t>(ca_code_length);
        const double chip = chips[static_cast<std::size_t>(wrapped)];
        const double bit =
            detail::nav_bit(spec.data_seed, detail::floor_index(t * SpooferSpec::nav_rate_hz));
        cap.samples[k] = cplx{chip * bit, 0.0};
    }
    return cap;
}

/// Constant tone at a fixed baseband offset; offset 0 is the pure carrier.
inline BasebandCapture generate_tone(const ToneSpec& spec, double sample_rate_hz,
                                     double duration_s, double start_time_s = 0.0) {
    if (!(std::abs(spec.offset_hz) < sample_rate_hz / 2.0))
        throw std::invalid_argument("generate_tone: offset beyond Nyquist");
    BasebandCapture cap = detail::make_capture(sample_rate_hz, duration_s, start_time_s);
    const double ts = 1.0 / sample_rate_hz;
    for (std::size_t k = 0; k < cap.samples.size(); ++k) {
        const double t = start_time_s + static_cast<double>(k) * ts;
        cap.samples[k] = std::polar(1.0, 2.0 * std::numbers::pi * spec.offset_hz * t);
    }
    return cap;
}

/// Repeating linear-FM chirp sweeping -B/2 .. +B/2 once per period.
inline BasebandCapture generate_chirp(const ChirpSpec& spec, double sample_rate_hz,
                                      double duration_s, double start_time_s = 0.0) {
    spec.validate();
    if (!(spec.bandwidth_hz < sample_rate_hz))
        throw std::invalid_argument("generate_chirp: bandwidth must be below the sample rate");
    BasebandCapture cap = detail::make_capture(sample_rate_hz, duration_s, start_time_s);
    const double ts = 1.0 / sample_rate_hz;
    for (std::size_t k = 0; k < cap.samples.size(); ++k) {
        const double t = start_time_s + static_cast<double>(k) * ts;
        cap.samples[k] = std::polar(1.0, detail::chirp_phase(t, spec.bandwidth_hz, spec.period_s));
    }
    return cap;
}

/// Sawtooth: one chirp period followed by its complex conjugate, full period
/// twice the chirp period.
inline BasebandCapture generate_sawtooth(const SawtoothSpec& spec, double sample_rate_hz,
                                         double duration_s, double start_time_s = 0.0) {
    spec.validate();
    if (!(spec.bandwidth_hz < sample_rate_hz))
        throw std::invalid_argument("generate_sawtooth: bandwidth must be below the sample rate");
    BasebandCapture cap = detail::make_capture(sample_rate_hz, duration_s, start_time_s);
    const double ts = 1.0 / sample_rate_hz;
    const double full = spec.full_period_s();
    for (std::size_t k = 0; k < cap.samples.size(); ++k) {
        const double t = start_time_s + static_cast<double>(k) * ts;
        const double cycles = t / full;
        const double v = (cycles - std::floor(cycles)) * full;
        const double phase =
            detail::chirp_phase(v < spec.chirp_period_s ? v : v - spec.chirp_period_s,
                                spec.bandwidth_hz, spec.chirp_period_s);
        cap.samples[k] = std::polar(1.0, v < spec.chirp_period_s ? phase : -phase);
    }
    return cap;
}

inline BasebandCapture generate_waveform(const WaveformSpec& spec, double sample_rate_hz,
                                         double duration_s, double start_time_s = 0.0) {
    return std::visit(
        [&](const auto& s) -> BasebandCapture {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SpooferSpec>)
                return generate_spoofer(s, sample_rate_hz, duration_s, start_time_s);
            else if constexpr (std::is_same_v<T, ToneSpec>)
                return generate_tone(s, sample_rate_hz, duration_s, start_time_s);
            else if constexpr (std::is_same_v<T, ChirpSpec>)
                return generate_chirp(s, sample_rate_hz, duration_s, start_time_s);
            else
                return generate_sawtooth(s, sample_rate_hz, duration_s, start_time_s);
        },
        spec);
}

}  // namespace digeo
