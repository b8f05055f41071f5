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
// Scenario synthesis: per-receiver, per-snapshot baseband captures from
// emitter definitions and receiver trajectories. The channel applies
//     y(t) = A x(t - tau) exp(j 2 pi f t)
// with tau and f held constant over one snapshot, plus circular complex
// white Gaussian noise. Receivers are assumed time- and frequency-
// synchronized.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "digeo/capture.hpp"
#include "digeo/fft.hpp"
#include "digeo/geometry.hpp"
#include "digeo/orbit.hpp"
#include "digeo/waveform.hpp"

namespace digeo {

/// Stationary interference source. Received amplitude follows free-space
/// 1/range scaling anchored so that a receiver at ref_range_m sees
/// ref_snr_db against unit-variance noise.
struct EmitterDef {
    GeodeticCoord location;
    WaveformSpec waveform;
    double ref_snr_db = 0.0;
    double ref_range_m = 1.0;

    void validate() const {
        location.validate();
        if (!(ref_range_m > 0.0)) throw std::invalid_argument("EmitterDef: ref_range_m <= 0");
    }
    double amplitude_at(double range_m) const {
        return std::pow(10.0, ref_snr_db / 20.0) * ref_range_m / range_m;
    }
};

/// A receiver is either a circular-orbit definition or an explicit
/// per-snapshot state table.
using ReceiverDef = std::variant<CircularOrbit, std::vector<EcefStateVector>>;

/// Simultaneous captures from all receivers over one short interval.
struct Snapshot {
    double epoch_s = 0.0;
    std::vector<EcefStateVector> states;
    std::vector<BasebandCapture> captures;
};

struct Scenario {
    std::vector<ReceiverDef> receivers;
    std::vector<EmitterDef> emitters;
    std::size_t snapshot_count = 1;
    double snapshot_spacing_s = 1.0;
    double capture_duration_s = 0.05;
    double sample_rate_hz = 5e6;
    double center_freq_hz = gps_l1_freq_hz;
    double start_time_s = 0.0;
    std::uint64_t noise_seed = 0;
    double noise_power = 1.0;  ///< complex noise variance; 0 disables noise
    LatLonBounds grid_bounds;
    double grid_spacing_deg = 0.01;
    double grid_altitude_m = 0.0;

    void validate() const {
        if (receivers.size() < 2) throw std::invalid_argument("Scenario: need >= 2 receivers");
        if (snapshot_count < 1) throw std::invalid_argument("Scenario: snapshot_count < 1");
        if (!(capture_duration_s > 0.0 && capture_duration_s <= 0.05))
            throw std::invalid_argument(
                "Scenario: capture_duration_s must be in (0, 0.05] for snapshot constancy");
        if (!(snapshot_spacing_s > 0.0))
            throw std::invalid_argument("Scenario: snapshot_spacing_s <= 0");
        if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("Scenario: sample_rate_hz <= 0");
        if (!(center_freq_hz > 0.0)) throw std::invalid_argument("Scenario: center_freq_hz <= 0");
        if (!(noise_power >= 0.0)) throw std::invalid_argument("Scenario: noise_power < 0");
        for (const auto& e : emitters) e.validate();
        for (const auto& r : receivers)
            if (const auto* states = std::get_if<std::vector<EcefStateVector>>(&r);
                states && states->size() != snapshot_count)
                throw std::invalid_argument("Scenario: state table length != snapshot_count");
    }

    std::vector<double> snapshot_epochs() const {
        std::vector<double> epochs(snapshot_count);
        for (std::size_t i = 0; i < snapshot_count; ++i)
            epochs[i] = start_time_s + static_cast<double>(i) * snapshot_spacing_s;
        return epochs;
    }

    std::size_t samples_per_capture() const {
        return static_cast<std::size_t>(std::llround(capture_duration_s * sample_rate_hz));
    }
};

namespace detail {

inline std::uint64_t derive_seed(std::uint64_t noise_seed, std::size_t snapshot_index,
                                 std::size_t receiver_index) {
    std::uint64_t s = splitmix64(noise_seed);
    s = splitmix64(s ^ (0xA24BAED4963EE407ull + snapshot_index));
    s = splitmix64(s ^ (0x9FB21C651E98DF25ull + receiver_index));
    return s;
}

/// Unit-variance circular complex Gaussian via Box-Muller on mt19937_64.
class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}

    cplx operator()() {
        const double u1 = next_open_unit();
        const double u2 = next_open_unit();
        const double r = std::sqrt(-std::log(u1));
        return std::polar(r, 2.0 * std::numbers::pi * u2);
    }

private:
    double next_open_unit() {
        // (0, 1]: never returns 0, so log() stays finite
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 engine_;
};

/// Samples at each end of a transmit record that the fractional-delay filter
/// may corrupt; reads must stay this far inside the record.
inline constexpr std::size_t fractional_delay_guard = 128;

/// Advances every sample of `buf` by `frac` in [0, 1) of a sample period via
/// a linear phase ramp in the frequency domain. The guard region at both
/// ends is Hann-tapered first so the record's circular wrap stays smooth;
/// without it the edge discontinuity rings ~1e-5 deep into the interior.
inline void fractional_advance(std::vector<cplx>& buf, double frac) {
    if (frac == 0.0) return;
    const std::size_t padded = next_pow2(buf.size());
    std::vector<cplx> work(padded, cplx{0.0, 0.0});
    std::copy(buf.begin(), buf.end(), work.begin());
    const std::size_t guard = std::min(fractional_delay_guard, buf.size() / 2);
    for (std::size_t i = 0; i < guard; ++i) {
        const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) /
                                               static_cast<double>(guard)));
        work[i] *= w;
        work[buf.size() - 1 - i] *= w;
    }
    fft_radix2(work, false);
    const auto half = static_cast<std::ptrdiff_t>(padded / 2);
    for (std::size_t k = 0; k < padded; ++k) {
        const auto sk = static_cast<std::ptrdiff_t>(k);
        const double norm_freq =
            static_cast<double>(sk < half ? sk : sk - static_cast<std::ptrdiff_t>(padded)) /
            static_cast<double>(padded);
        work[k] *= std::polar(1.0, 2.0 * std::numbers::pi * norm_freq * frac);
    }
    fft_radix2(work, true);
    std::copy(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(buf.size()), buf.begin());
}

}  // namespace detail

/// Applies the snapshot-constant channel to a transmit record: delay by the
/// candidate geometry's tau (integer shift plus frequency-domain fractional
/// correction), rotate by the Doppler, scale by the 1/range amplitude.
/// The output window [rx_start_time_s, rx_start_time_s + n/f_s) must map
/// inside the transmit record or the call throws.
inline BasebandCapture synthesize_received(const EmitterDef& emitter,
                                           const EcefStateVector& receiver,
                                           const BasebandCapture& transmit,
                                           double rx_start_time_s, std::size_t rx_sample_count) {
    emitter.validate();
    receiver.validate();
    transmit.validate();
    if (rx_sample_count == 0) throw std::invalid_argument("synthesize_received: empty output");

    const double fs = transmit.sample_rate_hz;
    const GeometryPrediction geo = predict_geometry(
        lla_to_ecef(emitter.location), receiver, wavelength_m(transmit.center_freq_hz));

    // transmit-buffer index of output sample 0, split integer + fractional
    const double offset = (rx_start_time_s - geo.delay_s - transmit.start_time_s) * fs;
    const double base = std::floor(offset);
    const double frac = offset - base;
    const auto shift = static_cast<std::ptrdiff_t>(base);

    const auto guard = static_cast<std::ptrdiff_t>(
        std::min(detail::fractional_delay_guard, transmit.size() / 2));
    const auto last = shift + static_cast<std::ptrdiff_t>(rx_sample_count - 1) + (frac > 0.0 ? 1 : 0);
    if (shift < guard || last >= static_cast<std::ptrdiff_t>(transmit.size()) - guard)
        throw std::invalid_argument(
            "synthesize_received: applied delay plus the filter guard exceeds the transmit "
            "buffer");

    // fractional part realized as an advance of the transmit samples
    std::vector<cplx> delayed(transmit.samples);
    detail::fractional_advance(delayed, frac);

    BasebandCapture out;
    out.sample_rate_hz = fs;
    out.start_time_s = rx_start_time_s;
    out.center_freq_hz = transmit.center_freq_hz;
    out.samples.resize(rx_sample_count);

    const double amplitude = emitter.amplitude_at(geo.range_m);
    const cplx rotation = std::polar(1.0, 2.0 * std::numbers::pi * geo.doppler_hz / fs);
    cplx phasor{1.0, 0.0};
    for (std::size_t k = 0; k < rx_sample_count; ++k) {
        out.samples[k] =
            amplitude * delayed[static_cast<std::size_t>(shift) + k] * phasor;
        phasor *= rotation;
    }
    return out;
}

/// Receiver states for every snapshot epoch.
inline std::vector<std::vector<EcefStateVector>> receiver_states(const Scenario& scenario) {
    const std::vector<double> epochs = scenario.snapshot_epochs();
    std::vector<std::vector<EcefStateVector>> states;  // [receiver][snapshot]
    states.reserve(scenario.receivers.size());
    for (const auto& rx : scenario.receivers) {
        if (const auto* orbit = std::get_if<CircularOrbit>(&rx))
            states.push_back(propagate_circular_orbit(*orbit, epochs));
        else
            states.push_back(std::get<std::vector<EcefStateVector>>(rx));
    }
    return states;
}

/// Synthesizes all snapshots: per receiver the sum of every emitter's channel
/// output plus seeded white noise. Snapshots are independent given the
/// scenario, and per-(snapshot, receiver) noise seeds are derived from the
/// scenario seed so results do not depend on evaluation order.
inline std::vector<Snapshot> simulate_scenario(const Scenario& scenario) {
    scenario.validate();

    const std::vector<double> epochs = scenario.snapshot_epochs();
    const std::vector<std::vector<EcefStateVector>> states = receiver_states(scenario);
    const std::size_t n_rx = scenario.receivers.size();
    const std::size_t n_samples = scenario.samples_per_capture();
    const double fs = scenario.sample_rate_hz;
    const double wl = wavelength_m(scenario.center_freq_hz);

    std::vector<Snapshot> snapshots(scenario.snapshot_count);
    for (std::size_t si = 0; si < scenario.snapshot_count; ++si) {
        Snapshot& snap = snapshots[si];
        snap.epoch_s = epochs[si];
        snap.states.reserve(n_rx);
        for (std::size_t ri = 0; ri < n_rx; ++ri) snap.states.push_back(states[ri][si]);

        snap.captures.resize(n_rx);
        for (std::size_t ri = 0; ri < n_rx; ++ri) {
            BasebandCapture& cap = snap.captures[ri];
            cap.sample_rate_hz = fs;
            cap.start_time_s = snap.epoch_s;
            cap.center_freq_hz = scenario.center_freq_hz;
            cap.samples.assign(n_samples, cplx{0.0, 0.0});
        }

        for (const auto& emitter : scenario.emitters) {
            // pad sized per emitter so each contribution is framed the same
            // way no matter which other emitters are present
            const EcefVector pos = lla_to_ecef(emitter.location);
            double max_delay_s = 0.0;
            for (const auto& state : snap.states)
                max_delay_s = std::max(max_delay_s, predict_geometry(pos, state, wl).delay_s);
            const double pad_s = max_delay_s + 512.0 / fs;

            BasebandCapture transmit =
                generate_waveform(emitter.waveform, fs, scenario.capture_duration_s + 2.0 * pad_s,
                                  snap.epoch_s - pad_s);
            transmit.center_freq_hz = scenario.center_freq_hz;
            for (std::size_t ri = 0; ri < n_rx; ++ri) {
                const BasebandCapture received = synthesize_received(
                    emitter, snap.states[ri], transmit, snap.epoch_s, n_samples);
                for (std::size_t k = 0; k < n_samples; ++k)
                    snap.captures[ri].samples[k] += received.samples[k];
            }
        }

        if (scenario.noise_power > 0.0) {
            const double sigma = std::sqrt(scenario.noise_power);
            for (std::size_t ri = 0; ri < n_rx; ++ri) {
                detail::GaussianNoise noise(
                    detail::derive_seed(scenario.noise_seed, si, ri));
                for (auto& sample : snap.captures[ri].samples) sample += sigma * noise();
            }
        }
    }
    return snapshots;
}

}  // namespace digeo
