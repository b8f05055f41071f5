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
// Welch-averaged PSD and short-time spectrogram for plot emission. Hann
// window, 50% overlap by default, two-sided frequency axes centered on 0.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "digeo/capture.hpp"
#include "digeo/fft.hpp"

namespace digeo {

/// Two-sided power spectral density, frequency ascending from -f_s/2.
struct PsdEstimate {
    std::vector<double> freq_hz;
    std::vector<double> density;  ///< power per hertz
    double bin_width_hz = 0.0;

    double total_power() const {
        double sum = 0.0;
        for (const double d : density) sum += d;
        return sum * bin_width_hz;
    }
    std::size_t peak_bin() const {
        return static_cast<std::size_t>(
            std::max_element(density.begin(), density.end()) - density.begin());
    }
};

/// Short-time spectral magnitudes; frames along time, bins ascending from
/// -f_s/2 within each frame.
struct Spectrogram {
    std::vector<double> freq_hz;
    std::vector<double> frame_time_s;               ///< frame-center local times
    std::vector<std::vector<double>> magnitudes;    ///< [frame][bin]

    std::size_t frame_count() const { return magnitudes.size(); }
    std::size_t peak_bin(std::size_t frame) const {
        const auto& m = magnitudes.at(frame);
        return static_cast<std::size_t>(std::max_element(m.begin(), m.end()) - m.begin());
    }
    double peak_freq_hz(std::size_t frame) const { return freq_hz[peak_bin(frame)]; }
};

namespace detail {

inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(n)));
    return w;
}

inline std::vector<double> fftshift_freqs(std::size_t n, double sample_rate_hz) {
    std::vector<double> f(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = static_cast<double>(static_cast<std::ptrdiff_t>(i) - half) * sample_rate_hz /
               static_cast<double>(n);
    return f;
}

// windowed segment FFT, output fftshifted
inline std::vector<cplx> windowed_fft(const std::vector<cplx>& samples, std::size_t offset,
                                      const std::vector<double>& window) {
    const std::size_t n = window.size();
    std::vector<cplx> seg(n);
    for (std::size_t i = 0; i < n; ++i) seg[i] = samples[offset + i] * window[i];
    fft_radix2(seg, false);
    std::rotate(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(n - n / 2), seg.end());
    return seg;
}

}  // namespace detail

/// Averaged-periodogram PSD over Hann-windowed segments with `hop` sample
/// advance (default 50% overlap). Integrated density matches the mean-square
/// sample value.
inline PsdEstimate estimate_psd(const BasebandCapture& capture, std::size_t segment_len,
                                std::size_t hop = 0) {
    capture.validate();
    if (segment_len == 0 || segment_len > capture.size())
        throw std::invalid_argument("estimate_psd: segment_len out of range");
    if (!detail::is_pow2(segment_len))
        throw std::invalid_argument("estimate_psd: segment_len must be a power of two");
    if (hop == 0) hop = segment_len / 2;
    if (hop == 0) hop = 1;

    const std::vector<double> window = detail::hann_window(segment_len);
    double window_power = 0.0;
    for (const double w : window) window_power += w * w;

    PsdEstimate psd;
    psd.freq_hz = detail::fftshift_freqs(segment_len, capture.sample_rate_hz);
    psd.bin_width_hz = capture.sample_rate_hz / static_cast<double>(segment_len);
    psd.density.assign(segment_len, 0.0);

    std::size_t segments = 0;
    for (std::size_t off = 0; off + segment_len <= capture.size(); off += hop) {
        const std::vector<cplx> spec = detail::windowed_fft(capture.samples, off, window);
        for (std::size_t k = 0; k < segment_len; ++k) psd.density[k] += std::norm(spec[k]);
        ++segments;
    }
    const double scale = 1.0 / (static_cast<double>(segments) * capture.sample_rate_hz * window_power);
    for (double& d : psd.density) d *= scale;
    return psd;
}

/// Hann-windowed short-time magnitude spectra; frame count is
/// floor((N - window_len)/hop) + 1.
inline Spectrogram compute_spectrogram(const BasebandCapture& capture, std::size_t window_len,
                                       std::size_t hop) {
    capture.validate();
    if (window_len == 0 || window_len > capture.size())
        throw std::invalid_argument("compute_spectrogram: window_len out of range");
    if (!detail::is_pow2(window_len))
        throw std::invalid_argument("compute_spectrogram: window_len must be a power of two");
    if (hop < 1) throw std::invalid_argument("compute_spectrogram: hop < 1");

    const std::vector<double> window = detail::hann_window(window_len);
    Spectrogram sg;
    sg.freq_hz = detail::fftshift_freqs(window_len, capture.sample_rate_hz);

    const std::size_t frames = (capture.size() - window_len) / hop + 1;
    sg.magnitudes.reserve(frames);
    sg.frame_time_s.reserve(frames);
    for (std::size_t frame = 0; frame < frames; ++frame) {
        const std::size_t off = frame * hop;
        const std::vector<cplx> spec = detail::windowed_fft(capture.samples, off, window);
        std::vector<double> mags(window_len);
        for (std::size_t k = 0; k < window_len; ++k) mags[k] = std::abs(spec[k]);
        sg.magnitudes.push_back(std::move(mags));
        sg.frame_time_s.push_back(
            (static_cast<double>(off) + static_cast<double>(window_len) / 2.0) /
            capture.sample_rate_hz);
    }
    return sg;
}

}  // namespace digeo
