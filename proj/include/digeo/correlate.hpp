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
// Position-domain correlation:
//   S = | sum_k y1[k] conj(y2[k + tdoa]) exp(j 2 pi fdoa t_k) |
// with out-of-range shifted indices contributing zero, plus noncoherent
// grid accumulation and threshold detection of emitters.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "digeo/capture.hpp"
#include "digeo/geodesy.hpp"
#include "digeo/geometry.hpp"

namespace digeo {

namespace detail {

/// Correlation sum over the overlapping index range. Fixed ascending-k
/// evaluation order and double accumulation keep every backend bit-equal.
inline double correlate_kernel(std::span<const cplx> y1, std::span<const cplx> y2,
                               std::int64_t tdoa_samples, double fdoa_hz, double sample_rate_hz) {
    const auto n = static_cast<std::int64_t>(y1.size());
    const std::int64_t k_begin = std::max<std::int64_t>(0, -tdoa_samples);
    const std::int64_t k_end = std::min<std::int64_t>(n, n - tdoa_samples);
    if (k_begin >= k_end) return 0.0;

    const double step = 2.0 * std::numbers::pi * fdoa_hz / sample_rate_hz;
    const double rot_re = std::cos(step), rot_im = std::sin(step);
    const double phase0 = step * static_cast<double>(k_begin);
    double ph_re = std::cos(phase0), ph_im = std::sin(phase0);

    double acc_re = 0.0, acc_im = 0.0;
    const cplx* a = y1.data();
    const cplx* b = y2.data() + tdoa_samples;
    for (std::int64_t k = k_begin; k < k_end; ++k) {
        const double a_re = a[k].real(), a_im = a[k].imag();
        const double b_re = b[k].real(), b_im = -b[k].imag();  // conj
        const double p_re = a_re * b_re - a_im * b_im;
        const double p_im = a_re * b_im + a_im * b_re;
        acc_re += p_re * ph_re - p_im * ph_im;
        acc_im += p_re * ph_im + p_im * ph_re;
        const double next_re = ph_re * rot_re - ph_im * rot_im;
        ph_im = ph_re * rot_im + ph_im * rot_re;
        ph_re = next_re;
    }
    return std::sqrt(acc_re * acc_re + acc_im * acc_im);
}

}  // namespace detail

/// Position-domain correlation value for one candidate's expected offsets.
inline double correlate_point(const BasebandCapture& y1, const BasebandCapture& y2,
                              const PairOffsets& offsets) {
    y1.validate();
    y2.validate();
    if (y1.sample_rate_hz != y2.sample_rate_hz)
        throw std::invalid_argument("correlate_point: sample rates differ");
    if (y1.size() != y2.size())
        throw std::invalid_argument("correlate_point: sample counts differ");
    return detail::correlate_kernel(y1.samples, y2.samples, offsets.tdoa_samples, offsets.fdoa_hz,
                                    y1.sample_rate_hz);
}

/// Nonnegative correlation score per candidate of a shared grid.
struct CorrelationGrid {
    std::shared_ptr<const CandidateGrid> grid;
    std::vector<double> values;

    void validate() const {
        if (!grid) throw std::invalid_argument("CorrelationGrid: null grid");
        if (values.size() != grid->size())
            throw std::invalid_argument("CorrelationGrid: value count != grid size");
    }
};

/// Elementwise noncoherent sum of per-snapshot grids. All inputs must share
/// one candidate lattice.
inline CorrelationGrid accumulate_grids(std::span<const CorrelationGrid> grids) {
    if (grids.empty()) throw std::invalid_argument("accumulate_grids: no grids");
    grids.front().validate();
    CorrelationGrid out{grids.front().grid, grids.front().values};
    for (std::size_t i = 1; i < grids.size(); ++i) {
        grids[i].validate();
        if (!grids[i].grid->same_lattice(*out.grid))
            throw std::invalid_argument("accumulate_grids: mixed candidate grids");
        for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += grids[i].values[k];
    }
    return out;
}

/// A detected emitter: grid cell, geodetic location, accumulated score, and
/// the score's z-value against the grid statistics.
struct EmitterEstimate {
    GeodeticCoord location;
    std::size_t grid_index = 0;
    double score = 0.0;
    double score_zsigma = 0.0;
};

/// Thresholds the accumulated grid at mean + k_sigma * stddev and returns
/// local maxima above it, greedily accepted in descending score with a
/// Chebyshev exclusion radius in cells. A constant grid yields no detections.
inline std::vector<EmitterEstimate> detect_emitters(const CorrelationGrid& grid,
                                                    double k_sigma = 5.0,
                                                    int exclusion_radius_cells = 5) {
    grid.validate();
    if (exclusion_radius_cells < 0)
        throw std::invalid_argument("detect_emitters: negative exclusion radius");

    const std::vector<double>& v = grid.values;
    const auto n = static_cast<double>(v.size());
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (const double x : v) var += (x - mean) * (x - mean);
    var /= n;
    const double sigma = std::sqrt(var);
    if (sigma == 0.0) return {};

    const double threshold = mean + k_sigma * sigma;
    const auto n_lat = static_cast<std::ptrdiff_t>(grid.grid->lat.count);
    const auto n_lon = static_cast<std::ptrdiff_t>(grid.grid->lon.count);
    const auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
        return v[static_cast<std::size_t>(i * n_lon + j)];
    };

    struct Candidate {
        std::ptrdiff_t ilat, ilon;
        double score;
    };
    std::vector<Candidate> peaks;
    for (std::ptrdiff_t i = 0; i < n_lat; ++i) {
        for (std::ptrdiff_t j = 0; j < n_lon; ++j) {
            const double value = at(i, j);
            if (value <= threshold) continue;
            bool is_max = true;
            for (std::ptrdiff_t di = -1; di <= 1 && is_max; ++di)
                for (std::ptrdiff_t dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const std::ptrdiff_t ni = i + di, nj = j + dj;
                    if (ni < 0 || ni >= n_lat || nj < 0 || nj >= n_lon) continue;
                    if (at(ni, nj) > value) is_max = false;
                }
            if (is_max) peaks.push_back({i, j, value});
        }
    }
    std::sort(peaks.begin(), peaks.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.ilat * 1000000 + a.ilon < b.ilat * 1000000 + b.ilon;  // deterministic tie order
    });

    std::vector<EmitterEstimate> detections;
    std::vector<Candidate> accepted;
    for (const Candidate& c : peaks) {
        bool excluded = false;
        for (const Candidate& acc : accepted) {
            const auto dist =
                std::max(std::abs(c.ilat - acc.ilat), std::abs(c.ilon - acc.ilon));
            if (dist <= exclusion_radius_cells) {
                excluded = true;
                break;
            }
        }
        if (excluded) continue;
        accepted.push_back(c);
        EmitterEstimate est;
        est.location = grid.grid->lattice_coord(static_cast<std::size_t>(c.ilat),
                                                static_cast<std::size_t>(c.ilon));
        est.grid_index = grid.grid->index(static_cast<std::size_t>(c.ilat),
                                          static_cast<std::size_t>(c.ilon));
        est.score = c.score;
        est.score_zsigma = (c.score - mean) / sigma;
        detections.push_back(est);
    }
    return detections;
}

}  // namespace digeo
