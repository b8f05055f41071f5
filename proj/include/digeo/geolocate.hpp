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
// Single-step direct geolocation over a candidate grid: per snapshot, the
// expected TDOA/FDOA of every candidate is predicted from the receiver
// states and the raw captures are correlated accordingly through a compute
// backend; per-snapshot grids are then noncoherently accumulated and
// thresholded.

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "digeo/backend.hpp"
#include "digeo/correlate.hpp"
#include "digeo/scene.hpp"

namespace digeo {

/// Correlation grid for one snapshot and one receiver pair, evaluated
/// batch-by-batch through the supplied backend.
inline CorrelationGrid correlate_snapshot(std::shared_ptr<const CandidateGrid> grid,
                                          const Snapshot& snapshot,
                                          std::pair<std::size_t, std::size_t> pair,
                                          const CorrelationBackend& backend,
                                          std::size_t batch_size = 8,
                                          std::uint64_t memory_budget_bytes =
                                              default_memory_budget_bytes) {
    if (!grid || grid->size() == 0) throw std::invalid_argument("correlate_snapshot: empty grid");
    const auto [i, j] = pair;
    if (i >= snapshot.captures.size() || j >= snapshot.captures.size() || i == j)
        throw std::invalid_argument("correlate_snapshot: bad receiver pair");

    const BasebandCapture& y1 = snapshot.captures[i];
    const BasebandCapture& y2 = snapshot.captures[j];
    const double wl = wavelength_m(y1.center_freq_hz);
    const double fs = y1.sample_rate_hz;
    const std::uint64_t capture_bytes =
        static_cast<std::uint64_t>(y1.samples.size() + y2.samples.size()) * sizeof(cplx);
    const BatchPlan plan = plan_batches(grid->size(), batch_size, memory_budget_bytes,
                                        capture_bytes);

    const auto session = backend.stage(y1, y2);
    CorrelationGrid out{std::move(grid), std::vector<double>(plan.n_points, 0.0)};

    std::vector<PairOffsets> offsets(plan.batch_size);
    for (std::size_t b = 0; b < plan.batch_count(); ++b) {
        const auto [begin, end] = plan.batch_range(b);
        offsets.resize(end - begin);
        for (std::size_t p = begin; p < end; ++p)
            offsets[p - begin] = predict_pair_offsets(out.grid->points[p], snapshot.states[i],
                                                      snapshot.states[j], fs, wl);
        session->correlate_batch(offsets, std::span<double>(out.values).subspan(begin, end - begin));
    }
    return out;
}

/// Correlation grid for one snapshot summed over every unique receiver pair.
/// With two receivers this is the single pair (0, 1).
inline CorrelationGrid correlate_snapshot_all_pairs(std::shared_ptr<const CandidateGrid> grid,
                                                    const Snapshot& snapshot,
                                                    const CorrelationBackend& backend,
                                                    std::size_t batch_size = 8,
                                                    std::uint64_t memory_budget_bytes =
                                                        default_memory_budget_bytes) {
    const std::size_t n_rx = snapshot.captures.size();
    if (n_rx < 2) throw std::invalid_argument("correlate_snapshot_all_pairs: need >= 2 receivers");
    std::vector<CorrelationGrid> pair_grids;
    for (std::size_t i = 0; i < n_rx; ++i)
        for (std::size_t j = i + 1; j < n_rx; ++j)
            pair_grids.push_back(
                correlate_snapshot(grid, snapshot, {i, j}, backend, batch_size,
                                   memory_budget_bytes));
    return accumulate_grids(pair_grids);
}

struct GeolocateOptions {
    std::string backend_name = "serial";
    unsigned workers = 0;  ///< 0 = hardware concurrency (parallel backend only)
    std::size_t batch_size = 8;
    std::uint64_t memory_budget_bytes = default_memory_budget_bytes;
    double k_sigma = 5.0;
    int exclusion_radius_cells = 5;
    bool normalize_per_snapshot = false;  ///< divide each grid by its median before summing
};

struct GeolocateResult {
    std::shared_ptr<const CandidateGrid> grid;
    std::vector<CorrelationGrid> per_snapshot;
    CorrelationGrid accumulated;
    std::vector<EmitterEstimate> detections;
};

namespace detail {

inline void normalize_by_median(CorrelationGrid& grid) {
    std::vector<double> sorted = grid.values;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2),
                     sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (median > 0.0)
        for (double& v : grid.values) v /= median;
}

}  // namespace detail

/// Full pipeline over already-simulated (or file-loaded) snapshots.
inline GeolocateResult geolocate_snapshots(const std::vector<Snapshot>& snapshots,
                                           std::shared_ptr<const CandidateGrid> grid,
                                           const GeolocateOptions& options = {}) {
    if (snapshots.empty()) throw std::invalid_argument("geolocate_snapshots: no snapshots");
    const auto backend = make_backend(options.backend_name, options.workers);

    GeolocateResult result;
    result.grid = grid;
    result.per_snapshot.reserve(snapshots.size());
    for (const Snapshot& snap : snapshots) {
        CorrelationGrid g = correlate_snapshot_all_pairs(grid, snap, *backend, options.batch_size,
                                                         options.memory_budget_bytes);
        if (options.normalize_per_snapshot) detail::normalize_by_median(g);
        result.per_snapshot.push_back(std::move(g));
    }
    result.accumulated = accumulate_grids(result.per_snapshot);
    result.detections =
        detect_emitters(result.accumulated, options.k_sigma, options.exclusion_radius_cells);
    return result;
}

}  // namespace digeo
