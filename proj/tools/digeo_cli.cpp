// SPDX-License-Identifier: Apache-2.0
//
// digeo command-line front end: scenario simulation, direct geolocation,
// backend benchmarks, and PSD/spectrogram plot emission.
//
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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "digeo/digeo.hpp"

namespace fs = std::filesystem;

namespace {

std::string snapshot_iq_name(std::size_t snapshot, std::size_t receiver) {
    char name[64];
    std::snprintf(name, sizeof(name), "snap%03zu_rx%zu.dgiq", snapshot, receiver);
    return name;
}

std::string snapshot_grid_name(std::size_t snapshot) {
    char name[64];
    std::snprintf(name, sizeof(name), "grid_snap%03zu.dggr", snapshot);
    return name;
}

int run_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
    digeo::ScenarioConfig config = digeo::parse_scenario(config_path);
    if (seed_override) config.scenario.noise_seed = *seed_override;

    fs::create_directories(out_dir);
    const std::vector<digeo::Snapshot> snapshots = digeo::simulate_scenario(config.scenario);
    for (std::size_t si = 0; si < snapshots.size(); ++si)
        for (std::size_t ri = 0; ri < snapshots[si].captures.size(); ++ri)
            digeo::write_iq(snapshots[si].captures[ri],
                            fs::path(out_dir) / snapshot_iq_name(si, ri));

    std::cout << "wrote " << snapshots.size() * config.scenario.receivers.size()
              << " captures to " << out_dir << "\n";
    return 0;
}

std::vector<digeo::Snapshot> load_snapshots(const digeo::Scenario& scenario,
                                            const std::string& capture_dir) {
    const auto states = digeo::receiver_states(scenario);
    const std::vector<double> epochs = scenario.snapshot_epochs();
    std::vector<digeo::Snapshot> snapshots(scenario.snapshot_count);
    for (std::size_t si = 0; si < scenario.snapshot_count; ++si) {
        digeo::Snapshot& snap = snapshots[si];
        snap.epoch_s = epochs[si];
        for (std::size_t ri = 0; ri < scenario.receivers.size(); ++ri) {
            const fs::path path = fs::path(capture_dir) / snapshot_iq_name(si, ri);
            if (!fs::exists(path))
                throw std::runtime_error("missing capture file " + path.string() +
                                         " (expected from the scenario config)");
            digeo::BasebandCapture cap = digeo::read_iq(path);
            if (std::abs(cap.start_time_s - snap.epoch_s) > 1e-9)
                throw std::runtime_error("capture epoch mismatch in " + path.string());
            snap.states.push_back(states[ri][si]);
            snap.captures.push_back(std::move(cap));
        }
    }
    return snapshots;
}

int run_geolocate(const std::string& config_path, const std::string& capture_dir,
                  const std::string& out_dir, const std::string& backend_override,
                  std::optional<std::size_t> batch_override, std::optional<double> k_sigma_override,
                  unsigned workers) {
    digeo::ScenarioConfig config = digeo::parse_scenario(config_path);
    if (!backend_override.empty()) config.options.backend_name = backend_override;
    if (batch_override) config.options.batch_size = *batch_override;
    if (k_sigma_override) config.options.k_sigma = *k_sigma_override;
    config.options.workers = workers;

    const auto grid = std::make_shared<const digeo::CandidateGrid>(digeo::build_candidate_grid(
        config.scenario.grid_bounds, config.scenario.grid_spacing_deg,
        config.scenario.grid_altitude_m));
    const std::vector<digeo::Snapshot> snapshots = load_snapshots(config.scenario, capture_dir);

    const digeo::GeolocateResult result =
        digeo::geolocate_snapshots(snapshots, grid, config.options);

    fs::create_directories(out_dir);
    for (std::size_t si = 0; si < result.per_snapshot.size(); ++si) {
        digeo::write_grid(result.per_snapshot[si], fs::path(out_dir) / snapshot_grid_name(si),
                          digeo::GridFileFormat::binary);
        char heat[64];
        std::snprintf(heat, sizeof(heat), "heatmap_snap%03zu.pgm", si);
        digeo::render_heatmap(result.per_snapshot[si], fs::path(out_dir) / heat);
    }
    digeo::write_grid(result.accumulated, fs::path(out_dir) / "grid_accumulated.dggr",
                      digeo::GridFileFormat::binary);
    digeo::write_grid(result.accumulated, fs::path(out_dir) / "grid_accumulated.csv",
                      digeo::GridFileFormat::csv);
    digeo::render_heatmap(result.accumulated, fs::path(out_dir) / "heatmap_accumulated.pgm");
    digeo::write_detections_csv(result.detections, fs::path(out_dir) / "detections.csv");

    std::cout << result.detections.size() << " detections:\n";
    for (const auto& d : result.detections)
        std::cout << "  lat " << d.location.lat_deg << "  lon " << d.location.lon_deg
                  << "  score " << d.score << "  z " << d.score_zsigma << "\n";
    return 0;
}

int run_bench_scan(const std::string& config_path, std::size_t points, std::size_t samples,
                   std::size_t repetitions, const std::string& backend, unsigned workers,
                   const std::string& out_path) {
    const digeo::ScenarioConfig config = digeo::parse_scenario(config_path);
    digeo::BenchWorkload workload;
    workload.n_points = points;
    workload.capture_samples = samples;
    workload.sample_rate_hz = config.scenario.sample_rate_hz;
    workload.seed = config.scenario.noise_seed + 1;

    const digeo::BatchScanReport report = digeo::scan_batch_sizes(
        workload, digeo::default_coarse_batch_sizes(), 8, repetitions, backend, workers);
    std::ofstream(out_path) << digeo::to_json(report).dump(2) << "\n";
    std::cout << digeo::render_report(report);
    std::cout << "report written to " << out_path << "\n";
    return 0;
}

int run_bench_compare(const std::string& config_path, std::vector<std::size_t> point_counts,
                      std::size_t samples, std::size_t repetitions, std::size_t batch_size,
                      unsigned workers, const std::string& out_path) {
    const digeo::ScenarioConfig config = digeo::parse_scenario(config_path);
    digeo::BenchWorkload workload;
    workload.capture_samples = samples;
    workload.sample_rate_hz = config.scenario.sample_rate_hz;
    workload.seed = config.scenario.noise_seed + 1;
    if (point_counts.empty()) point_counts = {20'000, 50'000, 100'000};
    workload.n_points = point_counts.front();

    const digeo::SpeedupReport report = digeo::compare_backends(
        workload, point_counts, repetitions, batch_size, "serial", "parallel", workers);
    std::ofstream(out_path) << digeo::to_json(report).dump(2) << "\n";
    std::cout << digeo::render_report(report);
    std::cout << "report written to " << out_path << "\n";
    return report.valid ? 0 : 1;
}

int run_plot_psd(const std::string& iq_path, std::size_t segment, const std::string& out_path) {
    const digeo::BasebandCapture cap = digeo::read_iq(iq_path);
    const digeo::PsdEstimate psd = digeo::estimate_psd(cap, segment);
    std::string out = "freq_hz,density\n";
    char row[96];
    for (std::size_t i = 0; i < psd.freq_hz.size(); ++i) {
        std::snprintf(row, sizeof(row), "%.17g,%.17g\n", psd.freq_hz[i], psd.density[i]);
        out += row;
    }
    digeo::detail::write_file_bytes(out_path, out);
    std::cout << "psd written to " << out_path << "\n";
    return 0;
}

int run_plot_spectrogram(const std::string& iq_path, std::size_t window, std::size_t hop,
                         const std::string& out_path) {
    const digeo::BasebandCapture cap = digeo::read_iq(iq_path);
    const digeo::Spectrogram sg = digeo::compute_spectrogram(cap, window, hop);

    // 16-bit graymap: rows are frequency bins (low at the bottom), columns
    // are time frames, min -> 0 and max -> 65535.
    double lo = sg.magnitudes[0][0], hi = lo;
    for (const auto& frame : sg.magnitudes)
        for (const double m : frame) {
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    const double scale = (hi > lo) ? 65535.0 / (hi - lo) : 0.0;
    const std::size_t n_bins = sg.freq_hz.size();
    const std::size_t n_frames = sg.frame_count();
    std::string bytes =
        "P5\n" + std::to_string(n_frames) + " " + std::to_string(n_bins) + "\n65535\n";
    for (std::size_t row = 0; row < n_bins; ++row) {
        const std::size_t bin = n_bins - 1 - row;
        for (std::size_t frame = 0; frame < n_frames; ++frame) {
            const auto pixel = static_cast<std::uint32_t>(
                std::llround((sg.magnitudes[frame][bin] - lo) * scale));
            bytes.push_back(static_cast<char>((pixel >> 8) & 0xFF));
            bytes.push_back(static_cast<char>(pixel & 0xFF));
        }
    }
    digeo::detail::write_file_bytes(out_path, bytes);
    std::cout << "spectrogram written to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"digeo: GNSS interference capture simulation and direct geolocation"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config, sim_out = "sim_out";
    std::optional<std::uint64_t> sim_seed;
    auto* simulate = app.add_subcommand("simulate", "synthesize per-snapshot IQ captures");
    simulate->add_option("config", sim_config, "scenario config file")->required();
    simulate->add_option("-o,--out", sim_out, "output directory");
    simulate->add_option("--seed", sim_seed, "override the scenario noise seed");

    // geolocate
    std::string geo_config, geo_captures, geo_out = "geo_out", geo_backend;
    std::optional<std::size_t> geo_batch;
    std::optional<double> geo_k_sigma;
    unsigned geo_workers = 0;
    auto* geolocate = app.add_subcommand("geolocate", "run direct geolocation on captures");
    geolocate->add_option("config", geo_config, "scenario config file")->required();
    geolocate->add_option("captures", geo_captures, "directory of .dgiq captures")->required();
    geolocate->add_option("-o,--out", geo_out, "output directory");
    geolocate->add_option("--backend", geo_backend, "serial | parallel");
    geolocate->add_option("--batch-size", geo_batch, "candidate points per batch");
    geolocate->add_option("--k-sigma", geo_k_sigma, "detection threshold in grid sigmas");
    geolocate->add_option("--workers", geo_workers, "parallel backend worker count (0 = auto)");

    // bench scan / compare
    auto* bench = app.add_subcommand("bench", "backend benchmark harness");
    bench->require_subcommand(1);
    std::string scan_config, scan_backend = "parallel", scan_out = "batch_scan.json";
    std::size_t scan_points = 500'000, scan_samples = 4096, scan_reps = 5;
    unsigned scan_workers = 0;
    auto* scan = bench->add_subcommand("scan", "coarse+fine batch-size scan");
    scan->add_option("config", scan_config, "scenario config file")->required();
    scan->add_option("--points", scan_points, "candidate points in the workload");
    scan->add_option("--capture-samples", scan_samples, "samples per capture");
    scan->add_option("--repetitions", scan_reps, "timed repetitions per size (>= 3)");
    scan->add_option("--backend", scan_backend, "backend to scan");
    scan->add_option("--workers", scan_workers, "worker count (0 = auto)");
    scan->add_option("-o,--out", scan_out, "report JSON path");

    std::string cmp_config, cmp_out = "speedup.json";
    std::vector<std::size_t> cmp_points;
    std::size_t cmp_samples = 4096, cmp_reps = 10, cmp_batch = 8;
    unsigned cmp_workers = 0;
    auto* compare = bench->add_subcommand("compare", "serial vs parallel speedup");
    compare->add_option("config", cmp_config, "scenario config file")->required();
    compare->add_option("--points", cmp_points, "candidate-count rows");
    compare->add_option("--capture-samples", cmp_samples, "samples per capture");
    compare->add_option("--repetitions", cmp_reps, "timed repetitions per row (>= 3)");
    compare->add_option("--batch-size", cmp_batch, "candidate points per batch");
    compare->add_option("--workers", cmp_workers, "worker count (0 = auto)");
    compare->add_option("-o,--out", cmp_out, "report JSON path");

    // plot psd / spectrogram
    auto* plot = app.add_subcommand("plot", "PSD and spectrogram emission");
    plot->require_subcommand(1);
    std::string psd_iq, psd_out = "psd.csv";
    std::size_t psd_segment = 1024;
    auto* psd = plot->add_subcommand("psd", "averaged-periodogram PSD as CSV");
    psd->add_option("iq-file", psd_iq, ".dgiq capture")->required();
    psd->add_option("--segment", psd_segment, "segment length (power of two)");
    psd->add_option("-o,--out", psd_out, "output CSV path");

    std::string sg_iq, sg_out = "spectrogram.pgm";
    std::size_t sg_window = 256, sg_hop = 128;
    auto* spectrogram = plot->add_subcommand("spectrogram", "short-time magnitudes as 16-bit PGM");
    spectrogram->add_option("iq-file", sg_iq, ".dgiq capture")->required();
    spectrogram->add_option("--window", sg_window, "window length (power of two)");
    spectrogram->add_option("--hop", sg_hop, "hop in samples");
    spectrogram->add_option("-o,--out", sg_out, "output PGM path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(sim_config, sim_out, sim_seed);
        if (geolocate->parsed())
            return run_geolocate(geo_config, geo_captures, geo_out, geo_backend, geo_batch,
                                 geo_k_sigma, geo_workers);
        if (scan->parsed())
            return run_bench_scan(scan_config, scan_points, scan_samples, scan_reps, scan_backend,
                                  scan_workers, scan_out);
        if (compare->parsed())
            return run_bench_compare(cmp_config, cmp_points, cmp_samples, cmp_reps, cmp_batch,
                                     cmp_workers, cmp_out);
        if (psd->parsed()) return run_plot_psd(psd_iq, psd_segment, psd_out);
        if (spectrogram->parsed()) return run_plot_spectrogram(sg_iq, sg_window, sg_hop, sg_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
