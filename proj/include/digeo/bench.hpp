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
// Benchmark harness for the correlation backends: a coarse-then-fine batch
// size scan and a serial-vs-parallel comparison with a built-in output
// equivalence check. Wall-clock times, warm-up excluded, mean and median
// over the configured repetitions. Reports serialize to JSON and render
// back to text without rerunning.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "digeo/backend.hpp"

namespace digeo {

/// Synthetic correlation workload: seeded random captures and candidate
/// offsets. Regenerating with the same parameters gives identical inputs.
struct BenchWorkload {
    std::size_t n_points = 500'000;
    std::size_t capture_samples = 4096;
    double sample_rate_hz = 5e6;
    std::uint64_t seed = 1;

    void validate() const {
        if (n_points < 10'000)
            throw std::invalid_argument(
                "BenchWorkload: fewer than 1e4 candidate points is below the timing noise floor");
        if (capture_samples < 2) throw std::invalid_argument("BenchWorkload: capture too short");
        if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("BenchWorkload: bad sample rate");
    }
};

namespace detail {

struct WorkloadData {
    BasebandCapture y1, y2;
    std::vector<PairOffsets> offsets;
};

inline WorkloadData build_workload(const BenchWorkload& workload) {
    workload.validate();
    std::mt19937_64 engine(workload.seed);
    const auto uniform = [&](double lo, double hi) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };

    WorkloadData data;
    for (BasebandCapture* cap : {&data.y1, &data.y2}) {
        cap->sample_rate_hz = workload.sample_rate_hz;
        cap->center_freq_hz = gps_l1_freq_hz;
        cap->samples.reserve(workload.capture_samples);
        for (std::size_t i = 0; i < workload.capture_samples; ++i)
            cap->samples.emplace_back(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    }
    const auto max_shift = static_cast<double>(workload.capture_samples / 2);
    data.offsets.reserve(workload.n_points);
    for (std::size_t i = 0; i < workload.n_points; ++i)
        data.offsets.push_back(
            {static_cast<std::int64_t>(std::llround(uniform(-max_shift, max_shift))),
             uniform(-workload.sample_rate_hz / 4.0, workload.sample_rate_hz / 4.0)});
    return data;
}

inline std::uint64_t fnv1a(const void* bytes, std::size_t len, std::uint64_t hash) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= p[i];
        hash *= 0x100000001B3ull;
    }
    return hash;
}

inline std::uint64_t workload_checksum(const WorkloadData& data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    h = fnv1a(data.y1.samples.data(), data.y1.samples.size() * sizeof(cplx), h);
    h = fnv1a(data.y2.samples.data(), data.y2.samples.size() * sizeof(cplx), h);
    h = fnv1a(data.offsets.data(), data.offsets.size() * sizeof(PairOffsets), h);
    return h;
}

/// Times one full pass: stage, loop batches, collected host output.
inline double time_run(const CorrelationBackend& backend, const WorkloadData& data,
                       std::size_t batch_size, std::vector<double>& out) {
    const BatchPlan plan = plan_batches(data.offsets.size(), batch_size);
    out.assign(data.offsets.size(), 0.0);
    const auto t0 = std::chrono::steady_clock::now();
    const auto session = backend.stage(data.y1, data.y2);
    for (std::size_t b = 0; b < plan.batch_count(); ++b) {
        const auto [begin, end] = plan.batch_range(b);
        session->correlate_batch(std::span<const PairOffsets>(data.offsets).subspan(begin, end - begin),
                                 std::span<double>(out).subspan(begin, end - begin));
    }
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

inline double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (const double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

inline double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    return (xs.size() % 2) ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

inline double max_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
    }
    return worst;
}

}  // namespace detail

/// Hardware-specific reference notes carried on every report; recorded for
/// context, never asserted.
inline std::vector<std::string> reference_annotations() {
    return {
        "reference results on other hardware (GPU vs CPU) reported an optimum batch size of 8 "
        "with local minima at 32 and 64; batch-size optima are hardware-dependent",
        "reference GPU-vs-CPU speedups of about 26x to 28x are hardware-specific and are not "
        "asserted by this harness",
    };
}

struct BatchScanRow {
    std::size_t batch_size = 0;
    double mean_s = 0.0;
    double median_s = 0.0;
    bool ok = true;
    std::string error;
};

struct BatchScanReport {
    BenchWorkload workload;
    std::string backend_name;
    std::size_t repetitions = 0;
    std::vector<BatchScanRow> coarse;
    std::vector<BatchScanRow> fine;
    std::size_t argmin_batch_size = 0;
    bool inputs_unchanged = true;
    std::vector<std::string> annotations;
};

struct SpeedupRow {
    std::size_t n_points = 0;
    double serial_mean_s = 0.0;
    double parallel_mean_s = 0.0;
    double speedup = 0.0;
    double max_rel_error = 0.0;
    bool equivalent = false;
};

struct SpeedupReport {
    BenchWorkload base_workload;
    std::size_t repetitions = 0;
    std::size_t batch_size = 0;
    std::string backend_a, backend_b;
    unsigned parallel_workers = 0;
    std::vector<SpeedupRow> rows;
    bool valid = false;
    bool inputs_unchanged = true;
    std::vector<std::string> annotations;
};

inline std::vector<std::size_t> default_coarse_batch_sizes() {
    return {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
}

/// Times every coarse batch size, then every integer size within
/// `fine_radius` of the coarse minimum, and reports the overall argmin.
/// A size that fails (for example over the memory budget) is recorded as a
/// failed row and the scan continues.
inline BatchScanReport scan_batch_sizes(const BenchWorkload& workload,
                                        std::vector<std::size_t> coarse_sizes =
                                            default_coarse_batch_sizes(),
                                        std::size_t fine_radius = 8, std::size_t repetitions = 5,
                                        const std::string& backend_name = "parallel",
                                        unsigned workers = 0,
                                        std::uint64_t memory_budget_bytes =
                                            default_memory_budget_bytes) {
    workload.validate();
    if (repetitions < 3) throw std::invalid_argument("scan_batch_sizes: repetitions < 3");
    if (coarse_sizes.empty()) throw std::invalid_argument("scan_batch_sizes: no sizes");

    const detail::WorkloadData data = detail::build_workload(workload);
    const std::uint64_t checksum_before = detail::workload_checksum(data);
    const auto backend = make_backend(backend_name, workers);

    BatchScanReport report;
    report.workload = workload;
    report.backend_name = backend_name;
    report.repetitions = repetitions;
    report.annotations = reference_annotations();

    const std::uint64_t capture_bytes =
        static_cast<std::uint64_t>(data.y1.samples.size() + data.y2.samples.size()) * sizeof(cplx);
    std::vector<double> out;
    const auto time_size = [&](std::size_t batch_size) -> BatchScanRow {
        BatchScanRow row;
        row.batch_size = batch_size;
        try {
            plan_batches(data.offsets.size(), batch_size, memory_budget_bytes, capture_bytes);
            detail::time_run(*backend, data, batch_size, out);  // warm-up, excluded
            std::vector<double> times(repetitions);
            for (std::size_t r = 0; r < repetitions; ++r)
                times[r] = detail::time_run(*backend, data, batch_size, out);
            row.mean_s = detail::mean_of(times);
            row.median_s = detail::median_of(times);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        return row;
    };

    for (const std::size_t size : coarse_sizes) report.coarse.push_back(time_size(size));

    const auto best_of = [](const std::vector<BatchScanRow>& rows) {
        const BatchScanRow* best = nullptr;
        for (const auto& row : rows)
            if (row.ok && (!best || row.mean_s < best->mean_s)) best = &row;
        return best;
    };
    const BatchScanRow* coarse_best = best_of(report.coarse);
    if (coarse_best) {
        const std::size_t center = coarse_best->batch_size;
        const std::size_t lo = center > fine_radius ? center - fine_radius : 1;
        for (std::size_t size = lo; size <= center + fine_radius; ++size) {
            if (std::find_if(report.coarse.begin(), report.coarse.end(), [&](const auto& r) {
                    return r.batch_size == size;
                }) != report.coarse.end())
                continue;
            report.fine.push_back(time_size(size));
        }
        const BatchScanRow* fine_best = best_of(report.fine);
        const BatchScanRow* overall =
            (fine_best && fine_best->mean_s < coarse_best->mean_s) ? fine_best : coarse_best;
        report.argmin_batch_size = overall->batch_size;
    }

    report.inputs_unchanged = detail::workload_checksum(data) == checksum_before;
    return report;
}

/// Times two backends on identical inputs across a list of candidate counts,
/// verifying output equivalence (<= 1e-4 relative per element) before a row
/// counts as valid.
inline SpeedupReport compare_backends(const BenchWorkload& base_workload,
                                      std::vector<std::size_t> point_counts = {},
                                      std::size_t repetitions = 10, std::size_t batch_size = 8,
                                      const std::string& backend_a = "serial",
                                      const std::string& backend_b = "parallel",
                                      unsigned workers = 0) {
    if (repetitions < 3) throw std::invalid_argument("compare_backends: repetitions < 3");
    if (point_counts.empty()) point_counts = {base_workload.n_points};

    const auto a = make_backend(backend_a, workers);
    const auto b = make_backend(backend_b, workers);

    SpeedupReport report;
    report.base_workload = base_workload;
    report.repetitions = repetitions;
    report.batch_size = batch_size;
    report.backend_a = backend_a;
    report.backend_b = backend_b;
    report.parallel_workers = b->descriptor().workers;
    report.annotations = reference_annotations();
    report.valid = true;

    for (const std::size_t n_points : point_counts) {
        BenchWorkload workload = base_workload;
        workload.n_points = n_points;
        const detail::WorkloadData data = detail::build_workload(workload);
        const std::uint64_t checksum_before = detail::workload_checksum(data);

        std::vector<double> out_a, out_b;
        detail::time_run(*a, data, batch_size, out_a);  // warm-up
        detail::time_run(*b, data, batch_size, out_b);

        std::vector<double> times_a(repetitions), times_b(repetitions);
        for (std::size_t r = 0; r < repetitions; ++r)
            times_a[r] = detail::time_run(*a, data, batch_size, out_a);
        for (std::size_t r = 0; r < repetitions; ++r)
            times_b[r] = detail::time_run(*b, data, batch_size, out_b);

        SpeedupRow row;
        row.n_points = n_points;
        row.serial_mean_s = detail::mean_of(times_a);
        row.parallel_mean_s = detail::mean_of(times_b);
        row.speedup = row.serial_mean_s / row.parallel_mean_s;
        row.max_rel_error = detail::max_rel_error(out_a, out_b);
        row.equivalent = row.max_rel_error <= 1e-4;
        if (!row.equivalent) report.valid = false;
        if (detail::workload_checksum(data) != checksum_before) report.inputs_unchanged = false;
        report.rows.push_back(row);
    }
    return report;
}

// --- report serialization ---------------------------------------------------

inline nlohmann::json to_json(const BenchWorkload& w) {
    return {{"n_points", w.n_points},
            {"capture_samples", w.capture_samples},
            {"sample_rate_hz", w.sample_rate_hz},
            {"seed", w.seed}};
}

inline BenchWorkload workload_from_json(const nlohmann::json& j) {
    BenchWorkload w;
    w.n_points = j.at("n_points").get<std::size_t>();
    w.capture_samples = j.at("capture_samples").get<std::size_t>();
    w.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    w.seed = j.at("seed").get<std::uint64_t>();
    return w;
}

inline nlohmann::json to_json(const BatchScanReport& report) {
    const auto rows_json = [](const std::vector<BatchScanRow>& rows) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows)
            arr.push_back({{"batch_size", r.batch_size},
                           {"mean_s", r.mean_s},
                           {"median_s", r.median_s},
                           {"ok", r.ok},
                           {"error", r.error}});
        return arr;
    };
    return {{"type", "batch_scan"},
            {"workload", to_json(report.workload)},
            {"backend", report.backend_name},
            {"repetitions", report.repetitions},
            {"coarse", rows_json(report.coarse)},
            {"fine", rows_json(report.fine)},
            {"argmin_batch_size", report.argmin_batch_size},
            {"inputs_unchanged", report.inputs_unchanged},
            {"annotations", report.annotations}};
}

inline BatchScanReport batch_scan_from_json(const nlohmann::json& j) {
    if (j.at("type") != "batch_scan") throw std::runtime_error("not a batch_scan report");
    BatchScanReport report;
    report.workload = workload_from_json(j.at("workload"));
    report.backend_name = j.at("backend").get<std::string>();
    report.repetitions = j.at("repetitions").get<std::size_t>();
    const auto rows_from = [](const nlohmann::json& arr) {
        std::vector<BatchScanRow> rows;
        for (const auto& r : arr)
            rows.push_back({r.at("batch_size").get<std::size_t>(), r.at("mean_s").get<double>(),
                            r.at("median_s").get<double>(), r.at("ok").get<bool>(),
                            r.at("error").get<std::string>()});
        return rows;
    };
    report.coarse = rows_from(j.at("coarse"));
    report.fine = rows_from(j.at("fine"));
    report.argmin_batch_size = j.at("argmin_batch_size").get<std::size_t>();
    report.inputs_unchanged = j.at("inputs_unchanged").get<bool>();
    report.annotations = j.at("annotations").get<std::vector<std::string>>();
    return report;
}

inline nlohmann::json to_json(const SpeedupReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"n_points", r.n_points},
                        {"serial_mean_s", r.serial_mean_s},
                        {"parallel_mean_s", r.parallel_mean_s},
                        {"speedup", r.speedup},
                        {"max_rel_error", r.max_rel_error},
                        {"equivalent", r.equivalent}});
    return {{"type", "speedup"},
            {"workload", to_json(report.base_workload)},
            {"repetitions", report.repetitions},
            {"batch_size", report.batch_size},
            {"backend_a", report.backend_a},
            {"backend_b", report.backend_b},
            {"parallel_workers", report.parallel_workers},
            {"rows", rows},
            {"valid", report.valid},
            {"inputs_unchanged", report.inputs_unchanged},
            {"annotations", report.annotations}};
}

inline SpeedupReport speedup_from_json(const nlohmann::json& j) {
    if (j.at("type") != "speedup") throw std::runtime_error("not a speedup report");
    SpeedupReport report;
    report.base_workload = workload_from_json(j.at("workload"));
    report.repetitions = j.at("repetitions").get<std::size_t>();
    report.batch_size = j.at("batch_size").get<std::size_t>();
    report.backend_a = j.at("backend_a").get<std::string>();
    report.backend_b = j.at("backend_b").get<std::string>();
    report.parallel_workers = j.at("parallel_workers").get<unsigned>();
    for (const auto& r : j.at("rows"))
        report.rows.push_back({r.at("n_points").get<std::size_t>(),
                               r.at("serial_mean_s").get<double>(),
                               r.at("parallel_mean_s").get<double>(),
                               r.at("speedup").get<double>(),
                               r.at("max_rel_error").get<double>(),
                               r.at("equivalent").get<bool>()});
    report.valid = j.at("valid").get<bool>();
    report.inputs_unchanged = j.at("inputs_unchanged").get<bool>();
    report.annotations = j.at("annotations").get<std::vector<std::string>>();
    return report;
}

inline std::string render_report(const BatchScanReport& report) {
    std::ostringstream out;
    out << "batch-size scan: " << report.workload.n_points << " candidates, "
        << report.workload.capture_samples << "-sample captures, backend "
        << report.backend_name << ", " << report.repetitions << " repetitions\n";
    const auto rows = [&](const char* label, const std::vector<BatchScanRow>& set) {
        out << label << ":\n";
        for (const auto& r : set) {
            if (r.ok)
                out << "  batch " << r.batch_size << "  mean " << r.mean_s << " s  median "
                    << r.median_s << " s\n";
            else
                out << "  batch " << r.batch_size << "  FAILED: " << r.error << "\n";
        }
    };
    rows("coarse", report.coarse);
    rows("fine", report.fine);
    out << "argmin batch size: " << report.argmin_batch_size << "\n";
    for (const auto& note : report.annotations) out << "note: " << note << "\n";
    return out.str();
}

inline std::string render_report(const SpeedupReport& report) {
    std::ostringstream out;
    out << "backend comparison: " << report.backend_a << " vs " << report.backend_b << " ("
        << report.parallel_workers << " workers), batch " << report.batch_size << ", "
        << report.repetitions << " repetitions\n";
    for (const auto& r : report.rows)
        out << "  " << r.n_points << " pts  " << report.backend_a << " " << r.serial_mean_s
            << " s  " << report.backend_b << " " << r.parallel_mean_s << " s  speedup "
            << r.speedup << "x  max_rel_err " << r.max_rel_error
            << (r.equivalent ? "" : "  NOT EQUIVALENT") << "\n";
    out << (report.valid ? "all rows equivalent\n" : "REPORT INVALID: equivalence failed\n");
    for (const auto& note : report.annotations) out << "note: " << note << "\n";
    return out.str();
}

}  // namespace digeo
