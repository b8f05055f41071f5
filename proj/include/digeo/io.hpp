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
// On-disk formats, all little-endian with magic + version:
//   DGIQ  complex captures, float32 interleaved I/Q payload
//   DGGR  correlation grids, float64 values with the lattice axes
// plus CSV grid/detection exports and 16-bit P5 graymap heatmaps.

#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "digeo/capture.hpp"
#include "digeo/correlate.hpp"
#include "digeo/geodesy.hpp"

namespace digeo {

inline constexpr std::uint16_t iq_format_version = 1;
inline constexpr std::uint16_t grid_format_version = 1;

/// DGIQ header as laid out on disk (38 bytes, little-endian).
struct IqFileHeader {
    std::array<char, 4> magic{'D', 'G', 'I', 'Q'};
    std::uint16_t version = iq_format_version;
    double sample_rate_hz = 0.0;
    double center_freq_hz = 0.0;
    double start_time_s = 0.0;
    std::uint64_t sample_count = 0;
};

namespace detail {

inline void put_bytes(std::string& out, std::uint64_t value, int n_bytes) {
    for (int i = 0; i < n_bytes; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

inline void put_f64(std::string& out, double value) {
    std::uint64_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    put_bytes(out, bits, 8);
}

inline void put_f32(std::string& out, float value) {
    std::uint32_t bits;
    std::memcpy(&bits, &value, sizeof(bits));
    put_bytes(out, bits, 4);
}

class ByteReader {
public:
    ByteReader(const std::string& data, const std::string& context)
        : data_(data), context_(context) {}

    std::uint64_t take_bytes(int n_bytes) {
        if (pos_ + static_cast<std::size_t>(n_bytes) > data_.size())
            throw std::runtime_error(context_ + ": truncated file");
        std::uint64_t value = 0;
        for (int i = 0; i < n_bytes; ++i)
            value |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i]))
                     << (8 * i);
        pos_ += static_cast<std::size_t>(n_bytes);
        return value;
    }
    double take_f64() {
        const std::uint64_t bits = take_bytes(8);
        double value;
        std::memcpy(&value, &bits, sizeof(value));
        return value;
    }
    float take_f32() {
        const auto bits = static_cast<std::uint32_t>(take_bytes(4));
        float value;
        std::memcpy(&value, &bits, sizeof(value));
        return value;
    }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    const std::string& data_;
    std::string context_;
    std::size_t pos_ = 0;
};

inline std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

inline void write_file_bytes(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

inline void write_iq(const BasebandCapture& capture, const std::filesystem::path& path) {
    capture.validate();
    std::string bytes;
    bytes.reserve(38 + capture.size() * 8);
    bytes.append("DGIQ");
    detail::put_bytes(bytes, iq_format_version, 2);
    detail::put_f64(bytes, capture.sample_rate_hz);
    detail::put_f64(bytes, capture.center_freq_hz);
    detail::put_f64(bytes, capture.start_time_s);
    detail::put_bytes(bytes, capture.size(), 8);
    for (const cplx& s : capture.samples) {
        detail::put_f32(bytes, static_cast<float>(s.real()));
        detail::put_f32(bytes, static_cast<float>(s.imag()));
    }
    detail::write_file_bytes(path, bytes);
}

inline BasebandCapture read_iq(const std::filesystem::path& path) {
    const std::string data = detail::read_file_bytes(path);
    detail::ByteReader reader(data, "read_iq(" + path.string() + ")");
    if (reader.take_bytes(4) !=
        (static_cast<std::uint64_t>('D') | (static_cast<std::uint64_t>('G') << 8) |
         (static_cast<std::uint64_t>('I') << 16) | (static_cast<std::uint64_t>('Q') << 24)))
        throw std::runtime_error("read_iq: bad magic in " + path.string());
    const auto version = static_cast<std::uint16_t>(reader.take_bytes(2));
    if (version != iq_format_version)
        throw std::runtime_error("read_iq: unsupported version " + std::to_string(version));

    BasebandCapture cap;
    cap.sample_rate_hz = reader.take_f64();
    cap.center_freq_hz = reader.take_f64();
    cap.start_time_s = reader.take_f64();
    const std::uint64_t count = reader.take_bytes(8);
    if (reader.remaining() != count * 8)
        throw std::runtime_error("read_iq: payload length does not match sample_count in " +
                                 path.string());
    cap.samples.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const float re = reader.take_f32();
        const float im = reader.take_f32();
        cap.samples.emplace_back(re, im);
    }
    cap.validate();
    return cap;
}

enum class GridFileFormat { csv, binary };

inline void write_grid(const CorrelationGrid& grid, const std::filesystem::path& path,
                       GridFileFormat format) {
    grid.validate();
    if (format == GridFileFormat::csv) {
        std::string out = "lat_deg,lon_deg,value\n";
        char row[128];
        for (std::size_t i = 0; i < grid.grid->lat.count; ++i)
            for (std::size_t j = 0; j < grid.grid->lon.count; ++j) {
                const GeodeticCoord c = grid.grid->lattice_coord(i, j);
                std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g\n", c.lat_deg, c.lon_deg,
                              grid.values[grid.grid->index(i, j)]);
                out += row;
            }
        detail::write_file_bytes(path, out);
        return;
    }

    std::string bytes;
    bytes.reserve(70 + grid.values.size() * 8);
    bytes.append("DGGR");
    detail::put_bytes(bytes, grid_format_version, 2);
    detail::put_f64(bytes, grid.grid->lat.start_deg);
    detail::put_f64(bytes, grid.grid->lat.step_deg);
    detail::put_bytes(bytes, grid.grid->lat.count, 8);
    detail::put_f64(bytes, grid.grid->lon.start_deg);
    detail::put_f64(bytes, grid.grid->lon.step_deg);
    detail::put_bytes(bytes, grid.grid->lon.count, 8);
    detail::put_f64(bytes, grid.grid->altitude_m);
    detail::put_bytes(bytes, grid.values.size(), 8);
    for (const double v : grid.values) detail::put_f64(bytes, v);
    detail::write_file_bytes(path, bytes);
}

inline CorrelationGrid read_grid(const std::filesystem::path& path) {
    const std::string data = detail::read_file_bytes(path);
    detail::ByteReader reader(data, "read_grid(" + path.string() + ")");
    if (reader.take_bytes(4) !=
        (static_cast<std::uint64_t>('D') | (static_cast<std::uint64_t>('G') << 8) |
         (static_cast<std::uint64_t>('G') << 16) | (static_cast<std::uint64_t>('R') << 24)))
        throw std::runtime_error("read_grid: bad magic in " + path.string());
    const auto version = static_cast<std::uint16_t>(reader.take_bytes(2));
    if (version != grid_format_version)
        throw std::runtime_error("read_grid: unsupported version " + std::to_string(version));

    auto lattice = std::make_shared<CandidateGrid>();
    lattice->lat.start_deg = reader.take_f64();
    lattice->lat.step_deg = reader.take_f64();
    lattice->lat.count = reader.take_bytes(8);
    lattice->lon.start_deg = reader.take_f64();
    lattice->lon.step_deg = reader.take_f64();
    lattice->lon.count = reader.take_bytes(8);
    lattice->altitude_m = reader.take_f64();
    const std::uint64_t count = reader.take_bytes(8);
    if (count != lattice->size())
        throw std::runtime_error("read_grid: value count does not match lattice in " +
                                 path.string());
    if (reader.remaining() != count * 8)
        throw std::runtime_error("read_grid: payload length mismatch in " + path.string());

    lattice->points.reserve(count);
    for (std::size_t i = 0; i < lattice->lat.count; ++i)
        for (std::size_t j = 0; j < lattice->lon.count; ++j)
            lattice->points.push_back(lla_to_ecef(lattice->lattice_coord(i, j)));

    CorrelationGrid grid{std::move(lattice), {}};
    grid.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) grid.values.push_back(reader.take_f64());
    return grid;
}

/// 16-bit P5 portable graymap, min -> 0 and max -> 65535 linear scaling,
/// image row 0 at the northernmost latitude, samples big-endian per the
/// format. A constant grid renders as a valid all-zero image.
inline void render_heatmap(const CorrelationGrid& grid, const std::filesystem::path& path) {
    grid.validate();
    const std::size_t n_lat = grid.grid->lat.count;
    const std::size_t n_lon = grid.grid->lon.count;

    double lo = grid.values[0], hi = grid.values[0];
    for (const double v : grid.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double scale = (hi > lo) ? 65535.0 / (hi - lo) : 0.0;

    std::string bytes = "P5\n" + std::to_string(n_lon) + " " + std::to_string(n_lat) + "\n65535\n";
    bytes.reserve(bytes.size() + n_lat * n_lon * 2);
    for (std::size_t row = 0; row < n_lat; ++row) {
        const std::size_t ilat = n_lat - 1 - row;  // north on top
        for (std::size_t j = 0; j < n_lon; ++j) {
            const double v = grid.values[grid.grid->index(ilat, j)];
            const auto pixel = static_cast<std::uint32_t>(std::llround((v - lo) * scale));
            bytes.push_back(static_cast<char>((pixel >> 8) & 0xFF));
            bytes.push_back(static_cast<char>(pixel & 0xFF));
        }
    }
    detail::write_file_bytes(path, bytes);
}

inline void write_detections_csv(std::span<const EmitterEstimate> detections,
                                 const std::filesystem::path& path) {
    std::string out = "lat_deg,lon_deg,alt_m,grid_index,score,score_zsigma\n";
    char row[192];
    for (const EmitterEstimate& d : detections) {
        std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%zu,%.17g,%.17g\n", d.location.lat_deg,
                      d.location.lon_deg, d.location.alt_m, d.grid_index, d.score, d.score_zsigma);
        out += row;
    }
    detail::write_file_bytes(path, out);
}

}  // namespace digeo
