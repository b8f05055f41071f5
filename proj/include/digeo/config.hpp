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
// Scenario configuration: a line-oriented key = value document with
// [receiver] and [emitter] sections. Units are explicit in key names,
// unknown keys are rejected with the offending key and line number, and
// omitted optional keys take documented defaults (grid altitude 0 m,
// k_sigma 5, exclusion radius 5 cells, serial backend, batch size 8).

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "digeo/geolocate.hpp"
#include "digeo/scene.hpp"

namespace digeo {

/// Parsed scenario plus the run options that ride along in the same file.
struct ScenarioConfig {
    Scenario scenario;
    GeolocateOptions options;
};

namespace detail {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    std::string name;  // "", "receiver", "emitter"
    int line = 0;
    std::map<std::string, KeyValue> keys;
    std::vector<std::pair<std::string, KeyValue>> repeated;  // for receiver state rows
};

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<Section> tokenize_config(std::istream& in, const std::string& origin) {
    std::vector<Section> sections;
    sections.push_back({"", 0, {}, {}});
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name != "receiver" && name != "emitter")
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown section [" +
                                  name + "]");
            sections.push_back({name, line_no, {}, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");

        Section& section = sections.back();
        if (key == "state") {
            section.repeated.emplace_back(key, KeyValue{value, line_no, true});
        } else {
            if (section.keys.count(key))
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
            section.keys[key] = {value, line_no, false};
        }
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(Section& section, std::string origin)
        : section_(section), origin_(std::move(origin)) {}

    std::optional<std::string> raw(const std::string& key) {
        const auto it = section_.keys.find(key);
        if (it == section_.keys.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const auto text = raw(key);
        if (!text) {
            if (fallback) return *fallback;
            throw ConfigError(origin_ + ": missing required key '" + key + "'" + where());
        }
        try {
            std::size_t used = 0;
            const double value = std::stod(*text, &used);
            if (used != text->size()) throw std::invalid_argument("trailing characters");
            return value;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ":" + std::to_string(line_of(key)) + ": key '" + key +
                              "' is not a number: " + *text);
        }
    }

    std::uint64_t unsigned_int(const std::string& key,
                               std::optional<std::uint64_t> fallback = std::nullopt) {
        const auto text = raw(key);
        if (!text) {
            if (fallback) return *fallback;
            throw ConfigError(origin_ + ": missing required key '" + key + "'" + where());
        }
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc{} || ptr != text->data() + text->size())
            throw ConfigError(origin_ + ":" + std::to_string(line_of(key)) + ": key '" + key +
                              "' is not a nonnegative integer: " + *text);
        return value;
    }

    bool boolean(const std::string& key, bool fallback) {
        const auto text = raw(key);
        if (!text) return fallback;
        if (*text == "true") return true;
        if (*text == "false") return false;
        throw ConfigError(origin_ + ":" + std::to_string(line_of(key)) + ": key '" + key +
                          "' must be true or false");
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        const auto value = raw(key);
        if (value) return *value;
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing required key '" + key + "'" + where());
    }

    void reject_unused() const {
        for (const auto& [key, kv] : section_.keys)
            if (!kv.used)
                throw ConfigError(origin_ + ":" + std::to_string(kv.line) + ": unknown key '" +
                                  key + "'" + where());
    }

    int line_of(const std::string& key) const {
        const auto it = section_.keys.find(key);
        return it == section_.keys.end() ? section_.line : it->second.line;
    }

    Section& section() { return section_; }

private:
    std::string where() const {
        return section_.name.empty() ? std::string{}
                                     : " in [" + section_.name + "] section starting at line " +
                                           std::to_string(section_.line);
    }
    Section& section_;
    std::string origin_;
};

inline ReceiverDef parse_receiver(SectionReader& reader, const std::string& origin) {
    Section& section = reader.section();
    if (!section.repeated.empty()) {
        if (!section.keys.empty())
            throw ConfigError(origin + ":" + std::to_string(section.line) +
                              ": a [receiver] uses either orbit keys or state rows, not both");
        std::vector<EcefStateVector> states;
        for (const auto& [key, kv] : section.repeated) {
            std::istringstream row(kv.value);
            EcefStateVector s;
            char comma;
            row >> s.position.x >> comma >> s.position.y >> comma >> s.position.z >> comma >>
                s.velocity.x >> comma >> s.velocity.y >> comma >> s.velocity.z;
            if (!row)
                throw ConfigError(origin + ":" + std::to_string(kv.line) +
                                  ": state row must be 'x,y,z,vx,vy,vz'");
            s.validate();
            states.push_back(s);
        }
        return states;
    }
    CircularOrbit orbit;
    orbit.alt_m = reader.number("orbit_alt_m");
    orbit.inclination_deg = reader.number("orbit_inclination_deg");
    orbit.raan_deg = reader.number("orbit_raan_deg", 0.0);
    orbit.phase_deg = reader.number("orbit_phase_deg", 0.0);
    reader.reject_unused();
    return orbit;
}

inline EmitterDef parse_emitter(SectionReader& reader, const std::string& origin) {
    EmitterDef emitter;
    emitter.location.lat_deg = reader.number("lat_deg");
    emitter.location.lon_deg = reader.number("lon_deg");
    emitter.location.alt_m = reader.number("alt_m", 0.0);
    emitter.ref_snr_db = reader.number("ref_snr_db");
    emitter.ref_range_m = reader.number("ref_range_m");

    const std::string kind = reader.text("waveform");
    if (kind == "spoofer") {
        SpooferSpec spec;
        spec.prn = static_cast<int>(reader.unsigned_int("prn"));
        spec.data_seed = reader.unsigned_int("data_seed", 0);
        spec.validate();
        emitter.waveform = spec;
    } else if (kind == "tone") {
        emitter.waveform = ToneSpec{reader.number("tone_offset_hz", 0.0)};
    } else if (kind == "chirp") {
        ChirpSpec spec{reader.number("chirp_bandwidth_hz"), reader.number("chirp_period_s")};
        spec.validate();
        emitter.waveform = spec;
    } else if (kind == "sawtooth") {
        SawtoothSpec spec{reader.number("sawtooth_bandwidth_hz"),
                          reader.number("sawtooth_chirp_period_s")};
        spec.validate();
        emitter.waveform = spec;
    } else {
        throw ConfigError(origin + ":" + std::to_string(reader.line_of("waveform")) +
                          ": unknown waveform '" + kind +
                          "' (expected spoofer | tone | chirp | sawtooth)");
    }
    reader.reject_unused();
    emitter.validate();
    return emitter;
}

}  // namespace detail

inline ScenarioConfig parse_scenario_stream(std::istream& in, const std::string& origin) {
    std::vector<detail::Section> sections = detail::tokenize_config(in, origin);

    ScenarioConfig config;
    Scenario& sc = config.scenario;
    {
        detail::SectionReader reader(sections.front(), origin);
        sc.snapshot_count = reader.unsigned_int("snapshots");
        sc.snapshot_spacing_s = reader.number("snapshot_spacing_s", 1.0);
        sc.capture_duration_s = reader.number("capture_duration_s");
        sc.sample_rate_hz = reader.number("sample_rate_hz");
        sc.center_freq_hz = reader.number("center_freq_hz", gps_l1_freq_hz);
        sc.start_time_s = reader.number("start_time_s", 0.0);
        sc.noise_seed = reader.unsigned_int("noise_seed", 0);
        sc.noise_power = reader.number("noise_power", 1.0);
        sc.grid_bounds.lat_min_deg = reader.number("grid_lat_min_deg");
        sc.grid_bounds.lat_max_deg = reader.number("grid_lat_max_deg");
        sc.grid_bounds.lon_min_deg = reader.number("grid_lon_min_deg");
        sc.grid_bounds.lon_max_deg = reader.number("grid_lon_max_deg");
        sc.grid_spacing_deg = reader.number("grid_spacing_deg");
        sc.grid_altitude_m = reader.number("grid_alt_m", 0.0);

        config.options.backend_name = reader.text("backend", std::string("serial"));
        config.options.batch_size = reader.unsigned_int("batch_size", 8);
        config.options.k_sigma = reader.number("k_sigma", 5.0);
        config.options.exclusion_radius_cells =
            static_cast<int>(reader.unsigned_int("exclusion_radius_cells", 5));
        config.options.normalize_per_snapshot = reader.boolean("normalize_per_snapshot", false);
        config.options.memory_budget_bytes =
            reader.unsigned_int("memory_budget_bytes", default_memory_budget_bytes);
        reader.reject_unused();
    }

    for (std::size_t i = 1; i < sections.size(); ++i) {
        detail::SectionReader reader(sections[i], origin);
        if (sections[i].name == "receiver")
            sc.receivers.push_back(detail::parse_receiver(reader, origin));
        else
            sc.emitters.push_back(detail::parse_emitter(reader, origin));
    }

    if (config.options.backend_name != "serial" && config.options.backend_name != "parallel")
        throw detail::ConfigError(origin + ": unknown backend '" + config.options.backend_name +
                                  "' (expected serial | parallel)");
    sc.validate();
    sc.grid_bounds.validate();
    if (!(sc.grid_spacing_deg > 0.0))
        throw detail::ConfigError(origin + ": grid_spacing_deg must be > 0");
    return config;
}

inline ScenarioConfig parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario config " + path.string());
    return parse_scenario_stream(in, path.string());
}

}  // namespace digeo
