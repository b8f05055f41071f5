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
// GPS L1 C/A Gold code generation: two 10-stage LFSRs (G1, G2) with a
// PRN-specific pair of G2 phase-selector taps, chips mapped 0 -> +1, 1 -> -1.

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace digeo {

inline constexpr std::size_t ca_code_length = 1023;
inline constexpr double ca_chip_rate_hz = 1.023e6;
inline constexpr double nav_bit_rate_hz = 50.0;

/// One C/A code period, chips valued +1/-1.
using ChipSequence = std::array<std::int8_t, ca_code_length>;

namespace detail {
// G2 phase-selector taps (1-based stage numbers) for PRN 1..32.
inline constexpr std::array<std::array<int, 2>, 32> g2_phase_taps = {{
    {2, 6},  {3, 7},  {4, 8},  {5, 9},  {1, 9},  {2, 10}, {1, 8},  {2, 9},
    {3, 10}, {2, 3},  {3, 4},  {5, 6},  {6, 7},  {7, 8},  {8, 9},  {9, 10},
    {1, 4},  {2, 5},  {3, 6},  {4, 7},  {5, 8},  {6, 9},  {1, 3},  {4, 6},
    {5, 7},  {6, 8},  {7, 9},  {8, 10}, {1, 6},  {2, 7},  {3, 8},  {4, 9},
}};
}  // namespace detail

inline ChipSequence generate_ca_code(int prn) {
    if (prn < 1 || prn > 32)
        throw std::invalid_argument("generate_ca_code: prn out of 1..32: " + std::to_string(prn));

    std::array<int, 10> g1, g2;
    g1.fill(1);
    g2.fill(1);
    const auto [tap_a, tap_b] = detail::g2_phase_taps[static_cast<std::size_t>(prn - 1)];

    ChipSequence chips{};
    for (std::size_t i = 0; i < ca_code_length; ++i) {
        const int g2i = g2[tap_a - 1] ^ g2[tap_b - 1];
        const int bit = g1[9] ^ g2i;
        chips[i] = bit ? -1 : 1;

        const int g1_fb = g1[2] ^ g1[9];                                  // x^10 + x^3 + 1
        const int g2_fb = g2[1] ^ g2[2] ^ g2[5] ^ g2[7] ^ g2[8] ^ g2[9];  // x^10+x^9+x^8+x^6+x^3+x^2+1
        for (std::size_t s = 9; s > 0; --s) {
            g1[s] = g1[s - 1];
            g2[s] = g2[s - 1];
        }
        g1[0] = g1_fb;
        g2[0] = g2_fb;
    }
    return chips;
}

}  // namespace digeo
