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

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace digeo {

using cplx = std::complex<double>;

/// A complex baseband sample record. Sample k sits at local time t_k = k/f_s,
/// counted from 0 within the capture; start_time_s places the record on the
/// scenario clock.
struct BasebandCapture {
    std::vector<cplx> samples;
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;
    double center_freq_hz = 0.0;

    std::size_t size() const { return samples.size(); }
    double sample_period_s() const { return 1.0 / sample_rate_hz; }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
    double local_time_s(std::size_t k) const { return static_cast<double>(k) / sample_rate_hz; }

    void validate() const {
        if (samples.empty()) throw std::invalid_argument("BasebandCapture: no samples");
        if (!(sample_rate_hz > 0.0))
            throw std::invalid_argument("BasebandCapture: sample_rate_hz <= 0");
    }
};

}  // namespace digeo
