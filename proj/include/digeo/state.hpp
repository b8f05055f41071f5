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

#include <stdexcept>

#include "digeo/geodesy.hpp"

namespace digeo {

/// Receiver position/velocity pair at one snapshot epoch, ECEF.
struct EcefStateVector {
    EcefVector position;      ///< m
    EcefVector velocity;      ///< m/s

    void validate() const {
        if (!position.finite() || !velocity.finite())
            throw std::invalid_argument("EcefStateVector: non-finite component");
        if (!(position.norm() > wgs84::semi_minor_axis_m))
            throw std::invalid_argument("EcefStateVector: position below Earth surface");
        if (!(velocity.norm() < 1e5))
            throw std::invalid_argument("EcefStateVector: velocity above 1e5 m/s");
    }
};

}  // namespace digeo
