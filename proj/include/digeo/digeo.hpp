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

#include "digeo/backend.hpp"
#include "digeo/bench.hpp"
#include "digeo/ca_code.hpp"
#include "digeo/capture.hpp"
#include "digeo/config.hpp"
#include "digeo/correlate.hpp"
#include "digeo/geodesy.hpp"
#include "digeo/geolocate.hpp"
#include "digeo/geometry.hpp"
#include "digeo/io.hpp"
#include "digeo/orbit.hpp"
#include "digeo/scene.hpp"
#include "digeo/spectral.hpp"
#include "digeo/state.hpp"
#include "digeo/waveform.hpp"
