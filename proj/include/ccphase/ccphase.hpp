// Copyright 2026 The qutrit-ccphase Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header for the whole library.

#pragma once

#include "ccphase/errors.hpp"
#include "ccphase/linalg.hpp"
#include "ccphase/simulator.hpp"
#include "ccphase/random.hpp"
#include "ccphase/gates.hpp"
#include "ccphase/pulse.hpp"
#include "ccphase/synth.hpp"
#include "ccphase/device.hpp"
#include "ccphase/noise.hpp"
#include "ccphase/backend.hpp"
#include "ccphase/phase_scan.hpp"
#include "ccphase/calibration.hpp"
#include "ccphase/benchmarking.hpp"
#include "ccphase/decompose.hpp"
#include "ccphase/native_gates.hpp"
#include "ccphase/qaoa.hpp"
