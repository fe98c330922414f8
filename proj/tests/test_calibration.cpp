// Copyright 2026 The nzgate Authors
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
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nzgate/calibration.hpp"

using namespace nzgate;
using std::numbers::pi;

namespace {
SystemParams idle_point() { return SystemParams::paper_2q().with_frequencies(4.65, 11.1414, 4.662); }

GateProtocolParams calibrated() {
  GateProtocolParams gp = GateProtocolParams::paper_defaults();
  gp.V = 0.186488;
  gp.coupler_on_freq = 5.38024;
  return gp;
}
}  // namespace

TEST_SUITE("calibration") {
  TEST_CASE("calibrated exchange transfers |101> fully") {
    CHECK(exchange_population(idle_point(), calibrated()) > 1.0 - 1e-4);
    GateProtocolParams off = calibrated();
    off.V = 0.1;
    CHECK(exchange_population(idle_point(), off) < 0.5);
  }

  TEST_CASE("phase calibration hits the target at fixed duration") {
    const PhaseSweep sw = phase_sweep(idle_point(), calibrated(), 0.02, 0.05, 4);
    CHECK(sw.monotone);
    const PhaseCalibration c = calibrate_phase_amplitude(idle_point(), calibrated(), pi, sw);
    CHECK(std::abs(c.error) < 1e-3);
    CHECK(c.a_int == doctest::Approx(0.0345394).epsilon(1e-4));
    CHECK(c.duration == doctest::Approx(120.0));
    CHECK_THROWS_AS(calibrate_phase_amplitude(idle_point(), calibrated(), 0.0, sw), Error);
  }
}
