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

#include <algorithm>
#include <cmath>

#include "nzgate/pulse.hpp"

using namespace nzgate;

namespace {
SystemParams idle_point() { return SystemParams::paper_2q().with_frequencies(4.65, 11.1414, 4.662); }

GateProtocolParams calibrated() {
  GateProtocolParams gp = GateProtocolParams::paper_defaults();
  gp.V = 0.186488;
  gp.coupler_on_freq = 5.38024;
  gp.a_int = 0.0345394;
  return gp;
}
}  // namespace

TEST_SUITE("pulse") {
  TEST_CASE("flat-top envelope") {
    const auto v = flattop_pulse(1.0, 20.0, 2.5, 0.005);
    REQUIRE(v.size() == 4001);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 0.0);
    CHECK(v[2000] == doctest::Approx(1.0));
    for (double x : v) CHECK((x >= 0.0 && x <= 1.0));
    CHECK(flattop_area(20.0, 2.5) == doctest::Approx(15.3524645385911).epsilon(1e-12));
    double trap = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) trap += 0.5 * (v[k] + v[k - 1]) * 0.005;
    CHECK(trap == doctest::Approx(flattop_area(20.0, 2.5)).epsilon(1e-6));
    // symmetric in time
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == doctest::Approx(v[v.size() - 1 - k]).epsilon(1e-12));
  }

  TEST_CASE("edges never exceed half the pulse") {
    const auto v = flattop_pulse(2.0, 4.0, 5.0, 0.005);
    CHECK(*std::max_element(v.begin(), v.end()) == doctest::Approx(2.0));
    CHECK(flattop_area(4.0, 5.0) < 4.0);
  }

  TEST_CASE("flux map inverts") {
    const FluxMap fm{4.65, -0.211};
    CHECK(fm.frequency(0.0) == doctest::Approx(4.65));
    for (double x : {0.01, 0.2, 0.5}) CHECK(fm.frequency(fm.flux_for_excursion(x)) == doctest::Approx(4.65 - x).epsilon(1e-12));
    CHECK(fm.flux_for_excursion(0.2) == doctest::Approx(0.1286706498).epsilon(1e-9));
  }

  TEST_CASE("three-step schedule layout") {
    const Schedule s = make_cphase_schedule(idle_point(), calibrated());
    CHECK(s.duration() == doctest::Approx(120.0));
    CHECK(s.samples() == 24001);
    REQUIRE(s.segments.size() == 6);
    CHECK(s.segments[0].name == "strong+");
    CHECK(s.segments[2].name == "weak");
    CHECK(s.segments[1].is_static);
    CHECK_FALSE(s.segments[4].is_static);
    CHECK(s.net_zero);
    CHECK(*std::min_element(s.omega_q1.begin(), s.omega_q1.end()) == doctest::Approx(4.463512).epsilon(1e-6));
    CHECK(*std::min_element(s.omega_c.begin(), s.omega_c.end()) == doctest::Approx(5.38024).epsilon(1e-9));
    // endpoints sit at the idle point
    const ControlPoint a = s.sample(0), b = s.sample(s.samples() - 1);
    CHECK(a.omega_c == doctest::Approx(11.1414));
    CHECK(b.omega_q1 == doctest::Approx(4.65));
    CHECK(b.g_1c == doctest::Approx(0.262));
  }

  TEST_CASE("net-zero flux integral") {
    for (double a : {0.0, 0.03, 0.2}) {
      GateProtocolParams gp = calibrated();
      gp.a_int = a;
      const Schedule s = make_cphase_schedule(idle_point(), gp);
      CHECK(std::abs(s.flux_integral(Element::Q1)) < 1e-9);
      CHECK(std::abs(s.flux_integral(Element::Q2)) < 1e-9);
    }
  }

  TEST_CASE("coupling modulation follows the sqrt law") {
    const SystemParams sys = idle_point();
    const Schedule s = make_cphase_schedule(sys, calibrated());
    for (int k = 0; k < s.samples(); k += 997) {
      const double want = sys.g_1c * std::sqrt(s.omega_q1[k] * s.omega_c[k] / (sys.omega_q1 * sys.omega_c));
      CHECK(s.g_1c[k] == doctest::Approx(want).epsilon(1e-12));
    }
  }

  TEST_CASE("interpolation between samples") {
    const Schedule s = make_cphase_schedule(idle_point(), calibrated());
    const double t = 7.0025;
    const ControlPoint c = s.at(t);
    const ControlPoint lo = s.sample(1400), hi = s.sample(1401);
    CHECK(c.omega_q1 == doctest::Approx(0.5 * (lo.omega_q1 + hi.omega_q1)));
    CHECK(s.at(-1.0).omega_q1 == doctest::Approx(s.sample(0).omega_q1));
  }

  TEST_CASE("slew limit and validation") {
    GateProtocolParams gp = calibrated();
    gp.slew_limit = 0.1;
    CHECK_THROWS_AS(make_cphase_schedule(idle_point(), gp), Error);
    gp = calibrated();
    gp.t_p = -1.0;
    CHECK_THROWS_AS(gp.validate(), Error);
    gp = calibrated();
    gp.t_p = 20.0001;
    CHECK_THROWS_AS(gp.validate(), Error);
    gp = calibrated();
    gp.coupler_on_freq = 4.6;
    CHECK_THROWS_AS(make_cphase_schedule(idle_point(), gp), Error);
  }

  TEST_CASE("idle schedule is constant") {
    const Schedule s = Schedule::idle(idle_point(), 10.0, 0.5);
    CHECK(s.samples() == 21);
    CHECK(s.max_slew() == 0.0);
    CHECK(s.frequency_integral(Element::Q1) == 0.0);
  }
}
