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

#include "nzgate/hilbert.hpp"
#include "nzgate/metrics.hpp"
#include "nzgate/scenario.hpp"

using namespace nzgate;
using namespace nzgate::labels;

namespace {
SystemParams coupler_at(double wc) {
  const SystemParams p = SystemParams::paper_2q();
  return p.with_frequencies(p.omega_q1, wc, p.omega_q2);
}
}  // namespace

TEST_SUITE("hilbert") {
  TEST_CASE("label index round trip") {
    for (int i = 0; i < kDim; ++i) CHECK(BareLabel::from_index(i).index() == i);
    CHECK(BareLabel::parse("101") == k101);
    CHECK(k101.index() == 10);
    CHECK(BareLabel::parse("012").str() == "012");
    CHECK_THROWS_AS(BareLabel::parse("13"), Error);
    CHECK_THROWS_AS(BareLabel::parse("103"), Error);
  }

  TEST_CASE("lowering operators truncate at three levels") {
    const auto& ops = OperatorTable::get();
    for (Element e : {Element::Q1, Element::Coupler, Element::Q2}) {
      const CMatrix& b = ops.lowering(e);
      const CMatrix n = b.adjoint() * b;
      for (int i = 0; i < kDim; ++i) CHECK(n(i, i).real() == doctest::Approx(ops.number(e)(i)));
      // [b, b†] = 1 except on the top level
      const CMatrix comm = b * b.adjoint() - b.adjoint() * b;
      for (int i = 0; i < kDim; ++i) {
        const BareLabel l = BareLabel::from_index(i);
        const int level = e == Element::Q1 ? l.n_q1 : e == Element::Coupler ? l.n_c : l.n_q2;
        CHECK(comm(i, i).real() == doctest::Approx(level == 2 ? -2.0 : 1.0));
      }
    }
  }

  TEST_CASE("hamiltonian is hermitian and validates its inputs") {
    const OperatorMatrix H = build_hamiltonian(SystemParams::paper_2q());
    CHECK(H.hermitian);
    CHECK(H.hermiticity_error() < 1e-14);
    SystemParams bad = SystemParams::paper_2q();
    bad.eta_c = 0.1;
    CHECK_THROWS_AS(build_hamiltonian(bad), Error);
    bad = SystemParams::paper_2q();
    bad.omega_q1 = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("uncoupled spectrum is the bare Duffing ladder") {
    SystemParams p = SystemParams::paper_2q();
    p.g_1c = p.g_2c = p.g_12 = 0.0;
    const EigenSolution s = diagonalize_and_label(build_hamiltonian(p));
    CHECK(s.energy(k101) == doctest::Approx(p.omega_q1 + p.omega_q2).epsilon(1e-12));
    CHECK(s.energy(k200) == doctest::Approx(2 * p.omega_q1 + p.eta_q1).epsilon(1e-12));
    CHECK(s.energy(k020) == doctest::Approx(2 * p.omega_c + p.eta_c).epsilon(1e-12));
    CHECK(zz_exact(p) == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("dressed labels at the gate idle point") {
    const SystemParams p = coupler_at(11.1414);
    const EigenSolution s = diagonalize_and_label(build_hamiltonian(p), 0.99,
                                                  std::span<const BareLabel>(kComputational));
    for (const BareLabel& l : kComputational) CHECK(s.overlap[l.index()] > 0.99);
  }

  TEST_CASE("frozen spectrum and ZZ values") {
    const EigenSolution s = diagonalize_and_label(build_hamiltonian(SystemParams::paper_2q()));
    CHECK(s.energy(k101) == doctest::Approx(9.2687783372).epsilon(1e-9));
    CHECK(s.energy(k100) == doctest::Approx(4.6234323176).epsilon(1e-9));
    CHECK(zz_exact(SystemParams::paper_2q()) * 1e6 == doctest::Approx(61.95315812).epsilon(1e-6));
    CHECK(zz_exact(coupler_at(10.25)) * 1e6 == doctest::Approx(59.18362499).epsilon(1e-6));
    CHECK(zz_exact(coupler_at(11.0)) * 1e6 == doctest::Approx(-1.814419382).epsilon(1e-6));
    CHECK(exact_xy_coupling(coupler_at(11.0)) * 1e3 == doctest::Approx(-0.2742714727).epsilon(1e-6));
  }

  TEST_CASE("ZZ and XY nulls") {
    const ZzNull n = find_zz_null(SystemParams::paper_2q(), 9.5, 12.5);
    REQUIRE(n.candidates.size() == 2);
    CHECK(n.candidates[0] == doctest::Approx(10.89617151).epsilon(1e-7));
    CHECK(n.omega_c == doctest::Approx(11.23649551).epsilon(1e-7));
    CHECK(std::abs(n.zeta) < 1e-11);
    const double xy = xy_null(SystemParams::paper_2q(), 9.5, 12.5);
    CHECK(xy == doctest::Approx(11.14138792).epsilon(1e-7));
    CHECK(std::abs(exact_xy_coupling(coupler_at(xy))) < 1e-9);
    CHECK(std::abs(n.omega_c - xy) < 0.1);
    CHECK_THROWS_AS(find_zz_null(SystemParams::paper_2q(), 10.0, 10.5), Error);
  }

  TEST_CASE("swapping the qubits leaves ZZ and |J| unchanged") {
    for (double wc : {9.8, 10.5, 11.3}) {
      const SystemParams p = coupler_at(wc);
      CHECK(zz_exact(p.swapped_qubits()) == doctest::Approx(zz_exact(p)).epsilon(1e-9));
      CHECK(std::abs(exact_xy_coupling(p.swapped_qubits())) ==
            doctest::Approx(std::abs(exact_xy_coupling(p))).epsilon(1e-9));
    }
  }

  TEST_CASE("CZ anticrossing gap grows as the coupler approaches") {
    SystemParams p = SystemParams::paper_2q();
    const double far = anticrossing_gap(p.with_frequencies(p.omega_q1, 8.0, p.omega_q2), k101, k002,
                                        Element::Q1, 4.3, 4.6).gtilde;
    const double near = anticrossing_gap(p.with_frequencies(p.omega_q1, 6.0, p.omega_q2), k101, k002,
                                         Element::Q1, 4.3, 4.6).gtilde;
    CHECK(near > far);
    CHECK(near > 0.0);
  }

  TEST_CASE("sqrt-law retuning") {
    const SystemParams p = SystemParams::paper_2q();
    const SystemParams r = p.retuned(p.omega_q1 * 4.0, p.omega_c, p.omega_q2);
    CHECK(r.g_1c == doctest::Approx(2.0 * p.g_1c));
    CHECK(r.g_12 == doctest::Approx(2.0 * p.g_12));
    CHECK(r.g_2c == doctest::Approx(p.g_2c));
  }
}
