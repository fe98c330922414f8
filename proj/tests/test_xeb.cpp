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

#include <unsupported/Eigen/KroneckerProduct>

#include "nzgate/xeb.hpp"

using namespace nzgate;

namespace {
SystemParams idle_point() { return SystemParams::paper_2q().with_frequencies(4.65, 11.1414, 4.662); }

XebConfig small(int circuits = 10) {
  XebConfig c;
  c.depths = {1, 2, 4, 8, 16, 32, 64};
  c.circuits = circuits;
  c.bootstrap = 50;
  return c;
}
}  // namespace

TEST_SUITE("xeb") {
  TEST_CASE("fidelity and decoherence estimate arithmetic") {
    CHECK(fidelity_from_p(0.97, 0.97) == doctest::Approx(1.0));
    CHECK(fidelity_from_p(1.0, 0.99) == doctest::Approx(0.9925));
    CHECK(p_from_cycle_error(0.0075) == doctest::Approx(0.99));
    CHECK(decoherence_error_estimate(0.0073, 0.0026, 0.0029) == doctest::Approx(0.00035));
    CHECK(decoherence_error_estimate(0.004, 0.004, 0.0) == doctest::Approx(0.0));
    const double F = fidelity_from_p(p_from_cycle_error(0.0029), p_from_cycle_error(0.0081));
    CHECK(std::abs(F - 0.9948) < 0.0015);
  }

  TEST_CASE("decay fit recovers exact parameters") {
    std::vector<int> d{1, 2, 4, 8, 16, 32, 64, 100};
    std::vector<double> y;
    for (int x : d) y.push_back(0.8 * std::pow(0.97, x) + 0.05);
    const DecayFit f = fit_decay(d, y);
    CHECK(f.p.value == doctest::Approx(0.97).epsilon(1e-7));
    CHECK(f.A.value == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(f.B.value == doctest::Approx(0.05).epsilon(1e-5));
    CHECK(f.residual < 1e-10);
    CHECK(fit_decay(d, std::vector<double>(d.size(), 1.0)).p.value == 1.0);
    CHECK_THROWS_AS(fit_decay(d, std::vector<double>(d.size(), 0.4)), Error);
  }

  TEST_CASE("config validation") {
    XebConfig c = small();
    c.depths = {1, 4, 2};
    CHECK_THROWS_AS(c.validate(), Error);
    c = small();
    c.circuits = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = small();
    c.interleave = Interleave::Channel;
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("superoperator basics") {
    Eigen::Matrix4cd U = Eigen::Matrix4cd::Identity();
    U(3, 3) = -1.0;
    const CMatrix Ue = embed_two_qubit(U);
    CMatrix rho = CMatrix::Zero(kXebDim, kXebDim);
    rho.topLeftCorner(4, 4).setConstant(0.25);
    const CMatrix out = Superop::unitary(Ue).apply(rho);
    CHECK((out - Ue * rho * Ue.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    const Superop twice = Superop::unitary(Ue).then(Superop::unitary(Ue));
    CHECK((twice.apply(rho) - rho).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(xeb_labels()[3] == labels::k101);
  }

  TEST_CASE("noiseless reference gives p = 1 and no leakage") {
    const XebFit f = run_xeb(small());
    CHECK(f.xeb.p.value == doctest::Approx(1.0));
    CHECK(f.xeb.p.lo <= 1.0);
    for (double l : f.mean_leakage) CHECK(std::abs(l) < 1e-12);
  }

  TEST_CASE("injected depolarization is recovered") {
    XebConfig c = small(20);
    c.inject_depolarizing = 0.99;
    c.depths = {1, 2, 4, 8, 16, 32, 64, 100};
    const XebFit f = run_xeb(c);
    CHECK(std::abs(f.xeb.p.value - 0.99) < 1e-3);
    CHECK(f.cycle_error.value == doctest::Approx(0.0075).epsilon(0.02));
  }

  TEST_CASE("seeded runs are reproducible") {
    XebConfig c = small(4);
    c.inject_depolarizing = 0.98;
    const XebFit a = run_xeb(c);
    const XebFit b = run_xeb(c);
    CHECK(a.xeb_per_circuit == b.xeb_per_circuit);
    c.parallel = false;
    CHECK(run_xeb(c).xeb_per_circuit == a.xeb_per_circuit);
    c.seed = 99;
    CHECK(run_xeb(c).xeb_per_circuit != a.xeb_per_circuit);
  }

  TEST_CASE("shot sampling converges to exact probabilities") {
    XebConfig c;
    c.depths = {1, 2, 3, 4};
    c.circuits = 4;
    c.bootstrap = 0;
    c.inject_depolarizing = 0.95;
    const XebFit exact = run_xeb(c);
    c.shots = 1000000;
    const XebFit shot = run_xeb(c);
    for (std::size_t d = 0; d < 4; ++d) {
      for (int k = 0; k < 4; ++k) {
        // D·Σ p P has σ below D·max P / sqrt(N) ≤ 4/sqrt(N)
        CHECK(std::abs(shot.xeb_num_per_circuit[d][k] - exact.xeb_num_per_circuit[d][k]) <
              3.0 * 4.0 / 1000.0);
      }
    }
  }

  TEST_CASE("more idle noise lowers p") {
    XebConfig c = small(8);
    double last = 1.0;
    for (double t1 : {200e3, 50e3, 10e3}) {
      NoiseModel n = NoiseModel::none();
      n.enabled = {true, false, true};
      n.element[0] = n.element[2] = ElementNoise{t1, t1};
      c.idle = idle_channel(idle_point(), n, 40.0);
      const double p = run_xeb(c).xeb.p.value;
      CHECK(p < last);
      last = p;
    }
  }

  TEST_CASE("reference sequences do not leak") {
    XebConfig c = small(6);
    c.idle = idle_channel(idle_point(), NoiseModel::paper_idle(), 40.0);
    const XebFit f = run_xeb(c);
    for (double l : f.mean_leakage) CHECK(std::abs(l) < 1e-8);
    CHECK(f.purity_error.value > 0.0);
  }

  TEST_CASE("leakage rate is positive and matches an injected decay into 010") {
    // Each cycle moves a fraction q of |11⟩ into the coupler state.
    const double q = 0.004;
    CMatrix k0 = CMatrix::Identity(kXebDim, kXebDim);
    k0(3, 3) = std::sqrt(1.0 - q);
    CMatrix k1 = CMatrix::Zero(kXebDim, kXebDim);
    k1(4, 3) = std::sqrt(q);
    XebConfig c = small(6);
    auto sup = [](const CMatrix& k) { return CMatrix(Eigen::kroneckerProduct(k.conjugate(), k)); };
    c.idle = Superop{sup(k0) + sup(k1)};
    const XebFit f = run_xeb(c);
    CHECK(f.mean_leakage.back() > f.mean_leakage.front());
    // |11⟩ holds a quarter of the population on average.
    CHECK(f.leakage_error.value == doctest::Approx(q / 4.0).epsilon(0.3));
  }

  TEST_CASE("ideal CZ interleave keeps p = 1") {
    XebConfig c = small(6);
    c.interleave = Interleave::IdealCZ;
    CHECK(run_xeb(c).xeb.p.value == doctest::Approx(1.0));
  }

  TEST_CASE("task generators are independent of worker count") {
    auto a = task_rng(5, 3);
    auto b = task_rng(5, 3);
    CHECK(a() == b());
    CHECK(task_rng(5, 3)() != task_rng(5, 4)());
  }
}
