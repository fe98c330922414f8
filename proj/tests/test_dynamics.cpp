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

#include "nzgate/dynamics.hpp"
#include "nzgate/metrics.hpp"

using namespace nzgate;
using namespace nzgate::labels;

namespace {
SystemParams idle_point() { return SystemParams::paper_2q().with_frequencies(4.65, 11.1414, 4.662); }

GateProtocolParams calibrated() {
  GateProtocolParams gp = GateProtocolParams::paper_defaults();
  gp.V = 0.186488;
  gp.coupler_on_freq = 5.38024;
  gp.a_int = 0.0345394;
  return gp;
}

SystemParams uncoupled() {
  SystemParams p = idle_point();
  p.g_1c = p.g_2c = p.g_12 = 0.0;
  return p;
}

CMatrix ket_density(const CVector& v) { return v * v.adjoint(); }

CVector basis(BareLabel l) {
  CVector v = CVector::Zero(kDim);
  v(l.index()) = 1.0;
  return v;
}

std::vector<CMatrix> random_batch(int n) {
  std::srand(7);
  std::vector<CMatrix> r(n);
  for (auto& m : r) {
    const CMatrix a = CMatrix::Random(kDim, kDim);
    m = a * a.adjoint();
    m /= m.trace();
  }
  return r;
}
}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("noise model") {
    const ElementNoise e{100.0, 150.0};
    CHECK(e.t_phi() == doctest::Approx(1.0 / (1.0 / 150.0 - 1.0 / 200.0)));
    CHECK(ElementNoise::from_t_phi(1000.0, 1000.0).t_phi() == doctest::Approx(1000.0));
    NoiseModel bad = NoiseModel::paper_gate();
    bad.element[0].T2E = 3.0 * bad.element[0].T1;
    CHECK_THROWS_AS(bad.validate(), Error);
    const NoiseModel c = NoiseModel::paper_gate().only(Element::Coupler);
    CHECK_FALSE(c.enabled[0]);
    CHECK(c.enabled[1]);
    CHECK(JumpOperatorSet::compile(NoiseModel::none()).jumps.empty());
    CHECK(JumpOperatorSet::compile(NoiseModel::paper_gate()).jumps.size() == 6);
  }

  TEST_CASE("hermitian exponential") {
    const CMatrix H = build_hamiltonian(idle_point()).m;
    const CMatrix U = hermitian_exp(H, 3.7);
    CHECK((U.adjoint() * U - CMatrix::Identity(kDim, kDim)).cwiseAbs().maxCoeff() < 1e-12);
    const CMatrix V = hermitian_exp(H, 1.2) * hermitian_exp(H, 2.5);
    CHECK((U - V).cwiseAbs().maxCoeff() < 1e-11);
  }

  TEST_CASE("gate propagator is unitary") {
    const Schedule s = make_cphase_schedule(idle_point(), calibrated());
    const CMatrix U = gate_propagator(idle_point(), s);
    CHECK((U.adjoint() * U - CMatrix::Identity(kDim, kDim)).cwiseAbs().maxCoeff() < 1e-7);
  }

  TEST_CASE("integrator converges with substeps") {
    GateProtocolParams gp = calibrated();
    gp.t_d = 0.0;
    gp.t_weak = 0.0;
    const Schedule s = make_cphase_schedule(idle_point(), gp);
    PropagationOptions two;
    two.substeps = 2;
    const CVector a = propagate_unitary(idle_point(), s, basis(k101));
    const CVector b = propagate_unitary(idle_point(), s, basis(k101), two);
    CHECK(1.0 - std::norm(a.dot(b)) < 1e-10);
    PropagationOptions audit;
    audit.audit = true;
    CHECK_NOTHROW(propagate_unitary(idle_point(), s, basis(k101), audit));
  }

  TEST_CASE("ket and density checks") {
    CHECK_THROWS_AS(check_ket(2.0 * basis(k000)), Error);
    CMatrix rho = ket_density(basis(k000));
    CHECK_NOTHROW(check_density(rho));
    rho(0, 0) = 1.2;
    rho(1, 1) = -0.2;
    CHECK_THROWS_AS(check_density(rho), Error);
  }

  TEST_CASE("relaxation matches the exponential law") {
    NoiseModel n = NoiseModel::none();
    n.enabled[0] = true;
    n.element[0] = ElementNoise::from_t_phi(1000.0, kInf);
    const Schedule s = Schedule::idle(uncoupled(), 500.0, 0.5);
    const CMatrix rho = lindblad_evolve(uncoupled(), s, ket_density(basis(k100)), n);
    const double want = std::exp(-0.5);
    CHECK(std::abs(rho(k100.index(), k100.index()).real() - want) / want < 1e-4);
    CHECK(rho(k000.index(), k000.index()).real() == doctest::Approx(1.0 - want).epsilon(1e-6));
  }

  TEST_CASE("echo dephasing matches the analytic coherence") {
    NoiseModel n = NoiseModel::none();
    n.enabled[0] = true;
    n.element[0] = ElementNoise{2000.0, 1500.0};
    const Schedule s = Schedule::idle(uncoupled(), 400.0, 0.5);
    const CVector plus = (basis(k000) + basis(k100)) / std::sqrt(2.0);
    const CMatrix rho = lindblad_evolve(uncoupled(), s, ket_density(plus), n);
    const double want = 0.5 * std::exp(-400.0 / 1500.0);
    CHECK(std::abs(rho(k000.index(), k100.index())) == doctest::Approx(want).epsilon(1e-4));
  }

  TEST_CASE("trace preserved through a noisy gate") {
    const Schedule s = make_cphase_schedule(idle_point(), calibrated());
    NoiseModel strong = NoiseModel::paper_gate();
    for (auto& e : strong.element) e = ElementNoise{2000.0, 3000.0};
    std::vector<CMatrix> rho0{ket_density(basis(k101)), ket_density((basis(k100) + basis(k001)) / std::sqrt(2.0))};
    const auto out = lindblad_evolve(idle_point(), s, rho0, strong);
    for (const auto& r : out) {
      CHECK(std::abs(r.trace().real() - 1.0) < 1e-7);
      CHECK(min_eigenvalue(r) > -1e-9);
    }
  }

  TEST_CASE("noiseless Lindblad equals the unitary run") {
    GateProtocolParams gp = calibrated();
    gp.t_d = 0.0;
    const Schedule s = make_cphase_schedule(idle_point(), gp);
    const CVector psi = propagate_unitary(idle_point(), s, basis(k101));
    const CMatrix rho = lindblad_evolve(idle_point(), s, ket_density(basis(k101)), NoiseModel::none());
    CHECK((rho - ket_density(psi)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("serial and parallel kernels agree") {
    const auto d = JumpOperatorSet::compile(NoiseModel::paper_gate()).dissipator();
    auto a = random_batch(9);
    auto b = a;
    kernels::dissipate_batch_serial(d, a, 0.01);
    kernels::dissipate_batch_parallel(d, b, 0.01);
    for (int i = 0; i < 9; ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
    const CMatrix U = hermitian_exp(build_hamiltonian(idle_point()).m, 0.3);
    kernels::conjugate_batch_serial(U, a);
    kernels::conjugate_batch_parallel(U, b);
    for (int i = 0; i < 9; ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
    const auto sq = kernels::map_serial<double>(50, [](int i) { return std::sin(i); });
    const auto pq = kernels::map_parallel<double>(50, [](int i) { return std::sin(i); });
    CHECK(sq == pq);
    CHECK_THROWS_AS(kernels::map_parallel<int>(4, [](int i) -> int {
                      if (i == 2) throw Error(ErrorKind::FitFailed, "x");
                      return i;
                    }),
                    Error);
  }

  TEST_CASE("serial and parallel Lindblad agree") {
    GateProtocolParams gp = calibrated();
    gp.t_d = 0.0;
    gp.t_weak = 0.0;
    const Schedule s = make_cphase_schedule(idle_point(), gp);
    PropagationOptions ser;
    ser.parallel = false;
    std::vector<CMatrix> rho0{ket_density(basis(k101)), ket_density(basis(k100))};
    const auto a = lindblad_evolve(idle_point(), s, rho0, NoiseModel::paper_gate());
    const auto b = lindblad_evolve(idle_point(), s, rho0, NoiseModel::paper_gate(), ser);
    for (int i = 0; i < 2; ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() < 1e-14);
  }
}
