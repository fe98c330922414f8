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

#include "nzgate/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nzgate/optimize.hpp"

namespace nzgate {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::AmbiguousLabel: return "AmbiguousLabel";
    case ErrorKind::NoResonance: return "NoResonance";
    case ErrorKind::DivergentDetuning: return "DivergentDetuning";
    case ErrorKind::SlewViolation: return "SlewViolation";
    case ErrorKind::StepTooCoarse: return "StepTooCoarse";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::NotCPhaseLike: return "NotCPhaseLike";
    case ErrorKind::NoExchangeFound: return "NoExchangeFound";
    case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorKind::NoNullInRange: return "NoNullInRange";
    case ErrorKind::FitFailed: return "FitFailed";
    case ErrorKind::FitDegenerate: return "FitDegenerate";
    case ErrorKind::Mismatch: return "Mismatch";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

const char* to_string(Element e) {
  switch (e) {
    case Element::Q1: return "q1";
    case Element::Coupler: return "c";
    case Element::Q2: return "q2";
  }
  return "?";
}

SystemParams SystemParams::paper_2q() {
  SystemParams p;
  p.omega_q1 = 4.650;
  p.omega_q2 = 4.662;
  p.omega_c = 10.234;
  p.eta_q1 = -0.211;
  p.eta_q2 = -0.212;
  p.eta_c = -0.256;
  p.g_1c = 0.262;
  p.g_2c = 0.262;
  p.g_12 = 0.01491;
  return p;
}

void SystemParams::validate() const {
  if (!(omega_q1 > 0 && omega_q2 > 0 && omega_c > 0)) {
    throw Error(ErrorKind::InvalidArgument, "SystemParams: frequencies must be positive");
  }
  if (!(eta_q1 < 0 && eta_q2 < 0 && eta_c < 0)) {
    throw Error(ErrorKind::InvalidArgument, "SystemParams: anharmonicities must be negative");
  }
  for (double g : {g_1c, g_2c, g_12}) {
    if (!std::isfinite(g)) throw Error(ErrorKind::InvalidArgument, "SystemParams: non-finite coupling");
  }
}

double SystemParams::omega(Element e) const {
  switch (e) {
    case Element::Q1: return omega_q1;
    case Element::Coupler: return omega_c;
    case Element::Q2: return omega_q2;
  }
  return 0.0;
}

double SystemParams::eta(Element e) const {
  switch (e) {
    case Element::Q1: return eta_q1;
    case Element::Coupler: return eta_c;
    case Element::Q2: return eta_q2;
  }
  return 0.0;
}

SystemParams SystemParams::with_frequencies(double w1, double wc, double w2) const {
  SystemParams p = *this;
  p.omega_q1 = w1;
  p.omega_c = wc;
  p.omega_q2 = w2;
  return p;
}

SystemParams SystemParams::retuned(double w1, double wc, double w2) const {
  SystemParams p = with_frequencies(w1, wc, w2);
  p.g_1c = g_1c * std::sqrt(w1 * wc / (omega_q1 * omega_c));
  p.g_2c = g_2c * std::sqrt(w2 * wc / (omega_q2 * omega_c));
  p.g_12 = g_12 * std::sqrt(w1 * w2 / (omega_q1 * omega_q2));
  return p;
}

SystemParams SystemParams::swapped_qubits() const {
  SystemParams p = *this;
  std::swap(p.omega_q1, p.omega_q2);
  std::swap(p.eta_q1, p.eta_q2);
  std::swap(p.g_1c, p.g_2c);
  return p;
}

BareLabel BareLabel::parse(const std::string& s) {
  if (s.size() != 3 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '2'; })) {
    throw Error(ErrorKind::InvalidArgument, "bad bare label '" + s + "'");
  }
  return BareLabel{s[0] - '0', s[1] - '0', s[2] - '0'};
}

std::string BareLabel::str() const {
  std::ostringstream os;
  os << n_q1 << n_c << n_q2;
  return os.str();
}

double OperatorMatrix::hermiticity_error() const {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

OperatorTable::OperatorTable() {
  Eigen::Matrix3cd b = Eigen::Matrix3cd::Zero();
  b(0, 1) = 1.0;
  b(1, 2) = std::sqrt(2.0);
  const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
  auto kron3 = [](const Eigen::Matrix3cd& a, const Eigen::Matrix3cd& c, const Eigen::Matrix3cd& d) {
    CMatrix out = CMatrix::Zero(kDim, kDim);
    for (int i = 0; i < 27; ++i) {
      for (int j = 0; j < 27; ++j) {
        const BareLabel li = BareLabel::from_index(i);
        const BareLabel lj = BareLabel::from_index(j);
        out(i, j) = a(li.n_q1, lj.n_q1) * c(li.n_c, lj.n_c) * d(li.n_q2, lj.n_q2);
      }
    }
    return out;
  };
  lowering_[0] = kron3(b, id, id);
  lowering_[1] = kron3(id, b, id);
  lowering_[2] = kron3(id, id, b);
  for (int e = 0; e < 3; ++e) {
    number_[e] = Eigen::VectorXd(kDim);
    anharm_[e] = Eigen::VectorXd(kDim);
    for (int i = 0; i < kDim; ++i) {
      const BareLabel l = BareLabel::from_index(i);
      const int n = e == 0 ? l.n_q1 : (e == 1 ? l.n_c : l.n_q2);
      number_[e](i) = n;
      anharm_[e](i) = n * (n - 1);
    }
  }
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {0, 2}}};
  for (int k = 0; k < 3; ++k) {
    const CMatrix& bi = lowering_[pairs[k].first];
    const CMatrix& bj = lowering_[pairs[k].second];
    const CMatrix exchange = bi.adjoint() * bj + bi * bj.adjoint();
    const CMatrix counter = bi.adjoint() * bj.adjoint() + bi * bj;
    coupling_[0][k] = exchange - counter;
    coupling_[1][k] = exchange;
  }
}

const OperatorTable& OperatorTable::get() {
  static const OperatorTable table;
  return table;
}

const CMatrix& OperatorTable::coupling(Element a, Element b, CouplingForm form) const {
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  int k = 0;
  if ((ia == 0 && ib == 1) || (ia == 1 && ib == 0)) k = 0;
  else if ((ia == 1 && ib == 2) || (ia == 2 && ib == 1)) k = 1;
  else if ((ia == 0 && ib == 2) || (ia == 2 && ib == 0)) k = 2;
  else throw Error(ErrorKind::InvalidArgument, "coupling: elements must differ");
  return coupling_[form == CouplingForm::Full ? 0 : 1][k];
}

ControlPoint control_point(const SystemParams& p) {
  return ControlPoint{p.omega_q1, p.omega_c, p.omega_q2, p.g_1c, p.g_2c, p.g_12};
}

void assemble_hamiltonian(const SystemParams& p, const ControlPoint& cp, CMatrix& out) {
  const OperatorTable& ops = OperatorTable::get();
  out.noalias() = cp.g_1c * ops.coupling(Element::Q1, Element::Coupler, p.coupling_form);
  out.noalias() += cp.g_2c * ops.coupling(Element::Coupler, Element::Q2, p.coupling_form);
  out.noalias() += cp.g_12 * ops.coupling(Element::Q1, Element::Q2, p.coupling_form);
  const std::array<double, 3> w{cp.omega_q1, cp.omega_c, cp.omega_q2};
  const std::array<double, 3> eta{p.eta_q1, p.eta_c, p.eta_q2};
  for (int i = 0; i < kDim; ++i) {
    double d = 0.0;
    for (int e = 0; e < 3; ++e) {
      d += w[e] * ops.number(static_cast<Element>(e))(i) +
           0.5 * eta[e] * ops.anharmonic(static_cast<Element>(e))(i);
    }
    out(i, i) += d;
  }
}

OperatorMatrix build_hamiltonian(const SystemParams& params) {
  params.validate();
  OperatorMatrix H;
  H.m.resize(kDim, kDim);
  assemble_hamiltonian(params, control_point(params), H.m);
  H.hermitian = H.hermiticity_error() < 1e-12;
  return H;
}

EigenSolution diagonalize_and_label(const OperatorMatrix& H, double threshold,
                                    std::span<const BareLabel> required) {
  if (!H.hermitian) throw Error(ErrorKind::InvalidArgument, "diagonalize_and_label: H not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H.m);
  EigenSolution sol;
  sol.energies = es.eigenvalues();
  sol.vectors = es.eigenvectors();
  std::array<int, kDim> claims{};
  for (int i = 0; i < kDim; ++i) {
    int best = 0;
    double best_p = -1.0;
    for (int j = 0; j < kDim; ++j) {
      const double pj = std::norm(sol.vectors(i, j));
      if (pj > best_p + 1e-14) {
        best_p = pj;
        best = j;
      }
    }
    sol.assignment[i] = best;
    sol.overlap[i] = best_p;
    ++claims[best];
  }
  for (const BareLabel& l : required) {
    const int i = l.index();
    if (sol.overlap[i] < threshold) {
      throw Error(ErrorKind::AmbiguousLabel,
                  "label |" + l.str() + "> best overlap " + std::to_string(sol.overlap[i]) +
                      " below threshold");
    }
    if (claims[sol.assignment[i]] > 1) {
      throw Error(ErrorKind::AmbiguousLabel,
                  "label |" + l.str() + "> shares its eigenvector with another label");
    }
  }
  return sol;
}

std::array<int, 2> dominant_pair(const EigenSolution& sol, BareLabel a, BareLabel b) {
  const int ia = a.index();
  const int ib = b.index();
  int first = -1, second = -1;
  double wf = -1.0, ws = -1.0;
  for (int j = 0; j < kDim; ++j) {
    const double w = std::norm(sol.vectors(ia, j)) + std::norm(sol.vectors(ib, j));
    if (w > wf) {
      second = first;
      ws = wf;
      first = j;
      wf = w;
    } else if (w > ws) {
      second = j;
      ws = w;
    }
  }
  return {std::min(first, second), std::max(first, second)};
}

double zz_exact(const SystemParams& params) {
  using namespace labels;
  const std::array<BareLabel, 2> req{k000, k101};
  const EigenSolution sol = diagonalize_and_label(build_hamiltonian(params), 0.5, req);
  const auto pair = dominant_pair(sol, k100, k001);
  return sol.energy(k101) + sol.energy(k000) - sol.energies(pair[0]) - sol.energies(pair[1]);
}

double exact_exchange_coupling(const SystemParams& params, BareLabel a, BareLabel b) {
  const EigenSolution sol = diagonalize_and_label(build_hamiltonian(params));
  const auto pair = dominant_pair(sol, a, b);
  // Projection of the dressed pair onto the bare pair, then polar factor.
  Eigen::Matrix2cd P;
  for (int r = 0; r < 2; ++r) {
    const int bare = r == 0 ? a.index() : b.index();
    for (int c = 0; c < 2; ++c) P(r, c) = sol.vectors(bare, pair[c]);
  }
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(P, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2cd W = svd.matrixU() * svd.matrixV().adjoint();
  const Eigen::Vector2d e(sol.energies(pair[0]), sol.energies(pair[1]));
  const Eigen::Matrix2cd heff = W * e.cast<cplx>().asDiagonal() * W.adjoint();
  return heff(0, 1).real();
}

double exact_xy_coupling(const SystemParams& params) {
  return exact_exchange_coupling(params, labels::k100, labels::k001);
}

double dressed_overlap(const SystemParams& params, BareLabel bare, BareLabel dressed) {
  const EigenSolution sol = diagonalize_and_label(build_hamiltonian(params));
  return std::norm(sol.vectors(bare.index(), sol.index_of(dressed)));
}

namespace {
SystemParams with_element(const SystemParams& p, Element e, double x) {
  switch (e) {
    case Element::Q1: return p.with_frequencies(x, p.omega_c, p.omega_q2);
    case Element::Coupler: return p.with_frequencies(p.omega_q1, x, p.omega_q2);
    case Element::Q2: return p.with_frequencies(p.omega_q1, p.omega_c, x);
  }
  return p;
}
}  // namespace

double pair_splitting(const SystemParams& params, BareLabel a, BareLabel b, Element tuning,
                      double x) {
  const EigenSolution sol = diagonalize_and_label(build_hamiltonian(with_element(params, tuning, x)));
  const auto pair = dominant_pair(sol, a, b);
  return std::abs(sol.energies(pair[1]) - sol.energies(pair[0]));
}

GapResult anticrossing_gap(const SystemParams& params, BareLabel a, BareLabel b, Element tuning,
                           double lo, double hi, int grid) {
  if (!(hi > lo) || grid < 3) throw Error(ErrorKind::InvalidArgument, "anticrossing_gap: bad bracket");
  auto f = [&](double x) { return pair_splitting(params, a, b, tuning, x); };
  std::vector<double> fs(grid);
  int best = 0;
  for (int i = 0; i < grid; ++i) {
    fs[i] = f(lo + (hi - lo) * i / (grid - 1));
    if (fs[i] < fs[best]) best = i;
  }
  if (best == 0 || best == grid - 1) {
    throw Error(ErrorKind::NoResonance, "anticrossing_gap: no minimum inside [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  const double step = (hi - lo) / (grid - 1);
  const double x0 = lo + step * (best - 1);
  const opt::Minimum m = opt::golden_section(f, x0, x0 + 2 * step, 1e-10);
  return GapResult{m.f / 2.0, m.f, m.x};
}

}  // namespace nzgate
