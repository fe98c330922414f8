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

#include "nzgate/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "nzgate/kernels.hpp"
#include "nzgate/optimize.hpp"

namespace nzgate {

namespace {
constexpr cplx kI{0.0, 1.0};
}

double wrap_phase(double x) {
  const double pi = std::numbers::pi;
  double y = std::remainder(x, 2.0 * pi);
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

PhaseSet extract_phases(const Eigen::Matrix4cd& U) {
  for (int k = 0; k < 4; ++k) {
    if (!(std::abs(U(k, k)) > 0.99)) {
      throw Error(ErrorKind::NotCPhaseLike,
                  "diagonal element " + std::to_string(k) + " has magnitude " +
                      std::to_string(std::abs(U(k, k))));
    }
  }
  const double ref = std::arg(U(0, 0));
  PhaseSet p;
  p.phi_000 = 0.0;
  p.phi_001 = wrap_phase(std::arg(U(1, 1)) - ref);
  p.phi_100 = wrap_phase(std::arg(U(2, 2)) - ref);
  p.phi_101 = wrap_phase(std::arg(U(3, 3)) - ref);
  p.phi_2Q = wrap_phase(p.phi_101 - p.phi_001 - p.phi_100 + p.phi_000);
  return p;
}

DressedFrame DressedFrame::at(const SystemParams& sys, const ControlPoint& cp) {
  OperatorMatrix H;
  H.m.resize(kDim, kDim);
  assemble_hamiltonian(sys, cp, H.m);
  H.hermitian = true;
  DressedFrame f;
  f.sol = diagonalize_and_label(H, 0.5, labels::kComputational);
  f.cp = cp;
  return f;
}

DressedFrame DressedFrame::of(const SystemParams& sys, const Schedule& schedule, double offset) {
  ControlPoint cp = schedule.sample(0);
  cp.omega_q1 += offset;
  cp.omega_c += offset;
  cp.omega_q2 += offset;
  return at(sys, cp);
}

CMatrix DressedFrame::basis(std::span<const BareLabel> ls) const {
  CMatrix B(kDim, static_cast<int>(ls.size()));
  for (std::size_t i = 0; i < ls.size(); ++i) B.col(static_cast<int>(i)) = sol.state(ls[i]);
  return B;
}

CMatrix DressedFrame::to_rotating(const CMatrix& state, double T) const {
  const CVector ph = (kI * (kTwoPi * T) * sol.energies.cast<cplx>()).array().exp();
  return sol.vectors * (ph.asDiagonal() * (sol.vectors.adjoint() * state));
}

Eigen::Matrix4cd computational_block(const CMatrix& U, const DressedFrame& frame, double T) {
  const CMatrix B = frame.basis(labels::kComputational);
  Eigen::Matrix4cd M = B.adjoint() * (U.cols() == 4 ? U : CMatrix(U * B));
  for (int j = 0; j < 4; ++j) {
    M.row(j) *= std::exp(kI * (kTwoPi * T * frame.energy(labels::kComputational[j])));
  }
  return M;
}

std::array<Eigen::Vector4cd, 16> product_preparations() {
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<Eigen::Vector2cd, 4> single{
      Eigen::Vector2cd(1.0, 0.0), Eigen::Vector2cd(0.0, 1.0), Eigen::Vector2cd(s, s),
      Eigen::Vector2cd(s, -s)};
  std::array<Eigen::Vector4cd, 16> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Eigen::Vector4cd v;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) v(2 * i + j) = single[a](i) * single[b](j);
      }
      out[4 * a + b] = v;
    }
  }
  return out;
}

double state_fidelity(const CMatrix& rho, const CMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  const Eigen::VectorXd sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sr = es.eigenvectors() * sq.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  const CMatrix M = sr * sigma * sr;
  Eigen::SelfAdjointEigenSolver<CMatrix> em(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

double average_state_fidelity(const std::vector<CMatrix>& noisy, const std::vector<CMatrix>& ideal) {
  if (noisy.size() != ideal.size() || noisy.empty()) {
    throw Error(ErrorKind::InvalidArgument, "average_state_fidelity: lists differ in length");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < noisy.size(); ++k) s += state_fidelity(noisy[k], ideal[k]);
  return s / static_cast<double>(noisy.size());
}

namespace {

struct GateRun {
  DressedFrame frame;
  CMatrix B;      // 27×4 dressed computational states
  CMatrix X;      // propagated B, rotating frame
  Eigen::Matrix4cd block;
  PhaseSet phases;
  double T = 0.0;
};

GateRun run_gate(const SystemParams& sys, const Schedule& schedule, const PropagationOptions& opts) {
  GateRun r{DressedFrame::of(sys, schedule, opts.frame_offset), {}, {}, {}, {}, schedule.duration()};
  r.B = r.frame.basis(labels::kComputational);
  r.X = r.frame.to_rotating(propagate(sys, schedule, r.B, opts), r.T);
  r.block = r.B.adjoint() * r.X;
  r.phases = extract_phases(r.block);
  return r;
}

/// Ideal CPhase(φ_2Q) with the gate's own single-qubit phases, as a 4-vector map.
Eigen::Vector4cd ideal_diagonal(const Eigen::Matrix4cd& block) {
  Eigen::Vector4cd d;
  for (int k = 0; k < 4; ++k) d(k) = std::polar(1.0, std::arg(block(k, k)));
  return d;
}

}  // namespace

PhaseSet gate_phases(const SystemParams& sys, const Schedule& schedule, const PropagationOptions& opts) {
  return run_gate(sys, schedule, opts).phases;
}

GateReport analyze_gate(const SystemParams& sys, const Schedule& schedule,
                        const PropagationOptions& opts) {
  const GateRun r = run_gate(sys, schedule, opts);
  GateReport rep;
  rep.phases = r.phases;
  rep.duration = r.T;
  const CVector psi = r.X.col(3);
  double comp = 0.0;
  for (int i = 0; i < kDim; ++i) {
    const BareLabel l = BareLabel::from_index(i);
    const double p = std::norm(r.frame.state(l).dot(psi));
    rep.populations.emplace_back(l, p);
    const bool is_comp = std::find(labels::kComputational.begin(), labels::kComputational.end(), l) !=
                         labels::kComputational.end();
    if (is_comp) comp += p;
    if (l.n_c > 0) rep.coupler_leakage += p;
  }
  rep.leakage = 1.0 - comp;
  const Eigen::Vector4cd d = ideal_diagonal(r.block);
  double f = 0.0;
  for (const Eigen::Vector4cd& c : product_preparations()) {
    const CVector out = r.X * c;
    const CVector ideal = r.B * (d.cwiseProduct(c));
    f += std::norm(ideal.dot(out));
  }
  rep.fidelity = f / 16.0;
  return rep;
}

NoiseErrorReport gate_error(const SystemParams& sys, const Schedule& schedule,
                            const NoiseModel& noise, const PropagationOptions& opts) {
  const GateRun r = run_gate(sys, schedule, opts);
  const Eigen::Vector4cd d = ideal_diagonal(r.block);
  const CMatrix Xlab = propagate(sys, schedule, r.B, opts);
  const auto preps = product_preparations();
  std::vector<CMatrix> rho0, clean, ideal;
  for (const Eigen::Vector4cd& c : preps) {
    const CVector psi0 = r.B * c;
    rho0.push_back(psi0 * psi0.adjoint());
    const CVector out = Xlab * c;
    clean.push_back(out * out.adjoint());
    const CVector id = r.B * d.cwiseProduct(c);
    ideal.push_back(id * id.adjoint());
  }
  PropagationOptions lopts = opts;
  lopts.record_stride = 0;
  std::vector<CMatrix> noisy = lindblad_evolve(sys, schedule, rho0, noise, lopts);
  NoiseErrorReport rep;
  rep.error_vs_noiseless = 1.0 - average_state_fidelity(noisy, clean);
  std::vector<CMatrix> noisy_rot, clean_rot;
  for (std::size_t k = 0; k < noisy.size(); ++k) {
    const CMatrix R = r.frame.to_rotating(CMatrix::Identity(kDim, kDim), r.T);
    noisy_rot.push_back(R * noisy[k] * R.adjoint());
    clean_rot.push_back(R * clean[k] * R.adjoint());
  }
  rep.error_vs_ideal = 1.0 - average_state_fidelity(noisy_rot, ideal);
  rep.noiseless_error = 1.0 - average_state_fidelity(clean_rot, ideal);
  return rep;
}

namespace {

double safe_zz(const SystemParams& p) {
  try {
    return zz_exact(p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::AmbiguousLabel) return std::nan("");
    throw;
  }
}

double safe_xy(const SystemParams& p) {
  try {
    return exact_xy_coupling(p);
  } catch (const Error&) {
    return std::nan("");
  }
}

}  // namespace

ZzNull find_zz_null(const SystemParams& sys, double lo, double hi, bool modulated, int grid) {
  if (!(hi > lo) || grid < 3) throw Error(ErrorKind::InvalidArgument, "find_zz_null: bad range");
  auto at = [&](double wc) {
    return modulated ? sys.retuned(sys.omega_q1, wc, sys.omega_q2)
                     : sys.with_frequencies(sys.omega_q1, wc, sys.omega_q2);
  };
  auto zz = [&](double wc) { return safe_zz(at(wc)); };
  const std::vector<double> roots = opt::all_roots(zz, lo, hi, grid, 1e-9);
  if (roots.empty()) {
    double best = hi, best_abs = INFINITY;
    for (int i = 0; i < grid; ++i) {
      const double x = lo + (hi - lo) * i / (grid - 1);
      const double z = std::abs(zz(x));
      if (z < best_abs) {
        best_abs = z;
        best = x;
      }
    }
    throw Error(ErrorKind::NoNullInRange,
                "no ZZ null in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                    "] GHz; smallest |zeta| " + std::to_string(best_abs * 1e6) + " kHz at " +
                    std::to_string(best) + " GHz");
  }
  ZzNull out;
  out.candidates = roots;
  out.xy_null = std::nan("");
  const std::vector<double> xy = opt::all_roots([&](double wc) { return safe_xy(at(wc)); }, lo, hi, grid, 1e-9);
  double pick = roots.front();
  if (!xy.empty()) {
    out.xy_null = xy.front();
    for (double r : roots) {
      if (std::abs(r - out.xy_null) < std::abs(pick - out.xy_null)) pick = r;
    }
  }
  out.omega_c = pick;
  out.zeta = zz(pick);
  out.J = safe_xy(at(pick));
  return out;
}

double ramsey_zz_angle(const SystemParams& sys, double idle_time, bool control_excited) {
  using namespace labels;
  const DressedFrame f = DressedFrame::at(sys, control_point(sys));
  const BareLabel g = control_excited ? k001 : k000;
  const BareLabel e = control_excited ? k101 : k100;
  const CVector psi0 = (f.state(g) + f.state(e)) / std::sqrt(2.0);
  CVector psi = psi0;
  if (idle_time > 0.0) {
    psi = propagate_unitary(sys, Schedule::idle(sys, idle_time, idle_time), psi0);
  }
  const cplx ratio = f.state(e).dot(psi) / f.state(g).dot(psi);
  const double precession = kTwoPi * (f.energy(k100) - f.energy(k000)) * idle_time;
  return wrap_phase(-std::arg(ratio) - precession);
}

std::vector<double> ramsey_zz_curve(const SystemParams& sys, const std::vector<double>& times) {
  std::vector<double> out;
  double prev = 0.0;
  for (double t : times) {
    const double raw = wrap_phase(ramsey_zz_angle(sys, t, true) - ramsey_zz_angle(sys, t, false));
    const double v = prev + wrap_phase(raw - prev);
    out.push_back(v);
    prev = v;
  }
  return out;
}

std::array<double, 3> fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y) {
  const int n = static_cast<int>(t.size());
  if (n < 8 || y.size() != t.size()) throw Error(ErrorKind::InvalidArgument, "fit_sinusoid: too few samples");
  const double span = t.back() - t.front();
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  // Periodogram on the natural grid, then least-squares refinement.
  int best = 1;
  double best_pow = -1.0;
  for (int k = 1; k <= n / 2; ++k) {
    const double f = k / span;
    cplx s = 0.0;
    for (int i = 0; i < n; ++i) s += (y[i] - mean) * std::exp(-kI * (kTwoPi * f * t[i]));
    if (std::norm(s) > best_pow) {
      best_pow = std::norm(s);
      best = k;
    }
  }
  auto solve = [&](double f, Eigen::Vector3d* coef) {
    Eigen::MatrixXd A(n, 3);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = std::cos(kTwoPi * f * t[i]);
      A(i, 2) = std::sin(kTwoPi * f * t[i]);
      b(i) = y[i];
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    if (coef) *coef = c;
    return (A * c - b).squaredNorm();
  };
  const double f0 = best / span;
  const opt::Minimum m = opt::golden_section([&](double f) { return solve(f, nullptr); },
                                             std::max(f0 - 1.0 / span, 0.5 / span), f0 + 1.0 / span,
                                             1e-12 * std::max(f0, 1.0));
  Eigen::Vector3d c;
  const double res = solve(m.x, &c);
  return {m.x, 2.0 * std::hypot(c(1), c(2)), std::sqrt(res / n)};
}

namespace {

struct SwapProblem {
  SystemParams base;
  bool modulated;
  double omega_c;
  BareLabel a, b;

  SystemParams params(double x) const {
    return modulated ? base.retuned(base.omega_q1, omega_c, x)
                     : base.with_frequencies(base.omega_q1, omega_c, x);
  }

  std::vector<double> signal(double x, const std::vector<double>& t) const {
    OperatorMatrix H = build_hamiltonian(params(x));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H.m);
    const CVector ca = es.eigenvectors().row(a.index()).adjoint();
    const CVector cb = es.eigenvectors().row(b.index()).transpose();
    const CVector w = cb.cwiseProduct(ca);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      cplx amp = 0.0;
      for (int n = 0; n < kDim; ++n) amp += w(n) * std::exp(-kI * (kTwoPi * es.eigenvalues()(n) * t[i]));
      y[i] = std::norm(amp);
    }
    return y;
  }
};

std::vector<double> time_grid(double window, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = window * i / (n - 1);
  return t;
}

}  // namespace

SwapPoint swap_rate(const SystemParams& sys, double omega_c, SwapVariant variant, bool modulated) {
  using namespace labels;
  SwapProblem pb{sys, modulated, omega_c, variant == SwapVariant::CZ ? k101 : k100,
                 variant == SwapVariant::CZ ? k200 : k001};
  const double x0 = variant == SwapVariant::CZ ? sys.omega_q1 + sys.eta_q1 : sys.omega_q1;
  constexpr int kSamples = 1024;
  SwapPoint pt;
  pt.omega_c = omega_c;

  // Window with at least six cycles of the dominant oscillation at x0.
  double window = 50.0;
  for (;;) {
    const auto t = time_grid(window, kSamples);
    const auto fit = fit_sinusoid(t, pb.signal(x0, t));
    if (fit[0] * window >= 6.0 || window > 2e4) break;
    window *= 2.0;
  }
  const auto t = time_grid(window, kSamples);
  auto neg_contrast = [&](double x) { return -fit_sinusoid(t, pb.signal(x, t))[1]; };
  const opt::Minimum m = opt::grid_then_golden(neg_contrast, x0 - 0.08, x0 + 0.08, 33, 1e-7);
  pt.resonance = m.x;

  // Refit at the resonance with a window matched to its frequency.
  double w2 = window;
  std::array<double, 3> fit{};
  for (int it = 0; it < 6; ++it) {
    const auto t2 = time_grid(w2, kSamples);
    fit = fit_sinusoid(t2, pb.signal(pt.resonance, t2));
    const double cycles = fit[0] * w2;
    if (cycles >= 6.0 && cycles <= 60.0) break;
    w2 *= cycles < 6.0 ? 4.0 : 0.25;
  }
  pt.frequency = fit[0];
  pt.contrast = fit[1];
  pt.gtilde = fit[0] / 2.0;
  try {
    pt.gap_gtilde = anticrossing_gap(pb.params(pt.resonance), pb.a, pb.b, Element::Q2,
                                     pt.resonance - 0.05, pt.resonance + 0.05)
                        .gtilde;
  } catch (const Error&) {
    pt.gap_gtilde = std::nan("");
  }
  if (pt.contrast < 0.1) {
    throw Error(ErrorKind::FitFailed, "oscillation contrast " + std::to_string(pt.contrast) +
                                          " below 0.1 at omega_c = " + std::to_string(omega_c));
  }
  pt.ok = true;
  pt.status = "ok";
  return pt;
}

std::vector<SwapPoint> swap_rate_scan(const SystemParams& sys, const std::vector<double>& omega_c,
                                      SwapVariant variant, bool modulated, bool parallel) {
  std::function<SwapPoint(int)> f = [&](int i) {
    try {
      return swap_rate(sys, omega_c[i], variant, modulated);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FitFailed) throw;
      SwapPoint p;
      p.omega_c = omega_c[i];
      p.status = e.what();
      return p;
    }
  };
  const int n = static_cast<int>(omega_c.size());
  return parallel ? kernels::map_parallel<SwapPoint>(n, f) : kernels::map_serial<SwapPoint>(n, f);
}

}  // namespace nzgate
