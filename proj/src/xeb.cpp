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

#include "nzgate/xeb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "nzgate/kernels.hpp"
#include "nzgate/optimize.hpp"

namespace nzgate {

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr int kD = 4;
constexpr int kSup = kXebDim * kXebDim;

CMatrix vec_to_mat(const CVector& v) {
  return Eigen::Map<const CMatrix>(v.data(), kXebDim, kXebDim);
}

CVector mat_to_vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), kSup); }

/// Kronecker product A ⊗ B.
CMatrix kron(const CMatrix& A, const CMatrix& B) {
  CMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  }
  return K;
}

/// Frame rotation diag(e^{i2πE_j T}) as a superoperator.
CMatrix frame_superop(const Eigen::VectorXd& energies, double T) {
  const CVector r = (kI * (kTwoPi * T) * energies.cast<cplx>()).array().exp();
  CVector d(kSup);
  for (int b = 0; b < kXebDim; ++b) {
    for (int a = 0; a < kXebDim; ++a) d(a + kXebDim * b) = r(a) * std::conj(r(b));
  }
  return d.asDiagonal();
}

Eigen::VectorXd subspace_energies(const DressedFrame& f) {
  Eigen::VectorXd e(kXebDim);
  for (int i = 0; i < kXebDim; ++i) e(i) = f.energy(xeb_labels()[i]);
  return e;
}

}  // namespace

const std::array<BareLabel, kXebDim>& xeb_labels() {
  using namespace labels;
  static const std::array<BareLabel, kXebDim> l{k000, k001, k100, k101, k010,
                                                k002, k200, k020, k011, k110};
  return l;
}

CMatrix Superop::apply(const CMatrix& rho) const { return vec_to_mat(m * mat_to_vec(rho)); }

Superop Superop::then(const Superop& next) const { return Superop{next.m * m}; }

Superop Superop::unitary(const CMatrix& U) { return Superop{kron(U.conjugate(), U)}; }

Superop idle_channel(const SystemParams& sys, const NoiseModel& noise, double duration) {
  const DressedFrame f = DressedFrame::at(sys, control_point(sys));
  const CMatrix P = f.basis(xeb_labels());
  const Eigen::VectorXd E = subspace_energies(f);
  const CMatrix I = CMatrix::Identity(kXebDim, kXebDim);
  const CMatrix H = E.cast<cplx>().asDiagonal();
  CMatrix L = -kI * kTwoPi * (kron(I, H) - kron(H.transpose(), I));
  for (const Jump& j : JumpOperatorSet::compile(noise).jumps) {
    CMatrix c = P.adjoint() * j.op * P;
    // Secular dephasing: off-diagonal parts of n in the dressed basis rotate
    // at Bohr frequencies and average out over an idle cycle.
    if (j.kind == JumpKind::Dephasing) c = CMatrix(c.diagonal().asDiagonal());
    // Zero-temperature decay only goes down in energy. Upward elements come
    // from counter-rotating admixture in the dressed states.
    if (j.kind == JumpKind::Relaxation) {
      for (int s = 0; s < kXebDim; ++s) {
        for (int k = 0; k < kXebDim; ++k) {
          if (E(k) >= E(s)) c(k, s) = 0.0;
        }
      }
    }
    const CMatrix cdc = c.adjoint() * c;
    L += kron(c.conjugate(), c) - 0.5 * kron(I, cdc) - 0.5 * kron(cdc.transpose(), I);
  }
  const CMatrix prop = (L * duration).exp();
  return Superop{frame_superop(E, duration) * prop};
}

Superop gate_channel(const SystemParams& sys, const Schedule& schedule, const NoiseModel& noise,
                     const PropagationOptions& opts) {
  const DressedFrame f = DressedFrame::of(sys, schedule, opts.frame_offset);
  const CMatrix P = f.basis(xeb_labels());
  std::vector<CMatrix> units;
  units.reserve(kSup);
  for (int b = 0; b < kXebDim; ++b) {
    for (int a = 0; a < kXebDim; ++a) units.push_back(P.col(a) * P.col(b).adjoint());
  }
  PropagationOptions o = opts;
  o.record_stride = 0;
  const std::vector<CMatrix> out = lindblad_map(sys, schedule, std::move(units), noise, o);
  const double T = schedule.duration();
  CMatrix S(kSup, kSup);
  for (int k = 0; k < kSup; ++k) S.col(k) = mat_to_vec(P.adjoint() * out[k] * P);
  S = frame_superop(subspace_energies(f), T) * S;
  // Virtual Z corrections read off the coherences |k⟩⟨000| of the channel.
  auto coherence_phase = [&](int k) { return std::arg(S(k, k)); };
  const double a2 = coherence_phase(1);  // 001
  const double a1 = coherence_phase(2);  // 100
  CVector z(kXebDim);
  for (int i = 0; i < kXebDim; ++i) {
    const BareLabel l = xeb_labels()[i];
    z(i) = std::exp(-kI * (l.n_q1 * a1 + l.n_q2 * a2));
  }
  const Superop corr = Superop::unitary(z.asDiagonal());
  return Superop{corr.m * S};
}

CMatrix embed_two_qubit(const Eigen::Matrix4cd& U) {
  CMatrix out = CMatrix::Identity(kXebDim, kXebDim);
  out.topLeftCorner(4, 4) = U;
  return out;
}

void XebConfig::validate() const {
  if (depths.empty()) throw Error(ErrorKind::InvalidArgument, "XEB: no depths");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1 || (i > 0 && depths[i] <= depths[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "XEB: depths must be positive and strictly increasing");
    }
  }
  if (circuits < 1) throw Error(ErrorKind::InvalidArgument, "XEB: circuits per depth must be >= 1");
  if (interleave == Interleave::Channel && !gate) {
    throw Error(ErrorKind::InvalidArgument, "XEB: channel interleave needs a gate superoperator");
  }
  if (!(inject_depolarizing > 0.0 && inject_depolarizing <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "XEB: depolarizing p0 must lie in (0, 1]");
  }
  if (shots < 0) throw Error(ErrorKind::InvalidArgument, "XEB: negative shot count");
}

std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t task) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (task + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

namespace {

Eigen::Matrix2cd sqrt_gate(double nx, double ny) {
  // exp(−i π/4 (n·σ))
  const double c = std::cos(std::numbers::pi / 4.0), s = std::sin(std::numbers::pi / 4.0);
  Eigen::Matrix2cd m;
  m << c, -kI * s * cplx(nx, -ny), -kI * s * cplx(nx, ny), c;
  return m;
}

Eigen::Matrix2cd haar_gate(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix2cd z;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) z(i, j) = cplx(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

struct CircuitResult {
  double xeb = 0.0;
  double num = 0.0;
  double den = 0.0;
  double purity = 0.0;
  double leakage = 0.0;
};

CircuitResult run_circuit(const XebConfig& c, int depth, std::mt19937_64& rng) {
  static const std::array<Eigen::Matrix2cd, 3> set{
      sqrt_gate(1.0, 0.0), sqrt_gate(0.0, 1.0),
      sqrt_gate(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0))};
  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = std::polar(1.0, c.phi_2q);
  const Superop cz_sup = Superop::unitary(embed_two_qubit(cz));
  CMatrix rho = CMatrix::Zero(kXebDim, kXebDim);
  rho(0, 0) = 1.0;
  Eigen::Vector4cd psi(1.0, 0.0, 0.0, 0.0);
  std::array<int, 2> last{-1, -1};
  std::uniform_int_distribution<int> pick(0, 1);
  for (int d = 0; d < depth; ++d) {
    std::array<Eigen::Matrix2cd, 2> u;
    for (int q = 0; q < 2; ++q) {
      if (c.gate_set == GateSet::Haar) {
        u[q] = haar_gate(rng);
      } else {
        int g = last[q] < 0 ? std::uniform_int_distribution<int>(0, 2)(rng) : pick(rng);
        if (last[q] >= 0 && g >= last[q]) ++g;  // two choices excluding the previous gate
        last[q] = g;
        u[q] = set[g];
      }
    }
    Eigen::Matrix4cd U;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) U.block<2, 2>(2 * i, 2 * j) = u[0](i, j) * u[1];
    }
    const CMatrix Ue = embed_two_qubit(U);
    rho = Ue * rho * Ue.adjoint();
    psi = U * psi;
    if (c.idle) rho = c.idle->apply(rho);
    if (c.interleave == Interleave::Channel) {
      rho = c.gate->apply(rho);
      psi = cz * psi;
    } else if (c.interleave == Interleave::IdealCZ) {
      rho = cz_sup.apply(rho);
      psi = cz * psi;
    }
    if (c.inject_depolarizing < 1.0) {
      const double p0 = c.inject_depolarizing;
      const cplx tr = rho.topLeftCorner(4, 4).trace();
      rho.topLeftCorner(4, 4) = p0 * rho.topLeftCorner(4, 4) +
                                (1.0 - p0) * tr / double(kD) * CMatrix::Identity(4, 4);
    }
  }
  Eigen::Vector4d P, p;
  for (int x = 0; x < 4; ++x) {
    P(x) = std::norm(psi(x));
    p(x) = std::max(rho(x, x).real(), 0.0);
  }
  const double tr_c = p.sum();
  if (c.shots > 0) {
    std::vector<double> w{p(0), p(1), p(2), p(3), std::max(1.0 - tr_c, 0.0)};
    std::discrete_distribution<int> dist(w.begin(), w.end());
    Eigen::Vector4d counts = Eigen::Vector4d::Zero();
    for (long s = 0; s < c.shots; ++s) {
      const int k = dist(rng);
      if (k < 4) counts(k) += 1.0;
    }
    p = counts / static_cast<double>(c.shots);
  }
  CircuitResult r;
  r.num = kD * p.dot(P) - 1.0;
  r.den = kD * P.squaredNorm() - 1.0;
  r.xeb = std::abs(r.den) > 1e-12 ? r.num / r.den : 0.0;
  const CMatrix rc = rho.topLeftCorner(4, 4);
  const double pur = (rc * rc).trace().real();
  r.purity = std::sqrt(std::max((kD * pur - 1.0) / (kD - 1.0), 0.0));
  r.leakage = 1.0 - rc.trace().real();
  return r;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const double w = pos - i;
  return i + 1 < v.size() ? (1.0 - w) * v[i] + w * v[i + 1] : v.back();
}

// Depth-1 circuits from the sqrt set have a flat ideal distribution, so the
// ratio is undefined there. NaN marks it and the fit skips it.
double pooled(double num, double den, int n) {
  return std::abs(den) > 1e-9 * n ? num / den : std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> means(const std::vector<std::vector<double>>& per_depth) {
  std::vector<double> m;
  for (const auto& v : per_depth) {
    double s = 0.0;
    for (double x : v) s += x;
    m.push_back(s / static_cast<double>(v.size()));
  }
  return m;
}

/// Initial slope per cycle of a leakage curve: −A ln λ from the decay fit,
/// or a through-origin linear fit when the curve has no curvature.
double leakage_slope(const std::vector<int>& depths, const std::vector<double>& y) {
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    sxy += depths[i] * y[i];
    sxx += double(depths[i]) * depths[i];
  }
  const double linear = sxy / sxx;
  try {
    const DecayFit f = fit_decay(depths, y);
    // d/dd (A p^d + B) at d = 0; a rising curve has A < 0.
    if (f.p.value > 0.0 && f.p.value < 1.0 - 1e-9) return f.A.value * std::log(f.p.value);
  } catch (const Error&) {
  }
  return linear;
}

}  // namespace

DecayFit fit_decay(const std::vector<int>& all_depths, const std::vector<double>& all_y) {
  if (all_y.size() != all_depths.size()) {
    throw Error(ErrorKind::InvalidArgument, "fit_decay: depth and value counts differ");
  }
  std::vector<int> depths;
  std::vector<double> y;
  for (std::size_t i = 0; i < all_y.size(); ++i) {
    if (std::isfinite(all_y[i])) {
      depths.push_back(all_depths[i]);
      y.push_back(all_y[i]);
    }
  }
  const int n = static_cast<int>(depths.size());
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "fit_decay: need at least three depths");
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  DecayFit fit;
  if (*hi - *lo < 1e-9) {
    if (std::abs(*hi - 1.0) < 1e-9) {
      fit.A = {1.0, 1.0, 1.0};
      fit.p = {1.0, 1.0, 1.0};
      fit.B = {0.0, 0.0, 0.0};
      return fit;
    }
    throw Error(ErrorKind::FitDegenerate, "decay curve is flat; p is not identifiable");
  }
  auto solve = [&](double p, Eigen::Vector2d* coef) {
    Eigen::MatrixXd M(n, 2);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      M(i, 0) = std::pow(p, depths[i]);
      M(i, 1) = 1.0;
      b(i) = y[i];
    }
    const Eigen::Vector2d c = M.colPivHouseholderQr().solve(b);
    if (coef) *coef = c;
    return (M * c - b).squaredNorm();
  };
  const opt::Minimum m = opt::grid_then_golden([&](double p) { return solve(p, nullptr); }, 0.0,
                                               1.0, 201, 1e-12);
  Eigen::Vector2d c;
  fit.residual = std::sqrt(solve(m.x, &c) / n);
  fit.A = {c(0), c(0), c(0)};
  fit.p = {m.x, m.x, m.x};
  fit.B = {c(1), c(1), c(1)};
  return fit;
}

XebFit run_xeb(const XebConfig& config) {
  config.validate();
  XebFit out;
  out.depths = config.depths;
  const int nd = static_cast<int>(config.depths.size());
  const int nc = config.circuits;
  std::function<CircuitResult(int)> task = [&](int t) {
    std::mt19937_64 rng = task_rng(config.seed, static_cast<std::uint64_t>(t));
    return run_circuit(config, config.depths[t / nc], rng);
  };
  const std::vector<CircuitResult> res = config.parallel
                                             ? kernels::map_parallel<CircuitResult>(nd * nc, task)
                                             : kernels::map_serial<CircuitResult>(nd * nc, task);
  out.xeb_per_circuit.assign(nd, std::vector<double>(nc));
  out.xeb_num_per_circuit.assign(nd, std::vector<double>(nc));
  out.xeb_den_per_circuit.assign(nd, std::vector<double>(nc));
  out.purity_per_circuit.assign(nd, std::vector<double>(nc));
  out.leakage_per_circuit.assign(nd, std::vector<double>(nc));
  for (int t = 0; t < nd * nc; ++t) {
    out.xeb_per_circuit[t / nc][t % nc] = res[t].xeb;
    out.xeb_num_per_circuit[t / nc][t % nc] = res[t].num;
    out.xeb_den_per_circuit[t / nc][t % nc] = res[t].den;
    out.purity_per_circuit[t / nc][t % nc] = res[t].purity;
    out.leakage_per_circuit[t / nc][t % nc] = res[t].leakage;
  }
  out.mean_xeb.resize(nd);
  for (int d = 0; d < nd; ++d) {
    double sn = 0.0, sd = 0.0;
    for (int k = 0; k < nc; ++k) {
      sn += out.xeb_num_per_circuit[d][k];
      sd += out.xeb_den_per_circuit[d][k];
    }
    out.mean_xeb[d] = pooled(sn, sd, nc);
  }
  out.mean_purity = means(out.purity_per_circuit);
  out.mean_leakage = means(out.leakage_per_circuit);
  out.xeb = fit_decay(out.depths, out.mean_xeb);
  out.purity = fit_decay(out.depths, out.mean_purity);
  const double leak = leakage_slope(out.depths, out.mean_leakage);

  // Bootstrap over circuits within each depth.
  std::vector<double> bp, bA, bB, bpp, bl;
  std::mt19937_64 rng = task_rng(config.seed, 0xB0075747ULL);
  std::uniform_int_distribution<int> pick(0, nc - 1);
  for (int b = 0; b < config.bootstrap; ++b) {
    std::vector<double> mx(nd), mp(nd), ml(nd);
    for (int d = 0; d < nd; ++d) {
      double sn = 0.0, sd = 0.0, sp = 0.0, sl = 0.0;
      for (int k = 0; k < nc; ++k) {
        const int i = pick(rng);
        sn += out.xeb_num_per_circuit[d][i];
        sd += out.xeb_den_per_circuit[d][i];
        sp += out.purity_per_circuit[d][i];
        sl += out.leakage_per_circuit[d][i];
      }
      mx[d] = pooled(sn, sd, nc);
      mp[d] = sp / nc;
      ml[d] = sl / nc;
    }
    try {
      const DecayFit f = fit_decay(out.depths, mx);
      bp.push_back(f.p.value);
      bA.push_back(f.A.value);
      bB.push_back(f.B.value);
      bpp.push_back(fit_decay(out.depths, mp).p.value);
      bl.push_back(leakage_slope(out.depths, ml));
    } catch (const Error&) {
    }
  }
  auto interval = [&](Estimate& e, const std::vector<double>& v) {
    if (v.empty()) return;
    e.lo = percentile(v, 0.16);
    e.hi = percentile(v, 0.84);
  };
  interval(out.xeb.p, bp);
  interval(out.xeb.A, bA);
  interval(out.xeb.B, bB);
  interval(out.purity.p, bpp);
  const double f = 1.0 - 1.0 / kD;
  out.cycle_error = {(1.0 - out.xeb.p.value) * f, (1.0 - out.xeb.p.hi) * f, (1.0 - out.xeb.p.lo) * f};
  out.purity_error = {1.0 - out.purity.p.value, 1.0 - out.purity.p.hi, 1.0 - out.purity.p.lo};
  out.leakage_error = {leak, leak, leak};
  if (!bl.empty()) {
    out.leakage_error.lo = percentile(bl, 0.16);
    out.leakage_error.hi = percentile(bl, 0.84);
  }
  return out;
}

double fidelity_from_p(double p_ref, double p_int, int D) {
  if (!(p_ref > 0.0 && p_ref <= 1.0 && p_int > 0.0 && p_int <= 1.0) || D < 2) {
    throw Error(ErrorKind::InvalidArgument, "fidelity_from_p: p values must lie in (0, 1]");
  }
  const double p = p_int / p_ref;
  return p + (1.0 - p) / D;
}

double p_from_cycle_error(double cycle_error, int D) {
  return 1.0 - cycle_error / (1.0 - 1.0 / D);
}

double decoherence_error_estimate(double purity_int, double leak_int, double purity_ref) {
  return purity_int - leak_int - 1.5 * purity_ref;
}

}  // namespace nzgate
