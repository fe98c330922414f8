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

#include "nzgate/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nzgate/kernels.hpp"
#include "nzgate/optimize.hpp"

namespace nzgate {

double exchange_population(const SystemParams& sys, const GateProtocolParams& gp,
                           const PropagationOptions& opts) {
  const Schedule s = make_exchange_schedule(sys, gp);
  const DressedFrame f = DressedFrame::of(sys, s, opts.frame_offset);
  const BareLabel target = gp.strong_qubit == Element::Q2 ? labels::k200 : labels::k002;
  CMatrix psi = propagate(sys, s, CMatrix(f.state(labels::k101)), opts);
  return std::norm(f.state(target).dot(psi.col(0)));
}

namespace {

/// Maximizes f on a grid over [lo, hi], re-centring when the best point sits
/// on an edge, then polishes with Brent. Returns {x, f(x)}.
opt::Minimum maximize(const std::function<double(double)>& f, double lo, double hi, int grid,
                      double xtol, double hard_lo, double hard_hi) {
  auto neg = [&](double x) { return -f(x); };
  for (int shift = 0; shift < 4; ++shift) {
    lo = std::max(lo, hard_lo);
    hi = std::min(hi, hard_hi);
    const double step = (hi - lo) / (grid - 1);
    int best = 0;
    std::vector<double> vals(grid);
    for (int i = 0; i < grid; ++i) {
      vals[i] = neg(lo + step * i);
      if (vals[i] < vals[best]) best = i;
    }
    const bool at_lo = best == 0 && lo > hard_lo;
    const bool at_hi = best == grid - 1 && hi < hard_hi;
    if ((at_lo || at_hi) && shift < 3) {
      const double width = hi - lo;
      const double c = lo + step * best;
      lo = c - width / 2.0;
      hi = c + width / 2.0;
      continue;
    }
    const double a = lo + step * std::max(best - 1, 0);
    const double b = lo + step * std::min(best + 1, grid - 1);
    opt::Minimum m = opt::brent_minimize(neg, a, b, xtol);
    if (vals[best] < m.f) m = {lo + step * best, vals[best]};
    return {m.x, -m.f};
  }
  return {lo, f(lo)};
}

struct Seed {
  double V;
  double coupler;
};

/// Spectral starting point: coupler dip whose gap makes g̃·area ≈ 1/4 and
/// V that brings the strong qubit onto the two-photon resonance.
bool spectral_seed(const SystemParams& sys, const GateProtocolParams& gp, const ExchangeOptions& o,
                   Seed& out) {
  const bool q2 = gp.strong_qubit == Element::Q2;
  const double w_strong = q2 ? sys.omega_q2 : sys.omega_q1;
  const double bare_res = q2 ? sys.omega_q1 + sys.eta_q1 : sys.omega_q2 + sys.eta_q2;
  const BareLabel other = q2 ? labels::k200 : labels::k002;
  // g̃(t) follows the coupler's sin^p profile; its mean over the pulse is
  // Γ((p+1)/2) / (√π Γ(p/2+1)).
  const double p = gp.coupler_power;
  const double mean = std::tgamma(0.5 * (p + 1.0)) / (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * p + 1.0));
  const double want = 0.25 / (gp.t_p * mean);
  std::vector<std::array<double, 3>> pts;  // coupler, g̃, resonance
  const int n = 9;
  for (int i = 0; i < n; ++i) {
    const double c = o.coupler_lo + (o.coupler_hi - o.coupler_lo) * i / (n - 1);
    try {
      const SystemParams ps = sys.retuned(sys.omega_q1, c, sys.omega_q2);
      const GapResult g = anticrossing_gap(ps, labels::k101, other, gp.strong_qubit,
                                           bare_res - 0.1, bare_res + 0.1, 21);
      pts.push_back({c, g.gtilde, g.resonance});
    } catch (const Error&) {
    }
  }
  if (pts.empty()) return false;
  // g̃ falls with the coupler frequency; interpolate to the wanted value.
  std::size_t k = 0;
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::abs(pts[i][1] - want);
    if (d < best) {
      best = d;
      k = i;
    }
  }
  double c = pts[k][0], res = pts[k][2];
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double g0 = pts[i][1] - want, g1 = pts[i + 1][1] - want;
    if (g0 * g1 <= 0.0 && g0 != g1) {
      const double w = g0 / (g0 - g1);
      c = pts[i][0] + w * (pts[i + 1][0] - pts[i][0]);
      res = pts[i][2] + w * (pts[i + 1][2] - pts[i][2]);
      break;
    }
  }
  out = Seed{w_strong - res, c};
  return true;
}

}  // namespace

ExchangeCalibration calibrate_exchange_amplitude(const SystemParams& sys, const GateProtocolParams& gp0,
                                                 const ExchangeOptions& o) {
  GateProtocolParams gp = gp0;
  gp.t_weak = 0.0;
  const double w_strong = gp.strong_qubit == Element::Q2 ? sys.omega_q2 : sys.omega_q1;
  const double wc_off = gp.coupler_off_freq > 0.0 ? gp.coupler_off_freq : sys.omega_c;
  ExchangeCalibration cal;
  Seed seed{gp.V, gp.coupler_on_freq};
  if (o.spectral_seed && (o.tune_coupler || gp.V == 0.0)) {
    Seed s;
    if (spectral_seed(sys, gp, o, s)) {
      seed.V = s.V;
      if (o.tune_coupler) seed.coupler = s.coupler;
    }
  }
  gp.V = std::max(seed.V, 0.0);
  gp.coupler_on_freq = std::clamp(seed.coupler, o.coupler_lo, std::min(o.coupler_hi, wc_off));

  auto p_of = [&](double V, double c) {
    GateProtocolParams g = gp;
    g.V = V;
    g.coupler_on_freq = c;
    ++cal.evaluations;
    return exchange_population(sys, g, o.prop);
  };
  double V_span = o.V_span;
  double c_span = o.coupler_span;
  double p = 0.0;
  for (int round = 0; round < o.max_rounds; ++round) {
    const double c = gp.coupler_on_freq;
    opt::Minimum mv = maximize([&](double V) { return p_of(V, c); }, gp.V - V_span, gp.V + V_span,
                               o.grid, 1e-7, 0.0, 0.999 * w_strong);
    gp.V = mv.x;
    p = mv.f;
    if (o.tune_coupler && 1.0 - p > o.target_residual) {
      const double V = gp.V;
      opt::Minimum mc = maximize([&](double cc) { return p_of(V, cc); }, c - c_span, c + c_span,
                                 o.grid, 1e-6, o.coupler_lo, std::min(o.coupler_hi, wc_off));
      gp.coupler_on_freq = mc.x;
      p = mc.f;
    }
    if (1.0 - p <= o.target_residual) break;
    if (!o.tune_coupler && round > 0) break;
    V_span *= 0.3;
    c_span *= 0.3;
  }
  cal.V = gp.V;
  cal.coupler_on_freq = gp.coupler_on_freq;
  cal.p200 = p;
  cal.residual = 1.0 - p;
  if (p < 0.5) {
    throw Error(ErrorKind::NoExchangeFound,
                "best exchange population " + std::to_string(p) + " is below 0.5");
  }
  return cal;
}

PhaseSweep phase_sweep(const SystemParams& sys, const GateProtocolParams& gp, double a_lo,
                       double a_hi, int points, const PropagationOptions& opts, bool parallel) {
  if (points < 2 || !(a_hi > a_lo)) throw Error(ErrorKind::InvalidArgument, "phase_sweep: bad range");
  PhaseSweep sw;
  for (int i = 0; i < points; ++i) sw.a_int.push_back(a_lo + (a_hi - a_lo) * i / (points - 1));
  std::function<double(int)> f = [&](int i) {
    GateProtocolParams g = gp;
    g.a_int = sw.a_int[i];
    return gate_phases(sys, make_cphase_schedule(sys, g), opts).phi_2Q;
  };
  const std::vector<double> raw =
      parallel ? kernels::map_parallel<double>(points, f) : kernels::map_serial<double>(points, f);
  sw.phi_2q.push_back(raw[0]);
  for (int i = 1; i < points; ++i) {
    sw.phi_2q.push_back(sw.phi_2q.back() + wrap_phase(raw[i] - sw.phi_2q.back()));
  }
  bool inc = true, dec = true;
  for (int i = 1; i < points; ++i) {
    inc = inc && sw.phi_2q[i] > sw.phi_2q[i - 1];
    dec = dec && sw.phi_2q[i] < sw.phi_2q[i - 1];
  }
  sw.monotone = inc || dec;
  return sw;
}

PhaseCalibration calibrate_phase_amplitude(const SystemParams& sys, const GateProtocolParams& gp,
                                           double target, const PhaseSweep& sw,
                                           const PropagationOptions& opts) {
  const int n = static_cast<int>(sw.a_int.size());
  const auto [lo_it, hi_it] = std::minmax_element(sw.phi_2q.begin(), sw.phi_2q.end());
  const double two_pi = 2.0 * std::numbers::pi;
  // Target branches inside the covered range, scanned from a_int low to high.
  int seg = -1;
  double branch = 0.0;
  for (int i = 0; i + 1 < n && seg < 0; ++i) {
    const double y0 = sw.phi_2q[i], y1 = sw.phi_2q[i + 1];
    const double k0 = std::ceil((std::min(y0, y1) - target) / two_pi);
    const double t = target + k0 * two_pi;
    if (t <= std::max(y0, y1)) {
      seg = i;
      branch = t;
    }
  }
  if (seg < 0 || *lo_it > branch || *hi_it < branch) {
    throw Error(ErrorKind::TargetOutOfRange,
                "target phase " + std::to_string(target) + " is not reachable on the sweep");
  }
  PhaseCalibration cal;
  auto interp = [&](double a) {
    const auto it = std::upper_bound(sw.a_int.begin(), sw.a_int.end(), a);
    const int i = std::clamp(static_cast<int>(it - sw.a_int.begin()) - 1, 0, n - 2);
    const double w = (a - sw.a_int[i]) / (sw.a_int[i + 1] - sw.a_int[i]);
    return sw.phi_2q[i] + w * (sw.phi_2q[i + 1] - sw.phi_2q[i]);
  };
  auto phi = [&](double a) {
    GateProtocolParams g = gp;
    g.a_int = a;
    ++cal.evaluations;
    const double w = gate_phases(sys, make_cphase_schedule(sys, g), opts).phi_2Q;
    const double guess = interp(a);
    return guess + wrap_phase(w - guess);
  };
  auto g = [&](double a) { return phi(a) - branch; };
  const double a0 = sw.a_int[seg], a1 = sw.a_int[seg + 1];
  double a;
  if (sw.phi_2q[seg] == branch) a = a0;
  else if (sw.phi_2q[seg + 1] == branch) a = a1;
  else a = opt::brent_root(g, a0, a1, 1e-10);
  GateProtocolParams fin = gp;
  fin.a_int = a;
  const Schedule s = make_cphase_schedule(sys, fin);
  cal.a_int = a;
  cal.phi_2q = gate_phases(sys, s, opts).phi_2Q;
  cal.error = wrap_phase(cal.phi_2q - target);
  cal.duration = s.duration();
  ++cal.evaluations;
  return cal;
}

CPhaseCalibration calibrate_cphase(const SystemParams& sys, GateProtocolParams gp, double target,
                                   double a_max, int sweep_points, const ExchangeOptions& opts) {
  CPhaseCalibration out;
  out.exchange = calibrate_exchange_amplitude(sys, gp, opts);
  gp.V = out.exchange.V;
  gp.coupler_on_freq = out.exchange.coupler_on_freq;
  out.sweep = phase_sweep(sys, gp, 0.0, a_max, sweep_points, opts.prop);
  out.phase = calibrate_phase_amplitude(sys, gp, target, out.sweep, opts.prop);
  gp.a_int = out.phase.a_int;
  out.gp = gp;
  return out;
}

}  // namespace nzgate
