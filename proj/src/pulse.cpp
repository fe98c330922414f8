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

#include "nzgate/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

namespace nzgate {

double FluxMap::frequency(double phi) const {
  const double span = omega_max + std::abs(eta);
  return omega_max - span * (1.0 - std::sqrt(std::abs(std::cos(std::numbers::pi * phi))));
}

double FluxMap::flux_for_excursion(double excursion) const {
  if (excursion < 0.0 || excursion >= omega_max) {
    throw Error(ErrorKind::InvalidArgument, "FluxMap: excursion outside tuning range");
  }
  const double r = 1.0 - excursion / (omega_max + std::abs(eta));
  return std::acos(r * r) / std::numbers::pi;
}

GateProtocolParams GateProtocolParams::paper_defaults() {
  GateProtocolParams gp;
  gp.t_p = 20.0;
  gp.t_d = 20.0;
  gp.t_weak = gp.t_p;
  gp.sigma = gp.t_p / 8.0;
  return gp;
}

namespace {

int checked_steps(double duration, double dt, const char* what) {
  const double n = duration / dt;
  const double r = std::round(n);
  if (std::abs(n - r) > 1e-6 || r < 0) {
    throw Error(ErrorKind::InvalidArgument,
                std::string("sample_dt does not divide the ") + what + " duration");
  }
  return static_cast<int>(r);
}

bool is_qubit(Element e) { return e == Element::Q1 || e == Element::Q2; }

}  // namespace

void GateProtocolParams::validate() const {
  if (!(t_p > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_p must be positive");
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  if (!(coupler_power > 0.0)) throw Error(ErrorKind::InvalidArgument, "coupler_power must be positive");
  if (!(sample_dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "sample_dt must be positive");
  if (t_d < 0.0 || t_weak < 0.0) throw Error(ErrorKind::InvalidArgument, "negative segment duration");
  if (V < 0.0) throw Error(ErrorKind::InvalidArgument, "V is an excursion magnitude and must be >= 0");
  if (!is_qubit(strong_qubit) || !is_qubit(weak_qubit)) {
    throw Error(ErrorKind::InvalidArgument, "pulsed elements must be qubits");
  }
  checked_steps(t_p, sample_dt, "strong pulse");
  checked_steps(t_d, sample_dt, "delay");
  checked_steps(t_weak / 2.0, sample_dt, "weak lobe");
}

ControlPoint Schedule::sample(int k) const {
  return ControlPoint{omega_q1[k], omega_c[k], omega_q2[k], g_1c[k], g_2c[k], g_12[k]};
}

ControlPoint Schedule::at(double t) const {
  const int n = samples();
  if (t <= 0.0) return sample(0);
  if (t >= duration()) return sample(n - 1);
  const double x = t / dt;
  const int k = std::min(static_cast<int>(x), n - 2);
  const double w = x - k;
  auto lerp = [&](const std::vector<double>& v) { return (1.0 - w) * v[k] + w * v[k + 1]; };
  return ControlPoint{lerp(omega_q1), lerp(omega_c), lerp(omega_q2),
                      lerp(g_1c),     lerp(g_2c),    lerp(g_12)};
}

namespace {
double trapezoid(const std::vector<double>& v, double dt, double offset) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * ((v.front() - offset) + (v.back() - offset));
  for (std::size_t k = 1; k + 1 < v.size(); ++k) s += v[k] - offset;
  return s * dt;
}
}  // namespace

double Schedule::flux_integral(Element qubit) const {
  return trapezoid(qubit == Element::Q1 ? flux_q1 : flux_q2, dt, 0.0);
}

double Schedule::frequency_integral(Element qubit) const {
  const auto& v = qubit == Element::Q1 ? omega_q1 : omega_q2;
  return trapezoid(v, dt, v.front());
}

double Schedule::max_slew() const {
  double m = 0.0;
  for (const auto* v : {&omega_q1, &omega_c, &omega_q2}) {
    for (std::size_t k = 1; k < v->size(); ++k) m = std::max(m, std::abs((*v)[k] - (*v)[k - 1]));
  }
  return m / dt;
}

Schedule Schedule::idle(const SystemParams& sys, double duration, double dt) {
  const int n = checked_steps(duration, dt, "idle");
  Schedule s;
  s.dt = dt;
  s.omega_q1.assign(n + 1, sys.omega_q1);
  s.omega_c.assign(n + 1, sys.omega_c);
  s.omega_q2.assign(n + 1, sys.omega_q2);
  s.g_1c.assign(n + 1, sys.g_1c);
  s.g_2c.assign(n + 1, sys.g_2c);
  s.g_12.assign(n + 1, sys.g_12);
  s.flux_q1.assign(n + 1, 0.0);
  s.flux_q2.assign(n + 1, 0.0);
  s.segments.push_back(Segment{"idle", 0.0, duration, true});
  s.net_zero = true;
  return s;
}

std::vector<double> flattop_pulse(double amplitude, double t_p, double sigma, double dt) {
  const int n = checked_steps(t_p, dt, "pulse");
  const double edge = std::min(2.0 * sigma, t_p / 2.0);
  const double e0 = std::exp(-edge * edge / (2.0 * sigma * sigma));
  auto rise = [&](double t) {
    const double u = t - edge;
    return (std::exp(-u * u / (2.0 * sigma * sigma)) - e0) / (1.0 - e0);
  };
  std::vector<double> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    double v = 1.0;
    if (t < edge) v = rise(t);
    else if (t > t_p - edge) v = rise(t_p - t);
    out[k] = amplitude * std::max(v, 0.0);
  }
  out.front() = 0.0;
  out.back() = 0.0;
  return out;
}

double flattop_area(double t_p, double sigma) {
  const double edge = std::min(2.0 * sigma, t_p / 2.0);
  const double e0 = std::exp(-edge * edge / (2.0 * sigma * sigma));
  const double gauss = sigma * std::sqrt(std::numbers::pi / 2.0) * std::erf(edge / (std::sqrt(2.0) * sigma));
  const double edge_area = (gauss - edge * e0) / (1.0 - e0);
  return (t_p - 2.0 * edge) + 2.0 * edge_area;
}

namespace {

class ScheduleBuilder {
 public:
  ScheduleBuilder(const SystemParams& sys, const GateProtocolParams& gp)
      : sys_(sys), gp_(gp) {
    map_q1_ = FluxMap{sys.omega_q1, sys.eta_q1};
    map_q2_ = FluxMap{sys.omega_q2, sys.eta_q2};
    wc_off_ = gp.coupler_off_freq > 0.0 ? gp.coupler_off_freq : sys.omega_c;
    s_.dt = gp.sample_dt;
    push(0.0, 0.0, wc_off_);
  }

  double coupler_off() const { return wc_off_; }

  /// f(k) returns (Φ_q1, Φ_q2, ω_c) for local sample k = 1..n.
  void append(const std::string& name, double duration, bool is_static,
              const std::function<std::tuple<double, double, double>(int)>& f) {
    const int n = checked_steps(duration, gp_.sample_dt, name.c_str());
    const double t0 = s_.dt * (s_.samples() - 1);
    for (int k = 1; k <= n; ++k) {
      const auto [p1, p2, wc] = f(k);
      push(p1, p2, wc);
    }
    if (n > 0) s_.segments.push_back(Segment{name, t0, t0 + n * s_.dt, is_static});
  }

  void append_delay(const std::string& name, double duration) {
    append(name, duration, true, [&](int) { return std::make_tuple(0.0, 0.0, wc_off_); });
  }

  void append_strong(const std::string& name, double sign) {
    const FluxMap& m = gp_.strong_qubit == Element::Q1 ? map_q1_ : map_q2_;
    const double phi = sign * m.flux_for_excursion(gp_.V);
    const std::vector<double> env = flattop_pulse(1.0, gp_.t_p, gp_.sigma, gp_.sample_dt);
    const double depth = wc_off_ - gp_.coupler_on_freq;
    const bool is_static = gp_.V == 0.0 && depth == 0.0;
    const bool on_q1 = gp_.strong_qubit == Element::Q1;
    const double wbar = 0.5 * (sys_.omega_q1 + sys_.omega_q2);
    if (depth != 0.0 && std::min(wc_off_, gp_.coupler_on_freq) <= wbar + 0.1) {
      throw Error(ErrorKind::InvalidArgument, "coupler must stay above the qubits during the pulse");
    }
    const double inv_off = depth != 0.0 ? 1.0 / (wc_off_ - wbar) : 0.0;
    const double inv_on = depth != 0.0 ? 1.0 / (gp_.coupler_on_freq - wbar) : 0.0;
    append(name, gp_.t_p, is_static, [&](int k) {
      const double p = phi * env[k];
      double wc = wc_off_;
      if (depth != 0.0) {
        const double s = std::sin(std::numbers::pi * k * gp_.sample_dt / gp_.t_p);
        const double dip = std::pow(std::abs(s), gp_.coupler_power);
        wc = wbar + 1.0 / (inv_off + (inv_on - inv_off) * dip);
      }
      return std::make_tuple(on_q1 ? p : 0.0, on_q1 ? 0.0 : p, wc);
    });
  }

  void append_weak(const std::string& name) {
    if (gp_.t_weak <= 0.0) return;
    const FluxMap& m = gp_.weak_qubit == Element::Q1 ? map_q1_ : map_q2_;
    const double phi = std::copysign(m.flux_for_excursion(std::abs(gp_.a_int)), gp_.a_int);
    const double half = gp_.t_weak / 2.0;
    const int nh = checked_steps(half, gp_.sample_dt, "weak lobe");
    const std::vector<double> env = flattop_pulse(1.0, half, gp_.sigma, gp_.sample_dt);
    const bool on_q1 = gp_.weak_qubit == Element::Q1;
    append(name, gp_.t_weak, gp_.a_int == 0.0, [&](int k) {
      const double p = k <= nh ? phi * env[k] : -phi * env[k - nh];
      return std::make_tuple(on_q1 ? p : 0.0, on_q1 ? 0.0 : p, wc_off_);
    });
  }

  Schedule finish(bool net_zero) {
    s_.net_zero = net_zero;
    s_.g_1c.assign(s_.samples(), sys_.g_1c);
    s_.g_2c.assign(s_.samples(), sys_.g_2c);
    s_.g_12.assign(s_.samples(), sys_.g_12);
    Schedule out = gp_.modulate_couplings ? modulate_couplings(sys_, std::move(s_)) : std::move(s_);
    const double slew = out.max_slew();
    if (slew > gp_.slew_limit) {
      throw Error(ErrorKind::SlewViolation,
                  "trajectory slew " + std::to_string(slew) + " GHz/ns exceeds the limit");
    }
    return out;
  }

 private:
  void push(double p1, double p2, double wc) {
    s_.flux_q1.push_back(p1);
    s_.flux_q2.push_back(p2);
    s_.omega_q1.push_back(map_q1_.frequency(p1));
    s_.omega_q2.push_back(map_q2_.frequency(p2));
    s_.omega_c.push_back(wc);
  }

  const SystemParams& sys_;
  const GateProtocolParams& gp_;
  FluxMap map_q1_, map_q2_;
  double wc_off_ = 0.0;
  Schedule s_;
};

}  // namespace

Schedule make_cphase_schedule(const SystemParams& sys, const GateProtocolParams& gp) {
  sys.validate();
  gp.validate();
  ScheduleBuilder b(sys, gp);
  b.append_strong("strong+", +1.0);
  b.append_delay("delay1", gp.t_d);
  b.append_weak("weak");
  b.append_delay("delay2", gp.t_d);
  b.append_strong("strong-", -1.0);
  b.append_delay("delay3", gp.t_d);
  return b.finish(true);
}

Schedule make_exchange_schedule(const SystemParams& sys, const GateProtocolParams& gp) {
  sys.validate();
  gp.validate();
  ScheduleBuilder b(sys, gp);
  b.append_strong("strong+", +1.0);
  return b.finish(false);
}

Schedule modulate_couplings(const SystemParams& sys, Schedule s) {
  const int n = s.samples();
  s.g_1c.resize(n);
  s.g_2c.resize(n);
  s.g_12.resize(n);
  for (int k = 0; k < n; ++k) {
    s.g_1c[k] = sys.g_1c * std::sqrt(s.omega_q1[k] * s.omega_c[k] / (sys.omega_q1 * sys.omega_c));
    s.g_2c[k] = sys.g_2c * std::sqrt(s.omega_q2[k] * s.omega_c[k] / (sys.omega_q2 * sys.omega_c));
    s.g_12[k] = sys.g_12 * std::sqrt(s.omega_q1[k] * s.omega_q2[k] / (sys.omega_q1 * sys.omega_q2));
  }
  return s;
}

}  // namespace nzgate
