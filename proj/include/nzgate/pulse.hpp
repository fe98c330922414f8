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

#pragma once

#include <string>
#include <vector>

#include "nzgate/hilbert.hpp"

namespace nzgate {

/// Symmetric-SQUID transmon tuning curve with the qubit parked at its sweet
/// spot: ω(Φ) = (ω_max + |η|)·sqrt|cos(πΦ)| − |η|, Φ in units of Φ0.
struct FluxMap {
  double omega_max = 0.0;
  double eta = 0.0;

  double frequency(double phi) const;
  /// Non-negative flux that lowers the frequency by `excursion` GHz.
  double flux_for_excursion(double excursion) const;
};

/// Settings of the three-step net-zero CPhase protocol. Times in ns,
/// frequencies in GHz.
struct GateProtocolParams {
  double t_p = 20.0;        // strong pulse duration
  double t_d = 20.0;        // delay after each pulse
  double t_weak = 20.0;     // weak bipolar pulse duration (two lobes)
  double V = 0.0;           // strong-pulse frequency excursion
  double a_int = 0.0;       // weak-lobe peak frequency excursion; sign = first-lobe polarity
  double sigma = 2.5;       // Gaussian edge width
  double coupler_on_freq = 6.5;
  double coupler_off_freq = 0.0;  // 0 → SystemParams::omega_c
  // Coupler dip during a strong pulse: 1/(ω_c − ω̄) moves linearly with
  // sin^coupler_power(πt/t_p), ω̄ the mean qubit idle frequency. Slow
  // opening keeps the |100⟩/|001⟩ mixing adiabatic.
  double coupler_power = 4.0;
  double sample_dt = 0.005;
  double slew_limit = 20.0;  // GHz/ns, max |dω/dt| between samples
  Element strong_qubit = Element::Q1;
  Element weak_qubit = Element::Q1;
  bool modulate_couplings = true;

  /// Paper settings: t_p = t_d = 20 ns, sigma = t_p/8, weak pulse as long as t_p.
  static GateProtocolParams paper_defaults();
  void validate() const;
};

struct Segment {
  std::string name;
  double t_start = 0.0;
  double t_end = 0.0;
  bool is_static = false;  // Hamiltonian constant over the segment
};

/// Uniformly sampled control trajectories; sample k sits at t = k·dt.
struct Schedule {
  double dt = 0.0;
  std::vector<double> omega_q1, omega_c, omega_q2;
  std::vector<double> g_1c, g_2c, g_12;
  std::vector<double> flux_q1, flux_q2;  // Φ/Φ0 control waveforms
  std::vector<Segment> segments;
  bool net_zero = false;

  int samples() const { return static_cast<int>(omega_q1.size()); }
  double duration() const { return dt * (samples() - 1); }
  ControlPoint sample(int k) const;
  /// Linear interpolation between samples; clamps outside [0, duration].
  ControlPoint at(double t) const;
  /// Trapezoidal ∫Φ dt for a qubit's flux waveform, Φ0·ns.
  double flux_integral(Element qubit) const;
  /// Trapezoidal ∫(ω − ω_idle) dt for a qubit, GHz·ns.
  double frequency_integral(Element qubit) const;
  /// Largest |Δω|/dt over all three trajectories, GHz/ns.
  double max_slew() const;

  /// Constant schedule at the SystemParams operating point.
  static Schedule idle(const SystemParams& sys, double duration, double dt);
};

/// Flat-top envelope with lifted-Gaussian edges, sampled at t = 0, dt, …, t_p.
/// The edges span min(2σ, t_p/2) and start and end at exactly zero.
std::vector<double> flattop_pulse(double amplitude, double t_p, double sigma, double dt);

/// Exact area of flattop_pulse for unit amplitude.
double flattop_area(double t_p, double sigma);

/// Three-step schedule: strong +V pulse with coupler dip, delay, weak bipolar
/// pulse, delay, strong −V pulse with coupler dip, delay. Throws SlewViolation
/// when a trajectory jumps faster than gp.slew_limit.
Schedule make_cphase_schedule(const SystemParams& sys, const GateProtocolParams& gp);

/// Only the first strong pulse (exchange step), used for amplitude calibration.
Schedule make_exchange_schedule(const SystemParams& sys, const GateProtocolParams& gp);

/// Fills g(t) = g_ref sqrt(ω_i(t) ω_j(t) / (ω_i,ref ω_j,ref)) with `sys` as the reference.
Schedule modulate_couplings(const SystemParams& sys, Schedule schedule);

}  // namespace nzgate
