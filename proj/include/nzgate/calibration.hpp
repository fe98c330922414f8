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

#include <vector>

#include "nzgate/metrics.hpp"

namespace nzgate {

/// Population of the dressed |200⟩ after the exchange step, starting from
/// the dressed |101⟩ of the idle point.
double exchange_population(const SystemParams& sys, const GateProtocolParams& gp,
                           const PropagationOptions& opts = {});

struct ExchangeOptions {
  double V_span = 0.03;        // half-width of the first V bracket, GHz
  bool tune_coupler = true;    // also refine gp.coupler_on_freq
  double coupler_lo = 5.0;     // coupler search range, GHz
  double coupler_hi = 10.0;
  double coupler_span = 0.4;   // half-width of the first coupler bracket, GHz
  int grid = 7;
  int max_rounds = 4;
  double target_residual = 1e-4;
  bool spectral_seed = true;   // start from the spectral resonance and gap
  PropagationOptions prop{};
};

struct ExchangeCalibration {
  double V = 0.0;
  double coupler_on_freq = 0.0;
  double p200 = 0.0;
  double residual = 1.0;  // 1 − p200
  int evaluations = 0;
};

/// Maximizes the exchange population over V (and the coupler dip depth).
/// Throws NoExchangeFound if the best population stays below 0.5.
ExchangeCalibration calibrate_exchange_amplitude(const SystemParams& sys,
                                                 const GateProtocolParams& gp,
                                                 const ExchangeOptions& opts = {});

struct PhaseSweep {
  std::vector<double> a_int;
  std::vector<double> phi_2q;  // unwrapped along the sweep
  bool monotone = false;
};

PhaseSweep phase_sweep(const SystemParams& sys, const GateProtocolParams& gp, double a_lo,
                       double a_hi, int points, const PropagationOptions& opts = {},
                       bool parallel = true);

struct PhaseCalibration {
  double a_int = 0.0;
  double phi_2q = 0.0;   // wrapped
  double error = 0.0;    // wrapped φ_2Q − target, rad
  double duration = 0.0;
  int evaluations = 0;
};

/// Solves φ_2Q(a_int) = target (mod 2π) inside the sweep. Throws
/// TargetOutOfRange when no branch of the target lies within the sweep.
PhaseCalibration calibrate_phase_amplitude(const SystemParams& sys, const GateProtocolParams& gp,
                                           double target, const PhaseSweep& sweep,
                                           const PropagationOptions& opts = {});

/// Full gate calibration: exchange step, then the phase for `target`.
struct CPhaseCalibration {
  GateProtocolParams gp;
  ExchangeCalibration exchange;
  PhaseCalibration phase;
  PhaseSweep sweep;
};

CPhaseCalibration calibrate_cphase(const SystemParams& sys, GateProtocolParams gp, double target,
                                   double a_max = 0.3, int sweep_points = 21,
                                   const ExchangeOptions& opts = {});

}  // namespace nzgate
