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

#include <array>
#include <string>
#include <vector>

#include "nzgate/dynamics.hpp"

namespace nzgate {

/// Diagonal phases of a CPhase-like gate, referenced to φ_000.
struct PhaseSet {
  double phi_000 = 0.0;
  double phi_001 = 0.0;
  double phi_100 = 0.0;
  double phi_101 = 0.0;
  double phi_2Q = 0.0;  // wrapped to (−π, π]
};

double wrap_phase(double x);

/// Phases of the diagonal of a 4×4 block ordered {000, 001, 100, 101}.
/// Throws NotCPhaseLike if any diagonal magnitude is ≤ 0.99.
PhaseSet extract_phases(const Eigen::Matrix4cd& U);

/// Dressed eigenbasis of the idle Hamiltonian at a control point.
struct DressedFrame {
  EigenSolution sol;
  ControlPoint cp;

  static DressedFrame at(const SystemParams& sys, const ControlPoint& cp);
  /// Frame of the schedule's first sample (plus an optional frequency offset).
  static DressedFrame of(const SystemParams& sys, const Schedule& schedule, double offset = 0.0);

  CVector state(BareLabel l) const { return sol.state(l); }
  double energy(BareLabel l) const { return sol.energy(l); }
  /// 27×n matrix of dressed states in the given label order.
  CMatrix basis(std::span<const BareLabel> labels) const;
  /// e^{+i2πH T}: removes the idle evolution from a propagated state.
  CMatrix to_rotating(const CMatrix& state, double T) const;
};

/// ⟨j̃|U|k̃⟩ e^{i2πE_j T} over the computational dressed states.
Eigen::Matrix4cd computational_block(const CMatrix& U, const DressedFrame& frame, double T);

/// Coefficients of the 16 preparations {0,1,+,−}⊗{0,1,+,−} (Q1 first) in
/// the computational order {00, 01, 10, 11}.
std::array<Eigen::Vector4cd, 16> product_preparations();

/// Uhlmann fidelity (tr√(√ρ σ √ρ))².
double state_fidelity(const CMatrix& rho, const CMatrix& sigma);

/// Mean Uhlmann fidelity over paired lists.
double average_state_fidelity(const std::vector<CMatrix>& noisy, const std::vector<CMatrix>& ideal);

struct GateReport {
  PhaseSet phases;
  std::vector<std::pair<BareLabel, double>> populations;  // dressed labels from |1̃01⟩
  double leakage = 0.0;          // non-computational population from |1̃01⟩
  double coupler_leakage = 0.0;  // population with a coupler excitation
  double fidelity = 0.0;         // 16-state fidelity vs CPhase(φ_2Q) after 1Q phase correction
  double duration = 0.0;
};

/// Noiseless analysis of a gate schedule.
GateReport analyze_gate(const SystemParams& sys, const Schedule& schedule,
                        const PropagationOptions& opts = {});

/// Conditional phase of a schedule (computational columns only).
PhaseSet gate_phases(const SystemParams& sys, const Schedule& schedule,
                     const PropagationOptions& opts = {});

struct NoiseErrorReport {
  double error_vs_noiseless = 0.0;  // 1 − F(noisy, noiseless evolution)
  double error_vs_ideal = 0.0;      // 1 − F(noisy, ideal CPhase(φ_2Q))
  double noiseless_error = 0.0;     // 1 − F(noiseless, ideal CPhase(φ_2Q))
};

/// Lindblad evolution of the 16 dressed preparations through the schedule.
NoiseErrorReport gate_error(const SystemParams& sys, const Schedule& schedule,
                            const NoiseModel& noise, const PropagationOptions& opts = {});

struct ZzNull {
  double omega_c = 0.0;
  double zeta = 0.0;  // GHz at the null
  double J = 0.0;     // exact XY coupling at the null, GHz
  std::vector<double> candidates;  // every ZZ root found in the range
  double xy_null = 0.0;            // exact J root used to pick the candidate (NaN if none)
};

/// Coupler frequency in [lo, hi] where zz_exact vanishes. With `modulated`,
/// the couplings follow the sqrt law relative to `sys`. When several roots
/// exist the one nearest the XY null wins. Throws NoNullInRange.
ZzNull find_zz_null(const SystemParams& sys, double lo, double hi, bool modulated = false,
                    int grid = 101);

/// Ramsey phase of Q1 in the frame of its dressed frequency, with Q2 in |0̃⟩
/// or |1̃⟩; the excited-minus-ground difference is the ZZ angle 2πζt.
double ramsey_zz_angle(const SystemParams& sys, double idle_time, bool control_excited);

/// Unwrapped ZZ angle (excited minus ground) at each time.
std::vector<double> ramsey_zz_curve(const SystemParams& sys, const std::vector<double>& times);

enum class SwapVariant { CZ, ISwap };

struct SwapPoint {
  double omega_c = 0.0;
  double resonance = 0.0;  // Q2 frequency of maximum contrast
  double frequency = 0.0;  // fitted oscillation frequency, GHz
  double gtilde = 0.0;     // frequency / 2
  double contrast = 0.0;   // peak-to-peak of the fitted sinusoid
  double gap_gtilde = 0.0; // spectral half splitting for comparison
  bool ok = false;
  std::string status;
};

/// Fits f in a + b cos(2πft) + c sin(2πft) to samples; returns
/// {f, peak-to-peak, rms residual}.
std::array<double, 3> fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y);

/// Time-domain swap rate at one coupler frequency: Q2 is tuned to maximize
/// the oscillation contrast of |101⟩↔|200⟩ (CZ) or |100⟩↔|001⟩ (iSWAP) and
/// a sinusoid is fitted. Throws FitFailed when contrast < 0.1.
SwapPoint swap_rate(const SystemParams& sys, double omega_c, SwapVariant variant,
                    bool modulated = false);

/// swap_rate over many coupler frequencies; FitFailed points are kept with ok = false.
std::vector<SwapPoint> swap_rate_scan(const SystemParams& sys, const std::vector<double>& omega_c,
                                      SwapVariant variant, bool modulated = false,
                                      bool parallel = true);

}  // namespace nzgate
