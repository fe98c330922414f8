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

/// Fourth-order ZZ decomposition. Detunings follow Δ_j = ω_j − ω_c and
/// Δ_12 = ω_1 − ω_2; the harmonic detuning obeys 1/Δ = 1/Δ_1 + 1/Δ_2.
struct ZetaBreakdown {
  double zeta_020 = 0.0;
  double zeta_200 = 0.0;
  double zeta_002 = 0.0;
  double zeta_1 = 0.0;
  double total = 0.0;
  double J_020 = 0.0;
  double J_200 = 0.0;
  double J_002 = 0.0;
  // √2·J style shortcuts for the same couplings.
  double J_020_shortcut = 0.0;
  double J_200_shortcut = 0.0;
  double J_002_shortcut = 0.0;
  // Total with the shortcut couplings in place of the exact ones.
  double total_shortcut = 0.0;
  double delta_1 = 0.0;
  double delta_2 = 0.0;
  double delta_12 = 0.0;
  double delta_harmonic = 0.0;
  std::vector<std::string> warnings;
};

/// Two-state model of a qubit level hybridizing with the coupler.
struct OverlapReport {
  double theta = 0.0;            // rad
  double overlap_1photon = 0.0;  // sin²(|θ|/2)
  double overlap_2photon = 0.0;  // identical in the two-state model
  double overlap_small_angle = 0.0;  // g²/Δ_1²
  double gtilde_approx = 0.0;    // |g_1c²/Δ|, GHz
  double gtilde_sqrt2J = 0.0;    // |√2 (g_12 + g_1c g_2c/Δ_2)|, GHz
};

/// J = g_12 + g_1c g_2c / Δ. Appends a warning when |g/Δ| ≥ 0.3.
double effective_J(const SystemParams& p, std::vector<std::string>* warnings = nullptr);

/// Coupler frequency in [lo, hi] where effective_J vanishes. Throws
/// NoNullInRange if J keeps its sign over the bracket.
double effective_J_null(const SystemParams& p, double lo, double hi);

ZetaBreakdown zeta_perturbative(const SystemParams& p);

OverlapReport leakage_overlap_closed_form(const SystemParams& p);

}  // namespace nzgate
