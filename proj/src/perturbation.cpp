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

#include "nzgate/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "nzgate/optimize.hpp"

namespace nzgate {

namespace {

double checked_inverse(double x, const char* what) {
  if (x == 0.0) throw Error(ErrorKind::DivergentDetuning, std::string("zero denominator: ") + what);
  return 1.0 / x;
}

void dispersive_check(const SystemParams& p, std::vector<std::string>* warnings) {
  if (!warnings) return;
  const double r1 = std::abs(p.g_1c / (p.omega_q1 - p.omega_c));
  const double r2 = std::abs(p.g_2c / (p.omega_q2 - p.omega_c));
  if (r1 >= 0.3 || r2 >= 0.3) {
    std::ostringstream os;
    os << "outside dispersive regime: |g/Δ| = " << std::max(r1, r2);
    warnings->push_back(os.str());
  }
}

}  // namespace

double effective_J(const SystemParams& p, std::vector<std::string>* warnings) {
  const double inv1 = checked_inverse(p.omega_q1 - p.omega_c, "Δ_1");
  const double inv2 = checked_inverse(p.omega_q2 - p.omega_c, "Δ_2");
  dispersive_check(p, warnings);
  return p.g_12 + p.g_1c * p.g_2c * (inv1 + inv2);
}

double effective_J_null(const SystemParams& p, double lo, double hi) {
  auto f = [&](double wc) { return effective_J(p.with_frequencies(p.omega_q1, wc, p.omega_q2)); };
  const auto roots = opt::all_roots(f, lo, hi, 401, 1e-9);
  if (roots.empty()) {
    throw Error(ErrorKind::NoNullInRange, "effective J keeps its sign over the scan range");
  }
  return roots.front();
}

ZetaBreakdown zeta_perturbative(const SystemParams& p) {
  ZetaBreakdown z;
  z.delta_1 = p.omega_q1 - p.omega_c;
  z.delta_2 = p.omega_q2 - p.omega_c;
  z.delta_12 = p.omega_q1 - p.omega_q2;
  const double inv1 = checked_inverse(z.delta_1, "Δ_1");
  const double inv2 = checked_inverse(z.delta_2, "Δ_2");
  z.delta_harmonic = checked_inverse(inv1 + inv2, "1/Δ_1 + 1/Δ_2");

  const double d020 = checked_inverse(z.delta_1 + z.delta_2 - p.eta_c, "Δ_1 + Δ_2 − η_c");
  const double d200 = checked_inverse(z.delta_12 - p.eta_q2, "Δ_12 − η_2");
  const double d002 = checked_inverse(z.delta_12 + p.eta_q1, "Δ_12 + η_1");
  checked_inverse(z.delta_1 * z.delta_2, "Δ_1 Δ_2");

  const double gg = p.g_1c * p.g_2c;
  const double J = p.g_12 + gg / z.delta_harmonic;
  z.J_020 = std::sqrt(2.0) * gg * (inv1 + inv2);
  z.J_200 = std::sqrt(2.0) * (p.g_12 + gg * inv1);
  z.J_002 = std::sqrt(2.0) * (p.g_12 + gg * inv2);
  z.J_020_shortcut = 2.0 * std::sqrt(2.0) * gg / z.delta_harmonic;
  z.J_200_shortcut = std::sqrt(2.0) * J;
  z.J_002_shortcut = std::sqrt(2.0) * J;

  z.zeta_020 = z.J_020 * z.J_020 * d020;
  z.zeta_200 = z.J_200 * z.J_200 * d200;
  z.zeta_002 = -z.J_002 * z.J_002 * d002;
  z.zeta_1 = 4.0 * p.g_12 * gg * inv1 * inv2;
  z.total = z.zeta_020 + z.zeta_200 + z.zeta_002 + z.zeta_1;
  z.total_shortcut = z.J_020_shortcut * z.J_020_shortcut * d020 +
                     z.J_200_shortcut * z.J_200_shortcut * d200 -
                     z.J_002_shortcut * z.J_002_shortcut * d002 + z.zeta_1;

  dispersive_check(p, &z.warnings);
  if (std::abs(z.delta_12) > std::min(std::abs(p.eta_q1), std::abs(p.eta_q2))) {
    z.warnings.push_back("outside straddling regime: |Δ_12| > |η|");
  }
  return z;
}

OverlapReport leakage_overlap_closed_form(const SystemParams& p) {
  OverlapReport r;
  const double d1 = p.omega_q1 - p.omega_c;
  const double d2 = p.omega_q2 - p.omega_c;
  // Δ_1 = 0 is full hybridization, θ = ±π/2.
  r.theta = d1 != 0.0 ? std::atan(2.0 * p.g_1c / d1) : std::copysign(std::numbers::pi / 2, p.g_1c);
  const double s = std::sin(std::abs(r.theta) / 2.0);
  r.overlap_1photon = s * s;
  r.overlap_2photon = r.overlap_1photon;
  r.overlap_small_angle = d1 != 0.0 ? (p.g_1c * p.g_1c) / (d1 * d1) : 1.0;
  if (d1 != 0.0 && d2 != 0.0) {
    const double delta = 1.0 / (1.0 / d1 + 1.0 / d2);
    r.gtilde_approx = std::abs(p.g_1c * p.g_1c / delta);
    r.gtilde_sqrt2J = std::abs(std::sqrt(2.0) * (p.g_12 + p.g_1c * p.g_2c / d2));
  }
  return r;
}

}  // namespace nzgate
