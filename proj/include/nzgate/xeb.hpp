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
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nzgate/metrics.hpp"

namespace nzgate {

/// Dressed states with at most two excitations; XEB channels act on their span.
inline constexpr int kXebDim = 10;
const std::array<BareLabel, kXebDim>& xeb_labels();

/// Linear map on 10×10 density matrices, column-stacked (100×100).
struct Superop {
  CMatrix m = CMatrix::Identity(kXebDim * kXebDim, kXebDim * kXebDim);

  CMatrix apply(const CMatrix& rho) const;
  Superop then(const Superop& next) const;  // next ∘ this
  static Superop unitary(const CMatrix& U);
};

/// Idle channel of `duration` ns in the rotating frame of the idle
/// Hamiltonian, from the Lindbladian restricted to the 10-state subspace.
Superop idle_channel(const SystemParams& sys, const NoiseModel& noise, double duration);

/// Channel of a gate schedule from a 27-level Lindblad run on the 100 matrix
/// units, restricted back to the subspace in the idle rotating frame, with
/// the single-qubit phases removed by virtual Z corrections.
Superop gate_channel(const SystemParams& sys, const Schedule& schedule, const NoiseModel& noise,
                     const PropagationOptions& opts = {});

/// 1Q layer u1 ⊗ u2 on the computational states, identity elsewhere.
CMatrix embed_two_qubit(const Eigen::Matrix4cd& U);

enum class GateSet { SqrtXYW, Haar };
enum class Interleave { None, IdealCZ, Channel };

struct XebConfig {
  std::vector<int> depths{1, 2, 4, 8, 16, 32, 64, 100};
  int circuits = 20;
  std::uint64_t seed = 1234;
  GateSet gate_set = GateSet::SqrtXYW;
  Interleave interleave = Interleave::None;
  double cycle_ns = 40.0;
  double phi_2q = std::numbers::pi;  // ideal gate used for the reference probabilities
  std::optional<Superop> gate;       // required for Interleave::Channel
  std::optional<Superop> idle;       // noise of the 1Q layer; identity if unset
  double inject_depolarizing = 1.0;  // p₀ of an extra global depolarizing channel per cycle
  long shots = 0;                    // 0 = exact probabilities
  int bootstrap = 200;
  bool parallel = true;

  void validate() const;
};

struct Estimate {
  double value = 0.0;
  double lo = 0.0;  // 68% interval
  double hi = 0.0;
};

/// A·p^d + B with bootstrap intervals.
struct DecayFit {
  Estimate A, p, B;
  double residual = 0.0;
};

struct XebFit {
  DecayFit xeb;
  DecayFit purity;
  std::vector<int> depths;
  std::vector<double> mean_xeb, mean_purity, mean_leakage;
  std::vector<std::vector<double>> xeb_per_circuit;  // [depth][circuit], 0 where degenerate
  // Pooled estimator pieces: mean_xeb[d] = Σ num / Σ den over circuits.
  std::vector<std::vector<double>> xeb_num_per_circuit, xeb_den_per_circuit;
  std::vector<std::vector<double>> purity_per_circuit;
  std::vector<std::vector<double>> leakage_per_circuit;
  Estimate cycle_error;    // (1 − p)(1 − 1/D)
  Estimate purity_error;   // 1 − p_purity
  Estimate leakage_error;  // initial slope of the leakage curve per cycle
};

/// Least-squares A·p^d + B by variable projection over p ∈ [0, 1]. A curve
/// flat at 1 returns p = 1; any other flat curve throws FitDegenerate.
DecayFit fit_decay(const std::vector<int>& depths, const std::vector<double>& y);

XebFit run_xeb(const XebConfig& config);

/// F = p + (1 − p)/D with p = p_int/p_ref.
double fidelity_from_p(double p_ref, double p_int, int D = 4);

/// Depolarization fidelity from a cycle error e = (1 − p)(1 − 1/D).
double p_from_cycle_error(double cycle_error, int D = 4);

/// ε = purity_int − leak_int − 1.5·purity_ref.
double decoherence_error_estimate(double purity_int, double leak_int, double purity_ref);

/// Per-task generator from the master seed (splitmix64 of seed + task).
std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t task);

}  // namespace nzgate
