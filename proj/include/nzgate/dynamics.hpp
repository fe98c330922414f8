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
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nzgate/hilbert.hpp"
#include "nzgate/kernels.hpp"
#include "nzgate/pulse.hpp"

namespace nzgate {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Coherence times of one element in ns; infinity disables the channel.
struct ElementNoise {
  double T1 = kInf;
  double T2E = kInf;

  /// Pure dephasing time from the echo formula 1/T_φ = 1/T2E − 1/(2 T1).
  double t_phi() const;
  static ElementNoise from_t_phi(double T1, double t_phi);
};

struct NoiseModel {
  std::array<ElementNoise, 3> element{};  // indexed by Element
  std::array<bool, 3> enabled{true, true, true};

  /// Gate-point coherence, coupler at T1 = T_φ = 1 µs.
  static NoiseModel paper_gate();
  /// Idle-point coherence, coupler at T1 = T_φ = 1 µs.
  static NoiseModel paper_idle();
  static NoiseModel none();

  /// Copy with only the listed element enabled.
  NoiseModel only(Element e) const;
  /// Throws InvalidArgument when T2E > 2 T1 or a time is not positive.
  void validate() const;
};

enum class JumpKind { Relaxation, Dephasing };

struct Jump {
  Element element;
  JumpKind kind;
  double rate;  // 1/ns
  CMatrix op;   // √rate · b  or  √(2·rate) · n
};

struct JumpOperatorSet {
  std::vector<Jump> jumps;

  static JumpOperatorSet compile(const NoiseModel& noise);
  kernels::Dissipator dissipator() const;
};

/// Throws InvalidArgument if |‖ψ‖ − 1| > tol.
void check_ket(const CVector& psi, double tol = 1e-9);
/// Throws InvalidArgument unless ρ is Hermitian with unit trace, and
/// NegativeEigenvalue if an eigenvalue is below −neg_tol.
void check_density(const CMatrix& rho, double tol = 1e-9, double neg_tol = 1e-9);
double min_eigenvalue(const CMatrix& rho);

/// Lab-frame H(t) of a schedule, GHz; linear interpolation between samples.
class HamiltonianTrack {
 public:
  HamiltonianTrack(const SystemParams& sys, const Schedule& schedule, double frame_offset = 0.0);
  void at(double t, CMatrix& out) const;
  const Schedule& schedule() const { return schedule_; }

 private:
  SystemParams sys_;
  Schedule schedule_;
  double offset_;
};

struct PropagationOptions {
  int substeps = 1;         // integrator steps per schedule sample interval
  int record_stride = 0;    // call the observer every this many samples; 0 = never
  bool audit = false;       // rerun with doubled substeps and compare
  double audit_tol = 1e-8;  // on 1 − |⟨ψ_h|ψ_h/2⟩|² (worst column)
  bool parallel = true;     // use the OpenMP batch kernels
  double frame_offset = 0.0;  // GHz added to every element frequency
};

/// Observer receives (t, state); for propagate it is the evolved matrix.
using MatrixObserver = std::function<void(double, const CMatrix&)>;
using BatchObserver = std::function<void(double, const std::vector<CMatrix>&)>;

/// exp(−i 2π H τ) for Hermitian H (GHz) and τ in ns.
CMatrix hermitian_exp(const CMatrix& H, double tau);

/// Propagates the columns of `state` (27×m) through the schedule with the
/// two-point Gauss Magnus integrator; static segments use one exact
/// exponential. Pass the identity to obtain the full propagator.
CMatrix propagate(const SystemParams& sys, const Schedule& schedule, const CMatrix& state,
                  const PropagationOptions& opts = {}, const MatrixObserver& observer = {});

CVector propagate_unitary(const SystemParams& sys, const Schedule& schedule, const CVector& psi0,
                          const PropagationOptions& opts = {},
                          const std::function<void(double, const CVector&)>& observer = {});

CMatrix gate_propagator(const SystemParams& sys, const Schedule& schedule,
                        const PropagationOptions& opts = {});

/// Strang-split Lindblad evolution of a batch of density matrices: exact
/// Magnus unitary step between two dissipator half-steps. The final states
/// are checked for trace, Hermiticity and negative eigenvalues.
std::vector<CMatrix> lindblad_evolve(const SystemParams& sys, const Schedule& schedule,
                                     std::vector<CMatrix> rho0, const NoiseModel& noise,
                                     const PropagationOptions& opts = {},
                                     const BatchObserver& observer = {});

/// Same propagation applied to arbitrary 27×27 operators (no physicality
/// checks); used to build channels from matrix units.
std::vector<CMatrix> lindblad_map(const SystemParams& sys, const Schedule& schedule,
                                  std::vector<CMatrix> ops, const NoiseModel& noise,
                                  const PropagationOptions& opts = {},
                                  const BatchObserver& observer = {});

CMatrix lindblad_evolve(const SystemParams& sys, const Schedule& schedule, const CMatrix& rho0,
                        const NoiseModel& noise, const PropagationOptions& opts = {});

}  // namespace nzgate
