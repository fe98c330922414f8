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

#include "nzgate/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nzgate {

double ElementNoise::t_phi() const {
  const double rate = (std::isfinite(T2E) ? 1.0 / T2E : 0.0) - (std::isfinite(T1) ? 0.5 / T1 : 0.0);
  return rate > 0.0 ? 1.0 / rate : kInf;
}

ElementNoise ElementNoise::from_t_phi(double T1, double t_phi) {
  const double rate = (std::isfinite(t_phi) ? 1.0 / t_phi : 0.0) + (std::isfinite(T1) ? 0.5 / T1 : 0.0);
  return ElementNoise{T1, rate > 0.0 ? 1.0 / rate : kInf};
}

NoiseModel NoiseModel::paper_gate() {
  NoiseModel n;
  n.element[0] = ElementNoise{110.7e3, 48.5e3};
  n.element[1] = ElementNoise::from_t_phi(1.0e3, 1.0e3);
  n.element[2] = ElementNoise{111.3e3, 110.8e3};
  return n;
}

NoiseModel NoiseModel::paper_idle() {
  NoiseModel n;
  n.element[0] = ElementNoise{55.5e3, 100.9e3};
  n.element[1] = ElementNoise::from_t_phi(1.0e3, 1.0e3);
  n.element[2] = ElementNoise{111.3e3, 110.8e3};
  return n;
}

NoiseModel NoiseModel::none() {
  NoiseModel n;
  n.enabled = {false, false, false};
  return n;
}

NoiseModel NoiseModel::only(Element e) const {
  NoiseModel n = *this;
  n.enabled = {false, false, false};
  n.enabled[static_cast<int>(e)] = true;
  return n;
}

void NoiseModel::validate() const {
  for (int e = 0; e < 3; ++e) {
    const ElementNoise& x = element[e];
    if (!(x.T1 > 0.0) || !(x.T2E > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "NoiseModel: coherence times must be positive");
    }
    if (std::isfinite(x.T1) && x.T2E > 2.0 * x.T1 * (1.0 + 1e-12)) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("NoiseModel: T2E > 2 T1 for element ") + to_string(static_cast<Element>(e)));
    }
  }
}

JumpOperatorSet JumpOperatorSet::compile(const NoiseModel& noise) {
  noise.validate();
  const OperatorTable& ops = OperatorTable::get();
  JumpOperatorSet set;
  for (int e = 0; e < 3; ++e) {
    if (!noise.enabled[e]) continue;
    const Element el = static_cast<Element>(e);
    const ElementNoise& x = noise.element[e];
    if (std::isfinite(x.T1)) {
      const double rate = 1.0 / x.T1;
      set.jumps.push_back(Jump{el, JumpKind::Relaxation, rate, std::sqrt(rate) * ops.lowering(el)});
    }
    const double tphi = x.t_phi();
    if (std::isfinite(tphi)) {
      const double rate = 1.0 / tphi;
      CMatrix n = ops.number(el).cast<cplx>().asDiagonal();
      set.jumps.push_back(Jump{el, JumpKind::Dephasing, rate, std::sqrt(2.0 * rate) * n});
    }
  }
  return set;
}

kernels::Dissipator JumpOperatorSet::dissipator() const {
  std::vector<kernels::SparseReal> ops;
  for (const Jump& j : jumps) ops.push_back(kernels::SparseReal::from_dense(j.op));
  return kernels::Dissipator(std::move(ops), kDim);
}

void check_ket(const CVector& psi, double tol) {
  if (psi.size() != kDim) throw Error(ErrorKind::InvalidArgument, "ket must have 27 amplitudes");
  if (std::abs(psi.norm() - 1.0) > tol) {
    throw Error(ErrorKind::InvalidArgument, "ket is not normalized");
  }
}

double min_eigenvalue(const CMatrix& rho) {
  const CMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void check_density(const CMatrix& rho, double tol, double neg_tol) {
  if (rho.rows() != rho.cols()) throw Error(ErrorKind::InvalidArgument, "density matrix not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorKind::InvalidArgument, "density matrix not Hermitian");
  }
  if (std::abs(rho.trace() - cplx(1.0)) > tol) {
    throw Error(ErrorKind::InvalidArgument, "density matrix trace differs from 1");
  }
  const double m = min_eigenvalue(rho);
  if (m < -neg_tol) {
    throw Error(ErrorKind::NegativeEigenvalue,
                "density matrix eigenvalue " + std::to_string(m) + " below tolerance");
  }
}

HamiltonianTrack::HamiltonianTrack(const SystemParams& sys, const Schedule& schedule,
                                   double frame_offset)
    : sys_(sys), schedule_(schedule), offset_(frame_offset) {
  if (schedule_.samples() < 2) throw Error(ErrorKind::InvalidArgument, "schedule needs two samples");
}

void HamiltonianTrack::at(double t, CMatrix& out) const {
  ControlPoint cp = schedule_.at(t);
  cp.omega_q1 += offset_;
  cp.omega_c += offset_;
  cp.omega_q2 += offset_;
  assemble_hamiltonian(sys_, cp, out);
}

namespace {

/// exp(−iK) for Hermitian K.
CMatrix exp_minus_i(const CMatrix& K) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(K);
  const CVector phases = (-cplx(0.0, 1.0) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Steps through the sample grid and hands each interval's propagator to
/// `apply`. Consecutive static intervals reuse one exponential; when nothing
/// needs recording inside a static run the run collapses to one exponential.
class Stepper {
 public:
  Stepper(const HamiltonianTrack& track, int substeps) : track_(track), substeps_(substeps) {
    if (substeps < 1) throw Error(ErrorKind::InvalidArgument, "substeps must be >= 1");
    const Schedule& s = track.schedule();
    const int n = s.samples() - 1;
    run_id_.assign(n, -1);
    for (std::size_t si = 0; si < s.segments.size(); ++si) {
      const Segment& seg = s.segments[si];
      if (!seg.is_static) continue;
      const int k0 = static_cast<int>(std::lround(seg.t_start / s.dt));
      const int k1 = static_cast<int>(std::lround(seg.t_end / s.dt));
      for (int k = std::max(k0, 0); k < std::min(k1, n); ++k) run_id_[k] = static_cast<int>(si);
    }
  }

  int intervals() const { return static_cast<int>(run_id_.size()); }

  /// Calls apply(U, k_end) for consecutive blocks of intervals, where k_end is
  /// the sample index reached. Blocks never straddle a multiple of `stride`
  /// (stride 0 means no constraint).
  template <class Apply>
  void run(int stride, bool split_substeps, Apply&& apply) {
    const Schedule& s = track_.schedule();
    const double dt = s.dt;
    const double h = dt / substeps_;
    int k = 0;
    const int n = intervals();
    while (k < n) {
      if (run_id_[k] >= 0) {
        int end = k;
        while (end < n && run_id_[end] == run_id_[k]) ++end;
        track_.at(k * dt, H1_);
        if (stride == 0 && !split_substeps) {
          apply(exp_minus_i((kTwoPi * dt * (end - k)) * H1_), end);
        } else {
          const CMatrix U = exp_minus_i((kTwoPi * h) * H1_);
          for (int j = k; j < end; ++j) {
            for (int m = 0; m < substeps_; ++m) apply(U, m + 1 == substeps_ ? j + 1 : -1);
          }
        }
        k = end;
        continue;
      }
      for (int m = 0; m < substeps_; ++m) {
        const double t = k * dt + m * h;
        track_.at(t + h * (0.5 - kGauss), H1_);
        track_.at(t + h * (0.5 + kGauss), H2_);
        K_.noalias() = (std::numbers::pi * h) * (H1_ + H2_);
        C_.noalias() = H2_ * H1_;
        C_.noalias() -= H1_ * H2_;
        K_ += (-cplx(0.0, 1.0) * (std::sqrt(3.0) / 12.0) * std::pow(kTwoPi * h, 2)) * C_;
        apply(exp_minus_i(K_), m + 1 == substeps_ ? k + 1 : -1);
      }
      ++k;
    }
  }

 private:
  static constexpr double kGauss = 0.28867513459481287;  // √3/6
  const HamiltonianTrack& track_;
  int substeps_;
  std::vector<int> run_id_;
  CMatrix H1_, H2_, K_, C_;
};

double worst_infidelity(const CMatrix& a, const CMatrix& b) {
  double worst = 0.0;
  for (int c = 0; c < a.cols(); ++c) {
    const double ov = std::norm(a.col(c).dot(b.col(c))) / (a.col(c).squaredNorm() * b.col(c).squaredNorm());
    worst = std::max(worst, 1.0 - ov);
  }
  return worst;
}

CMatrix propagate_impl(const HamiltonianTrack& track, const CMatrix& state, int substeps,
                       int stride, const MatrixObserver& observer) {
  Stepper stepper(track, substeps);
  CMatrix x = state;
  CMatrix tmp;
  const double dt = track.schedule().dt;
  if (observer && stride > 0) observer(0.0, x);
  stepper.run(observer ? stride : 0, false, [&](const CMatrix& U, int k_end) {
    tmp.noalias() = U * x;
    x.swap(tmp);
    if (observer && stride > 0 && k_end > 0 && k_end % stride == 0) observer(k_end * dt, x);
  });
  return x;
}

}  // namespace

CMatrix hermitian_exp(const CMatrix& H, double tau) { return exp_minus_i((kTwoPi * tau) * H); }

CMatrix propagate(const SystemParams& sys, const Schedule& schedule, const CMatrix& state,
                  const PropagationOptions& opts, const MatrixObserver& observer) {
  if (state.rows() != kDim) throw Error(ErrorKind::InvalidArgument, "state must have 27 rows");
  const HamiltonianTrack track(sys, schedule, opts.frame_offset);
  CMatrix out = propagate_impl(track, state, opts.substeps, opts.record_stride, observer);
  if (opts.audit) {
    const CMatrix fine = propagate_impl(track, state, 2 * opts.substeps, 0, {});
    const double diff = worst_infidelity(out, fine);
    if (diff > opts.audit_tol) {
      throw Error(ErrorKind::StepTooCoarse,
                  "halving the step changes the final state by " + std::to_string(diff));
    }
  }
  return out;
}

CVector propagate_unitary(const SystemParams& sys, const Schedule& schedule, const CVector& psi0,
                          const PropagationOptions& opts,
                          const std::function<void(double, const CVector&)>& observer) {
  check_ket(psi0);
  MatrixObserver obs;
  if (observer) obs = [&](double t, const CMatrix& m) { observer(t, m.col(0)); };
  return propagate(sys, schedule, CMatrix(psi0), opts, obs).col(0);
}

CMatrix gate_propagator(const SystemParams& sys, const Schedule& schedule,
                        const PropagationOptions& opts) {
  return propagate(sys, schedule, CMatrix::Identity(kDim, kDim), opts);
}

std::vector<CMatrix> lindblad_map(const SystemParams& sys, const Schedule& schedule,
                                  std::vector<CMatrix> ops, const NoiseModel& noise,
                                  const PropagationOptions& opts, const BatchObserver& observer) {
  for (const CMatrix& r : ops) {
    if (r.rows() != kDim || r.cols() != kDim) {
      throw Error(ErrorKind::InvalidArgument, "lindblad_map: operators must be 27x27");
    }
  }
  const kernels::Dissipator diss = JumpOperatorSet::compile(noise).dissipator();
  const HamiltonianTrack track(sys, schedule, opts.frame_offset);
  Stepper stepper(track, opts.substeps);
  const double h = schedule.dt / opts.substeps;
  const double dt = schedule.dt;
  auto conjugate = opts.parallel ? kernels::conjugate_batch_parallel : kernels::conjugate_batch_serial;
  auto dissipate = opts.parallel ? kernels::dissipate_batch_parallel : kernels::dissipate_batch_serial;
  const int stride = opts.record_stride;
  if (observer && stride > 0) observer(0.0, ops);
  // Strang splitting; the trailing half-step of one step is fused with the
  // leading half-step of the next.
  double pending = 0.5 * h;
  // Without dissipation the whole static run can be one exponential.
  stepper.run(observer ? stride : 0, !diss.empty(), [&](const CMatrix& U, int k_end) {
    dissipate(diss, ops, pending);
    conjugate(U, ops);
    pending = h;
    if (observer && stride > 0 && k_end > 0 && k_end % stride == 0) {
      dissipate(diss, ops, 0.5 * h);
      pending = 0.5 * h;
      observer(k_end * dt, ops);
    }
  });
  if (pending == h) dissipate(diss, ops, 0.5 * h);
  return ops;
}

std::vector<CMatrix> lindblad_evolve(const SystemParams& sys, const Schedule& schedule,
                                     std::vector<CMatrix> rhos, const NoiseModel& noise,
                                     const PropagationOptions& opts, const BatchObserver& observer) {
  for (const CMatrix& r : rhos) check_density(r);
  auto check_all = [](const std::vector<CMatrix>& batch, double t) {
    for (const CMatrix& r : batch) {
      const double m = min_eigenvalue(r);
      if (m < -1e-6) {
        throw Error(ErrorKind::NegativeEigenvalue,
                    "eigenvalue " + std::to_string(m) + " at t = " + std::to_string(t) + " ns");
      }
    }
  };
  BatchObserver obs;
  if (observer) {
    obs = [&](double t, const std::vector<CMatrix>& batch) {
      check_all(batch, t);
      observer(t, batch);
    };
  }
  std::vector<CMatrix> out = lindblad_map(sys, schedule, rhos, noise, opts, obs);
  check_all(out, schedule.duration());
  for (const CMatrix& r : out) {
    if (std::abs(r.trace() - cplx(1.0)) > 1e-7) {
      throw Error(ErrorKind::StepTooCoarse, "trace drifted by more than 1e-7");
    }
  }
  if (opts.audit) {
    PropagationOptions fine = opts;
    fine.audit = false;
    fine.record_stride = 0;
    fine.substeps = 2 * opts.substeps;
    const std::vector<CMatrix> ref = lindblad_map(sys, schedule, std::move(rhos), noise, fine, {});
    double diff = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      diff = std::max(diff, (out[i] - ref[i]).cwiseAbs().maxCoeff());
    }
    if (diff > opts.audit_tol) {
      throw Error(ErrorKind::StepTooCoarse,
                  "halving the step changes the final state by " + std::to_string(diff));
    }
  }
  return out;
}

CMatrix lindblad_evolve(const SystemParams& sys, const Schedule& schedule, const CMatrix& rho0,
                        const NoiseModel& noise, const PropagationOptions& opts) {
  return lindblad_evolve(sys, schedule, std::vector<CMatrix>{rho0}, noise, opts).front();
}

}  // namespace nzgate
