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

#include "nzgate/kernels.hpp"

#include <cmath>

namespace nzgate::kernels {

SparseReal SparseReal::from_dense(const CMatrix& m, double tol) {
  SparseReal s;
  for (int j = 0; j < m.cols(); ++j) {
    for (int i = 0; i < m.rows(); ++i) {
      const cplx v = m(i, j);
      if (std::abs(v) > tol) {
        if (std::abs(v.imag()) > tol) {
          throw Error(ErrorKind::InvalidArgument, "SparseReal: operator has imaginary entries");
        }
        s.entries.push_back({i, j, v.real()});
      }
    }
  }
  return s;
}

Dissipator::Dissipator(std::vector<SparseReal> jumps, int dim)
    : jumps_(std::move(jumps)), half_sum_(Eigen::VectorXd::Zero(dim)), dim_(dim) {
  // Σ c†c, checked to be diagonal.
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
  for (const SparseReal& c : jumps_) {
    for (const auto& a : c.entries) {
      for (const auto& b : c.entries) {
        if (a.row == b.row) sum(a.col, b.col) += a.value * b.value;
      }
    }
  }
  const Eigen::MatrixXd off = sum - Eigen::MatrixXd(sum.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "Dissipator: sum of c^dag c is not diagonal");
  }
  half_sum_ = 0.5 * sum.diagonal();
}

void Dissipator::apply(const CMatrix& rho, CMatrix& out) const {
  out.resize(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    for (int i = 0; i < dim_; ++i) out(i, j) = -(half_sum_(i) + half_sum_(j)) * rho(i, j);
  }
  for (const SparseReal& c : jumps_) {
    for (const auto& a : c.entries) {
      for (const auto& b : c.entries) {
        out(a.row, b.row) += (a.value * b.value) * rho(a.col, b.col);
      }
    }
  }
}

void Dissipator::rk4_step(CMatrix& rho, double tau, CMatrix scratch[4]) const {
  CMatrix& k = scratch[0];
  CMatrix& acc = scratch[1];
  CMatrix& tmp = scratch[2];
  apply(rho, k);
  acc = k;
  tmp = rho + (0.5 * tau) * k;
  apply(tmp, k);
  acc += 2.0 * k;
  tmp = rho + (0.5 * tau) * k;
  apply(tmp, k);
  acc += 2.0 * k;
  tmp = rho + tau * k;
  apply(tmp, k);
  acc += k;
  rho += (tau / 6.0) * acc;
}

void conjugate_batch_serial(const CMatrix& U, std::vector<CMatrix>& rhos) {
  CMatrix tmp;
  for (CMatrix& r : rhos) {
    tmp.noalias() = U * r;
    r.noalias() = tmp * U.adjoint();
  }
}

void conjugate_batch_parallel(const CMatrix& U, std::vector<CMatrix>& rhos) {
  const int n = static_cast<int>(rhos.size());
#pragma omp parallel num_threads(default_workers())
  {
    CMatrix tmp;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      tmp.noalias() = U * rhos[i];
      rhos[i].noalias() = tmp * U.adjoint();
    }
  }
}

void dissipate_batch_serial(const Dissipator& d, std::vector<CMatrix>& rhos, double tau) {
  if (d.empty()) return;
  CMatrix scratch[4];
  for (CMatrix& r : rhos) d.rk4_step(r, tau, scratch);
}

void dissipate_batch_parallel(const Dissipator& d, std::vector<CMatrix>& rhos, double tau) {
  if (d.empty()) return;
  const int n = static_cast<int>(rhos.size());
#pragma omp parallel num_threads(default_workers())
  {
    CMatrix scratch[4];
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) d.rk4_step(rhos[i], tau, scratch);
  }
}

namespace {
int g_workers = 0;
}

void set_default_workers(int workers) { g_workers = workers; }

int default_workers() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

}  // namespace nzgate::kernels
