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

#include <exception>
#include <functional>
#include <vector>

#include <omp.h>

#include "nzgate/common.hpp"

namespace nzgate::kernels {

/// Real sparse operator given by its (row, col, value) triplets.
struct SparseReal {
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;

  static SparseReal from_dense(const CMatrix& m, double tol = 1e-15);
};

/// Time-independent Lindblad dissipator D(ρ) = Σ c ρ c† − ½{Σ c†c, ρ} for
/// real jump operators whose Σ c†c is diagonal.
class Dissipator {
 public:
  Dissipator() = default;
  Dissipator(std::vector<SparseReal> jumps, int dim);

  bool empty() const { return jumps_.empty(); }
  int dim() const { return dim_; }
  void apply(const CMatrix& rho, CMatrix& out) const;
  /// ρ ← exp(τD)ρ to fourth order (one RK4 step).
  void rk4_step(CMatrix& rho, double tau, CMatrix scratch[4]) const;

 private:
  std::vector<SparseReal> jumps_;
  Eigen::VectorXd half_sum_;  // ½ diag(Σ c†c)
  int dim_ = 0;
};

/// ρ_k ← U ρ_k U† for every member of the batch.
void conjugate_batch_serial(const CMatrix& U, std::vector<CMatrix>& rhos);
void conjugate_batch_parallel(const CMatrix& U, std::vector<CMatrix>& rhos);

/// One RK4 dissipator step of length tau on every member of the batch.
void dissipate_batch_serial(const Dissipator& d, std::vector<CMatrix>& rhos, double tau);
void dissipate_batch_parallel(const Dissipator& d, std::vector<CMatrix>& rhos, double tau);

/// Worker count used by map_parallel when 0 is passed; set from the CLI.
void set_default_workers(int workers);
int default_workers();

/// Evaluates f(0..n-1) into a vector. The parallel flavour uses a static
/// OpenMP schedule, so results are in index order regardless of workers.
template <class T>
std::vector<T> map_serial(int n, const std::function<T(int)>& f) {
  std::vector<T> out(n);
  for (int i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

template <class T>
std::vector<T> map_parallel(int n, const std::function<T(int)>& f, int workers = 0) {
  std::vector<T> out(n);
  std::exception_ptr err;
  const int threads = workers > 0 ? workers : default_workers();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = f(i);
    } catch (...) {
#pragma omp critical(nzgate_map_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace nzgate::kernels
