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

#include <benchmark/benchmark.h>

#include "nzgate/dynamics.hpp"

namespace {

using namespace nzgate;

std::vector<CMatrix> batch(int n) {
  std::vector<CMatrix> r(n);
  for (int i = 0; i < n; ++i) {
    CMatrix a = CMatrix::Random(kDim, kDim);
    r[i] = a * a.adjoint();
    r[i] /= r[i].trace();
  }
  return r;
}

CMatrix some_unitary() {
  CMatrix h = CMatrix::Random(kDim, kDim);
  h = (h + h.adjoint()).eval();
  return hermitian_exp(h, 0.01);
}

void BM_ConjugateSerial(benchmark::State& st) {
  auto r = batch(static_cast<int>(st.range(0)));
  const CMatrix U = some_unitary();
  for (auto _ : st) {
    kernels::conjugate_batch_serial(U, r);
    benchmark::DoNotOptimize(r.front().data());
  }
}

void BM_ConjugateParallel(benchmark::State& st) {
  auto r = batch(static_cast<int>(st.range(0)));
  const CMatrix U = some_unitary();
  for (auto _ : st) {
    kernels::conjugate_batch_parallel(U, r);
    benchmark::DoNotOptimize(r.front().data());
  }
}

void BM_DissipateSerial(benchmark::State& st) {
  auto r = batch(static_cast<int>(st.range(0)));
  const auto d = JumpOperatorSet::compile(NoiseModel::paper_gate()).dissipator();
  for (auto _ : st) {
    kernels::dissipate_batch_serial(d, r, 0.005);
    benchmark::DoNotOptimize(r.front().data());
  }
}

void BM_DissipateParallel(benchmark::State& st) {
  auto r = batch(static_cast<int>(st.range(0)));
  const auto d = JumpOperatorSet::compile(NoiseModel::paper_gate()).dissipator();
  for (auto _ : st) {
    kernels::dissipate_batch_parallel(d, r, 0.005);
    benchmark::DoNotOptimize(r.front().data());
  }
}

}  // namespace

BENCHMARK(BM_ConjugateSerial)->Arg(16)->Arg(100);
BENCHMARK(BM_ConjugateParallel)->Arg(16)->Arg(100);
BENCHMARK(BM_DissipateSerial)->Arg(16)->Arg(100);
BENCHMARK(BM_DissipateParallel)->Arg(16)->Arg(100);

BENCHMARK_MAIN();
