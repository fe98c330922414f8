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

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nzgate {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kLevels = 3;
inline constexpr int kDim = kLevels * kLevels * kLevels;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorKind {
  InvalidArgument,
  AmbiguousLabel,
  NoResonance,
  DivergentDetuning,
  SlewViolation,
  StepTooCoarse,
  NegativeEigenvalue,
  NotCPhaseLike,
  NoExchangeFound,
  TargetOutOfRange,
  NoNullInRange,
  FitFailed,
  FitDegenerate,
  Mismatch,
  Io,
};

const char* to_string(ErrorKind kind);

/// Domain error carrying a machine-readable kind. The CLI maps these to exit
/// code 1 and a JSON error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nzgate
