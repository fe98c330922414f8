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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nzgate/calibration.hpp"
#include "nzgate/xeb.hpp"

namespace nzgate {

/// One swept parameter: `steps` evenly spaced values from lo to hi.
struct SweepAxis {
  std::string path;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  std::vector<double> values() const;
  void validate() const;
};

/// Parameter paths a sweep may name.
const std::vector<std::string>& known_sweep_paths();

/// How the gate's idle coupler frequency is chosen.
enum class CouplerReference { XyNull, ZzNull, Fixed };

struct Scenario {
  std::string name = "paper-2q";
  SystemParams system = SystemParams::paper_2q();
  GateProtocolParams gate = GateProtocolParams::paper_defaults();
  NoiseModel gate_noise = NoiseModel::paper_gate();
  NoiseModel idle_noise = NoiseModel::paper_idle();
  std::map<std::string, SweepAxis> sweeps;
  std::uint64_t seed = 1234;
  std::string out = "out";

  CouplerReference coupler_reference = CouplerReference::XyNull;
  double coupler_off = 0.0;            // GHz, used with Fixed
  double reference_lo = 9.5;           // null search bracket, GHz
  double reference_hi = 12.5;
  double null_window_lo = 10.0;        // window `calibrate` reports the ZZ null in
  double null_window_hi = 10.5;
  double target_phase = 3.141592653589793;
  double a_max = 0.3;                  // phase sweep range, GHz
  int sweep_points = 21;
  double map_qubit_frequency = 5.0;    // resonant qubits for the zz-map grid
  bool swap_modulated = false;
  std::string swap_variant = "cz";

  std::vector<int> xeb_depths{1, 2, 4, 8, 16, 32, 64, 100};
  int xeb_circuits = 20;
  double xeb_cycle_ns = 40.0;
  int xeb_bootstrap = 200;
  long xeb_shots = 0;

  static Scenario paper_2q();
  /// Throws InvalidArgument on unknown keys, bad types or invalid values.
  static Scenario from_json_text(const std::string& text);
  static Scenario load(const std::filesystem::path& path);
  std::string to_json_text() const;

  void validate() const;
  /// The scenario's sweep for `path`, or the given default.
  SweepAxis axis(const std::string& path, double lo, double hi, int steps) const;
};

/// Coupler frequency where the exact XY coupling vanishes. Throws
/// NoNullInRange.
double xy_null(const SystemParams& sys, double lo, double hi);

/// Idle operating point of the gate: reference qubits with the coupler at the
/// scenario's reference frequency.
SystemParams gate_system(const Scenario& s);

}  // namespace nzgate
