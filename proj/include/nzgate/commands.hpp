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

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nzgate/io.hpp"
#include "nzgate/scenario.hpp"

namespace nzgate::cli {

struct Context {
  Scenario scenario;
  std::filesystem::path out = "out";
  bool svg = false;
  std::filesystem::path goldens = "goldens";
  bool regenerate = false;
  std::vector<std::string> only;  // golden ids to check; empty = all
};

struct Outcome {
  std::vector<std::filesystem::path> files;
  std::vector<std::pair<std::string, double>> summary;

  double get(const std::string& key) const;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing its CSV (and SVG) files into ctx.out.
/// Module errors propagate as nzgate::Error.
Outcome run_command(const std::string& name, const Context& ctx);

// Tables behind the subcommands; pure functions of the scenario.
io::Table spectrum_table(const Scenario& s);
io::Table zz_map_table(const Scenario& s);
io::Table overlap_scan_table(const Scenario& s);
io::Table swap_scan_table(const Scenario& s);
io::Table zz_ramsey_table(const Scenario& s);
io::Table leakage_table(const Scenario& s);
io::Table schedule_table(const Schedule& schedule, int stride = 1);

/// Gate used by leakage and gate-error: 2 × t_p strong pulses, no delays,
/// no weak pulse, exchange calibrated at this t_p.
struct BareGate {
  SystemParams sys;
  GateProtocolParams gp;
  ExchangeCalibration exchange;
  Schedule schedule;
};
BareGate bare_gate(const Scenario& s, double t_p);

/// Numeric columns of a table as a row-major golden.
io::Golden table_golden(const std::string& label, const io::Table& t,
                        const std::vector<std::string>& columns, double rel_tol, double abs_tol);

struct GoldenCase {
  std::string id;
  std::string description;
  std::function<io::Golden(const Scenario&)> compute;
};

const std::vector<GoldenCase>& golden_cases();

}  // namespace nzgate::cli
