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

// nzgate command-line front end.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nzgate/commands.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

int report_error(int code, const std::string& command, const std::string& kind, const std::string& message,
                 const std::optional<std::filesystem::path>& out) {
  nlohmann::json j{{"status", "error"}, {"exit_code", code}, {"command", command}, {"kind", kind},
                   {"message", message}};
  std::cerr << j.dump() << "\n";
  if (out) {
    try {
      std::filesystem::create_directories(*out);
      nzgate::io::write_text_atomic(*out / "error.json", j.dump(2) + "\n");
    } catch (...) {
      // stderr already has the record
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nzgate: net-zero CPhase gate simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scenario_arg = "paper-2q";
  std::string out_arg;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  bool svg = false;
  app.add_option("--scenario", scenario_arg, "scenario JSON file, or the built-in 'paper-2q'");
  app.add_option("--out", out_arg, "output directory (default: scenario's out)");
  app.add_option("--seed", seed, "master seed (overrides the scenario)");
  app.add_option("--workers", workers, "worker threads; 0 = OpenMP default")->check(CLI::NonNegativeNumber);
  app.add_flag("--svg", svg, "also write SVG plots");

  std::string goldens = "goldens";
  bool regenerate = false;
  std::vector<std::string> only;
  const std::map<std::string, std::string> help{
      {"spectrum", "dressed energies and bare-state overlaps versus coupler frequency"},
      {"zz-map", "static ZZ over (g_12, coupler frequency)"},
      {"overlap-scan", "leakage-path overlaps versus coupler frequency"},
      {"swap-scan", "SWAP-oscillation coupling versus coupler frequency"},
      {"zz-ramsey", "Ramsey ZZ measurement at the idle point"},
      {"leakage", "bare-gate leakage versus pulse length"},
      {"gate-error", "noise error budget per element"},
      {"calibrate", "calibrate the CPhase gate and sweep its phase"},
      {"xeb", "reference and interleaved cross-entropy benchmarking"},
      {"verify-goldens", "recompute the golden cases and compare"}};
  for (const std::string& name : nzgate::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, help.count(name) ? help.at(name) : "");
    if (name == "verify-goldens") {
      sub->add_option("--goldens", goldens, "golden directory");
      sub->add_flag("--regenerate", regenerate, "rewrite the golden files instead of checking");
      sub->add_option("--only", only, "golden ids to check");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  nzgate::cli::Context ctx;
  try {
    ctx.scenario = scenario_arg == "paper-2q" ? nzgate::Scenario::paper_2q() : nzgate::Scenario::load(scenario_arg);
  } catch (const nzgate::Error& e) {
    return report_error(kUsageError, command, nzgate::to_string(e.kind()), e.what(), std::nullopt);
  }
  if (seed) ctx.scenario.seed = *seed;
  ctx.out = out_arg.empty() ? std::filesystem::path(ctx.scenario.out) : std::filesystem::path(out_arg);
  ctx.svg = svg;
  ctx.goldens = goldens;
  ctx.regenerate = regenerate;
  ctx.only = only;
  nzgate::kernels::set_default_workers(workers);

  try {
    const nzgate::cli::Outcome res = nzgate::cli::run_command(command, ctx);
    nlohmann::json j{{"status", "ok"}, {"command", command}};
    j["files"] = nlohmann::json::array();
    for (const auto& f : res.files) j["files"].push_back(f.string());
    j["summary"] = nlohmann::json::object();
    for (const auto& [k, v] : res.summary) j["summary"][k] = v;
    std::cout << j.dump(2) << "\n";
    return kOk;
  } catch (const nzgate::Error& e) {
    return report_error(kDomainError, command, nzgate::to_string(e.kind()), e.what(), ctx.out);
  } catch (const std::exception& e) {
    return report_error(kDomainError, command, "Internal", e.what(), ctx.out);
  }
}
