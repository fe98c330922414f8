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
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "nzgate/commands.hpp"

using namespace nzgate;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "nzgate_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NZGATE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Scenario small_map() {
  Scenario s = Scenario::paper_2q();
  s.sweeps["system.g_12"] = SweepAxis{"system.g_12", 0.0, 0.02, 3};
  s.sweeps["system.omega_c"] = SweepAxis{"system.omega_c", 9.0, 11.0, 5};
  return s;
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("command registry") {
    const auto& n = cli::command_names();
    CHECK(n.size() == 10);
    cli::Context ctx;
    ctx.out = scratch("unknown");
    CHECK_THROWS_AS(cli::run_command("nope", ctx), Error);
  }

  TEST_CASE("zz-map with couplings zeroed is all zero") {
    Scenario s = small_map();
    s.system.g_1c = s.system.g_2c = 0.0;
    s.sweeps["system.g_12"] = SweepAxis{"system.g_12", 0.0, 0.0, 1};
    const io::Table t = cli::zz_map_table(s);
    CHECK(t.size() == 5);
    for (const auto& row : t.rows) {
      CHECK(std::stod(row[2]) == 0.0);
      CHECK(std::abs(std::stod(row[3])) < 1e-6);
      CHECK(std::stod(row[4]) == 0.0);
    }
  }

  TEST_CASE("a 1% change of g_12 breaks the zz-map golden") {
    const Scenario s = small_map();
    const io::Golden ref = cli::table_golden("zz_map", cli::zz_map_table(s),
                                             {"g_12_ghz", "omega_c_ghz", "J_mhz", "zeta_khz"}, 1e-9, 1e-9);
    Scenario p = s;
    p.system.g_12 *= 1.01;
    p.sweeps["system.g_12"] = SweepAxis{"system.g_12", 0.0, 0.02 * 1.01, 3};
    const io::Golden moved = cli::table_golden("zz_map", cli::zz_map_table(p),
                                               {"g_12_ghz", "omega_c_ghz", "J_mhz", "zeta_khz"}, 1e-9, 1e-9);
    CHECK(io::compare_golden(ref, cli::table_golden("zz_map", cli::zz_map_table(s),
                                                    {"g_12_ghz", "omega_c_ghz", "J_mhz", "zeta_khz"}, 1e-9, 1e-9))
              .ok);
    CHECK_FALSE(io::compare_golden(ref, moved).ok);
  }

  TEST_CASE("goldens regenerate and verify") {
    cli::Context ctx;
    ctx.out = scratch("goldens_out");
    ctx.goldens = scratch("goldens");
    ctx.only = {"dressed_energies", "flattop_pulse", "zeta_sweep"};
    ctx.regenerate = true;
    cli::run_command("verify-goldens", ctx);
    ctx.regenerate = false;
    const cli::Outcome ok = cli::run_command("verify-goldens", ctx);
    CHECK(ok.get("checked") == 3);
    CHECK(ok.get("failures") == 0);
    ctx.scenario.system.g_12 *= 1.01;
    CHECK_THROWS_AS(cli::run_command("verify-goldens", ctx), Error);
    const auto rows = io::read_csv(ctx.out / "goldens_report.csv");
    CHECK(rows.size() == 4);
  }

  TEST_CASE("subcommand writes its csv and svg") {
    cli::Context ctx;
    ctx.scenario = small_map();
    ctx.out = scratch("zzmap");
    ctx.svg = true;
    const cli::Outcome o = cli::run_command("zz-map", ctx);
    CHECK(fs::exists(ctx.out / "zz_map.csv"));
    CHECK(fs::exists(ctx.out / "zz_map_zeta.svg"));
    CHECK(o.files.size() == 3);
    const auto rows = io::read_csv(ctx.out / "zz_map.csv");
    CHECK(rows.size() == 16);
  }

  TEST_CASE("deterministic output") {
    cli::Context a;
    a.scenario = small_map();
    a.out = scratch("det_a");
    cli::Context b = a;
    b.out = scratch("det_b");
    cli::run_command("overlap-scan", a);
    cli::run_command("overlap-scan", b);
    std::ifstream fa(a.out / "overlap_scan.csv"), fb(b.out / "overlap_scan.csv");
    const std::string sa((std::istreambuf_iterator<char>(fa)), {}), sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
    CHECK(sa.find('\r') == std::string::npos);
  }

  TEST_CASE("exit codes") {
    const fs::path dir = scratch("exit");
    CHECK(run_cli("spectrum --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(run_cli("") == 2);
    CHECK(run_cli("spectrum --workers -3") == 2);
    CHECK(run_cli("spectrum --bogus") == 2);
    {
      std::ofstream f(dir / "bad.json");
      f << R"({"system": {"unknown": 1}})";
    }
    CHECK(run_cli("spectrum --scenario " + (dir / "bad.json").string()) == 2);
    {
      std::ofstream f(dir / "nonull.json");
      f << R"({"gate": {"reference_bracket": [11.5, 12.0]}})";
    }
    CHECK(run_cli("zz-ramsey --scenario " + (dir / "nonull.json").string() + " --out " + dir.string()) == 1);
    CHECK(fs::exists(dir / "error.json"));
  }
}
