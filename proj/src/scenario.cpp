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

#include "nzgate/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nzgate/optimize.hpp"

namespace nzgate {

using nlohmann::json;

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  return v;
}

const std::vector<std::string>& known_sweep_paths() {
  static const std::vector<std::string> p{
      "system.omega_q1", "system.omega_c", "system.omega_q2", "system.g_12", "gate.t_p", "time.ns"};
  return p;
}

void SweepAxis::validate() const {
  const auto& k = known_sweep_paths();
  if (std::find(k.begin(), k.end(), path) == k.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown sweep path '" + path + "'");
  }
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "sweep '" + path + "' needs steps >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || (steps > 1 && !(hi > lo))) {
    throw Error(ErrorKind::InvalidArgument, "sweep '" + path + "' has an empty range");
  }
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "scenario: " + what); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) bad("unknown key '" + where + "." + k + "'");
  }
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + " must be a number");
  return j.get<double>();
}

template <class T>
void read(const json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  const std::string w = where + "." + key;
  if constexpr (std::is_same_v<T, double>) {
    out = num(v, w);
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad(w + " must be true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad(w + " must be a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) bad(w + " must be an integer");
    out = v.get<T>();
  }
}

Element parse_qubit(const std::string& s, const std::string& where) {
  if (s == "q1") return Element::Q1;
  if (s == "q2") return Element::Q2;
  bad(where + " must be \"q1\" or \"q2\"");
}

const char* qubit_name(Element e) { return e == Element::Q1 ? "q1" : "q2"; }

ElementNoise parse_element_noise(const json& j, const std::string& where) {
  check_keys(j, where, {"T1", "T2E", "T_phi"});
  ElementNoise n;
  read(j, "T1", where, n.T1);
  if (j.contains("T2E") && j.contains("T_phi")) bad(where + ": give T2E or T_phi, not both");
  if (j.contains("T_phi")) {
    double tphi = kInf;
    read(j, "T_phi", where, tphi);
    return ElementNoise::from_t_phi(n.T1, tphi);
  }
  read(j, "T2E", where, n.T2E);
  return n;
}

json element_noise_json(const ElementNoise& n) {
  json j = json::object();
  if (std::isfinite(n.T1)) j["T1"] = n.T1;
  if (std::isfinite(n.T2E)) j["T2E"] = n.T2E;
  return j;
}

NoiseModel parse_noise(const json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "paper-gate") return NoiseModel::paper_gate();
    if (s == "paper-idle") return NoiseModel::paper_idle();
    if (s == "none") return NoiseModel::none();
    bad(where + ": unknown noise preset '" + s + "'");
  }
  check_keys(j, where, {"q1", "coupler", "q2"});
  NoiseModel m = NoiseModel::none();
  const char* names[] = {"q1", "coupler", "q2"};
  for (int e = 0; e < 3; ++e) {
    if (j.contains(names[e])) {
      m.element[e] = parse_element_noise(j.at(names[e]), where + "." + names[e]);
      m.enabled[e] = true;
    }
  }
  return m;
}

json noise_json(const NoiseModel& m) {
  json j = json::object();
  const char* names[] = {"q1", "coupler", "q2"};
  for (int e = 0; e < 3; ++e) {
    if (m.enabled[e]) j[names[e]] = element_noise_json(m.element[e]);
  }
  return j;
}

}  // namespace

Scenario Scenario::paper_2q() { return Scenario{}; }

Scenario Scenario::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  check_keys(j, "", {"name", "seed", "out", "system", "gate", "noise", "calibrate", "maps", "swap",
                     "xeb", "sweeps"});
  Scenario s;
  read(j, "name", "", s.name);
  read(j, "seed", "", s.seed);
  read(j, "out", "", s.out);
  if (j.contains("system")) {
    const json& y = j["system"];
    check_keys(y, "system", {"omega_q1", "omega_c", "omega_q2", "eta_q1", "eta_c", "eta_q2", "g_1c",
                             "g_2c", "g_12", "coupling"});
    SystemParams& p = s.system;
    read(y, "omega_q1", "system", p.omega_q1);
    read(y, "omega_c", "system", p.omega_c);
    read(y, "omega_q2", "system", p.omega_q2);
    read(y, "eta_q1", "system", p.eta_q1);
    read(y, "eta_c", "system", p.eta_c);
    read(y, "eta_q2", "system", p.eta_q2);
    read(y, "g_1c", "system", p.g_1c);
    read(y, "g_2c", "system", p.g_2c);
    read(y, "g_12", "system", p.g_12);
    std::string form = "full";
    read(y, "coupling", "system", form);
    if (form == "full") p.coupling_form = CouplingForm::Full;
    else if (form == "rwa") p.coupling_form = CouplingForm::Rwa;
    else bad("system.coupling must be \"full\" or \"rwa\"");
  }
  if (j.contains("gate")) {
    const json& g = j["gate"];
    check_keys(g, "gate", {"t_p", "t_d", "t_weak", "V", "a_int", "sigma", "coupler_on_freq",
                           "coupler_power", "sample_dt", "slew_limit", "strong_qubit", "weak_qubit",
                           "modulate_couplings", "coupler_reference", "reference_bracket",
                           "target_phase", "a_max", "sweep_points"});
    GateProtocolParams& gp = s.gate;
    read(g, "t_p", "gate", gp.t_p);
    // sigma and the weak pulse follow t_p unless given.
    gp.sigma = gp.t_p / 8.0;
    gp.t_weak = gp.t_p;
    read(g, "t_d", "gate", gp.t_d);
    read(g, "t_weak", "gate", gp.t_weak);
    read(g, "V", "gate", gp.V);
    read(g, "a_int", "gate", gp.a_int);
    read(g, "sigma", "gate", gp.sigma);
    read(g, "coupler_on_freq", "gate", gp.coupler_on_freq);
    read(g, "coupler_power", "gate", gp.coupler_power);
    read(g, "sample_dt", "gate", gp.sample_dt);
    read(g, "slew_limit", "gate", gp.slew_limit);
    read(g, "modulate_couplings", "gate", gp.modulate_couplings);
    std::string q;
    if (g.contains("strong_qubit")) {
      read(g, "strong_qubit", "gate", q);
      gp.strong_qubit = parse_qubit(q, "gate.strong_qubit");
    }
    if (g.contains("weak_qubit")) {
      read(g, "weak_qubit", "gate", q);
      gp.weak_qubit = parse_qubit(q, "gate.weak_qubit");
    }
    if (g.contains("coupler_reference")) {
      const json& r = g["coupler_reference"];
      if (r.is_number()) {
        s.coupler_reference = CouplerReference::Fixed;
        s.coupler_off = r.get<double>();
      } else if (r == "xy-null") {
        s.coupler_reference = CouplerReference::XyNull;
      } else if (r == "zz-null") {
        s.coupler_reference = CouplerReference::ZzNull;
      } else {
        bad("gate.coupler_reference must be \"xy-null\", \"zz-null\" or a frequency");
      }
    }
    if (g.contains("reference_bracket")) {
      const json& b = g["reference_bracket"];
      if (!b.is_array() || b.size() != 2) bad("gate.reference_bracket must be [lo, hi]");
      s.reference_lo = num(b[0], "gate.reference_bracket[0]");
      s.reference_hi = num(b[1], "gate.reference_bracket[1]");
    }
    read(g, "target_phase", "gate", s.target_phase);
    read(g, "a_max", "gate", s.a_max);
    read(g, "sweep_points", "gate", s.sweep_points);
  }
  if (j.contains("noise")) {
    const json& n = j["noise"];
    check_keys(n, "noise", {"gate", "idle"});
    if (n.contains("gate")) s.gate_noise = parse_noise(n["gate"], "noise.gate");
    if (n.contains("idle")) s.idle_noise = parse_noise(n["idle"], "noise.idle");
  }
  if (j.contains("calibrate")) {
    const json& c = j["calibrate"];
    check_keys(c, "calibrate", {"null_window"});
    const json& w = c["null_window"];
    if (!w.is_array() || w.size() != 2) bad("calibrate.null_window must be [lo, hi]");
    s.null_window_lo = num(w[0], "calibrate.null_window[0]");
    s.null_window_hi = num(w[1], "calibrate.null_window[1]");
  }
  if (j.contains("maps")) {
    check_keys(j["maps"], "maps", {"qubit_frequency"});
    read(j["maps"], "qubit_frequency", "maps", s.map_qubit_frequency);
  }
  if (j.contains("swap")) {
    check_keys(j["swap"], "swap", {"variant", "modulated"});
    read(j["swap"], "variant", "swap", s.swap_variant);
    read(j["swap"], "modulated", "swap", s.swap_modulated);
  }
  if (j.contains("xeb")) {
    const json& x = j["xeb"];
    check_keys(x, "xeb", {"depths", "circuits", "cycle_ns", "bootstrap", "shots"});
    if (x.contains("depths")) {
      if (!x["depths"].is_array()) bad("xeb.depths must be an array");
      s.xeb_depths.clear();
      for (const json& d : x["depths"]) {
        if (!d.is_number_integer()) bad("xeb.depths must hold integers");
        s.xeb_depths.push_back(d.get<int>());
      }
    }
    read(x, "circuits", "xeb", s.xeb_circuits);
    read(x, "cycle_ns", "xeb", s.xeb_cycle_ns);
    read(x, "bootstrap", "xeb", s.xeb_bootstrap);
    read(x, "shots", "xeb", s.xeb_shots);
  }
  if (j.contains("sweeps")) {
    if (!j["sweeps"].is_array()) bad("sweeps must be an array");
    for (const json& a : j["sweeps"]) {
      check_keys(a, "sweeps[]", {"path", "from", "to", "steps"});
      SweepAxis ax;
      if (!a.contains("path") || !a.contains("from") || !a.contains("to") || !a.contains("steps")) {
        bad("each sweep needs path, from, to and steps");
      }
      read(a, "path", "sweeps[]", ax.path);
      read(a, "from", "sweeps[]", ax.lo);
      read(a, "to", "sweeps[]", ax.hi);
      read(a, "steps", "sweeps[]", ax.steps);
      ax.validate();
      s.sweeps[ax.path] = ax;
    }
  }
  s.validate();
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Io, "cannot open scenario " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

std::string Scenario::to_json_text() const {
  json j;
  j["name"] = name;
  j["seed"] = seed;
  j["out"] = out;
  const SystemParams& p = system;
  j["system"] = {{"omega_q1", p.omega_q1}, {"omega_c", p.omega_c},   {"omega_q2", p.omega_q2},
                 {"eta_q1", p.eta_q1},     {"eta_c", p.eta_c},       {"eta_q2", p.eta_q2},
                 {"g_1c", p.g_1c},         {"g_2c", p.g_2c},         {"g_12", p.g_12},
                 {"coupling", p.coupling_form == CouplingForm::Full ? "full" : "rwa"}};
  const GateProtocolParams& g = gate;
  json gj = {{"t_p", g.t_p},
             {"t_d", g.t_d},
             {"t_weak", g.t_weak},
             {"V", g.V},
             {"a_int", g.a_int},
             {"sigma", g.sigma},
             {"coupler_on_freq", g.coupler_on_freq},
             {"coupler_power", g.coupler_power},
             {"sample_dt", g.sample_dt},
             {"slew_limit", g.slew_limit},
             {"strong_qubit", qubit_name(g.strong_qubit)},
             {"weak_qubit", qubit_name(g.weak_qubit)},
             {"modulate_couplings", g.modulate_couplings},
             {"reference_bracket", {reference_lo, reference_hi}},
             {"target_phase", target_phase},
             {"a_max", a_max},
             {"sweep_points", sweep_points}};
  switch (coupler_reference) {
    case CouplerReference::XyNull: gj["coupler_reference"] = "xy-null"; break;
    case CouplerReference::ZzNull: gj["coupler_reference"] = "zz-null"; break;
    case CouplerReference::Fixed: gj["coupler_reference"] = coupler_off; break;
  }
  j["gate"] = gj;
  j["noise"] = {{"gate", noise_json(gate_noise)}, {"idle", noise_json(idle_noise)}};
  j["calibrate"] = {{"null_window", {null_window_lo, null_window_hi}}};
  j["maps"] = {{"qubit_frequency", map_qubit_frequency}};
  j["swap"] = {{"variant", swap_variant}, {"modulated", swap_modulated}};
  j["xeb"] = {{"depths", xeb_depths},
              {"circuits", xeb_circuits},
              {"cycle_ns", xeb_cycle_ns},
              {"bootstrap", xeb_bootstrap},
              {"shots", xeb_shots}};
  json sw = json::array();
  for (const auto& [k, a] : sweeps) sw.push_back({{"path", a.path}, {"from", a.lo}, {"to", a.hi}, {"steps", a.steps}});
  j["sweeps"] = sw;
  return j.dump(2) + "\n";
}

void Scenario::validate() const {
  system.validate();
  gate.validate();
  gate_noise.validate();
  idle_noise.validate();
  for (const auto& [k, a] : sweeps) a.validate();
  if (!(reference_hi > reference_lo)) bad("gate.reference_bracket is empty");
  if (!(null_window_hi > null_window_lo)) bad("calibrate.null_window is empty");
  if (coupler_reference == CouplerReference::Fixed && !(coupler_off > 0.0)) {
    bad("gate.coupler_reference frequency must be positive");
  }
  if (!(a_max > 0.0) || sweep_points < 3) bad("phase sweep needs a_max > 0 and at least 3 points");
  if (swap_variant != "cz" && swap_variant != "iswap") bad("swap.variant must be \"cz\" or \"iswap\"");
  if (!(map_qubit_frequency > 0.0)) bad("maps.qubit_frequency must be positive");
  XebConfig x;
  x.depths = xeb_depths;
  x.circuits = xeb_circuits;
  x.shots = xeb_shots;
  x.validate();
  if (!(xeb_cycle_ns >= 0.0) || xeb_bootstrap < 0) bad("xeb.cycle_ns and xeb.bootstrap must be >= 0");
}

SweepAxis Scenario::axis(const std::string& path, double lo, double hi, int steps) const {
  const auto it = sweeps.find(path);
  if (it != sweeps.end()) return it->second;
  return SweepAxis{path, lo, hi, steps};
}

double xy_null(const SystemParams& sys, double lo, double hi) {
  auto J = [&](double wc) { return exact_xy_coupling(sys.with_frequencies(sys.omega_q1, wc, sys.omega_q2)); };
  const std::vector<double> roots = opt::all_roots(J, lo, hi, 61, 1e-9);
  if (roots.empty()) {
    throw Error(ErrorKind::NoNullInRange, "no XY null in [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "] GHz");
  }
  return roots.front();
}

SystemParams gate_system(const Scenario& s) {
  const SystemParams& p = s.system;
  double wc = s.coupler_off;
  switch (s.coupler_reference) {
    case CouplerReference::XyNull: wc = xy_null(p, s.reference_lo, s.reference_hi); break;
    case CouplerReference::ZzNull: wc = find_zz_null(p, s.reference_lo, s.reference_hi).omega_c; break;
    case CouplerReference::Fixed: break;
  }
  return p.with_frequencies(p.omega_q1, wc, p.omega_q2);
}

}  // namespace nzgate
