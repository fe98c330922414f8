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

#include "nzgate/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace nzgate::io {

namespace fs = std::filesystem;

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table = [] {
    std::map<std::string, Schema> m;
    auto add = [&](Schema s) { m.emplace(s.name, std::move(s)); };
    add({"spectrum", 1, {"swept_ghz", "label", "energy_ghz", "overlap"}});
    add({"zz_map", 1, {"g_12_ghz", "omega_c_ghz", "J_mhz", "zeta_khz", "zeta_pert_khz"}});
    add({"overlap_scan", 1,
         {"omega_c_ghz", "overlap_100_010", "overlap_101_110", "overlap_101_011",
          "overlap_closed_form", "gtilde_cz_mhz"}});
    add({"swap_scan", 1,
         {"omega_c_ghz", "variant", "resonance_ghz", "gtilde_fit_mhz", "gtilde_gap_mhz", "contrast",
          "rel_diff", "ok", "status"}});
    add({"zz_ramsey", 1, {"t_ns", "angle_rad", "angle_static_rad"}});
    add({"leakage", 1,
         {"t_p_ns", "V_ghz", "coupler_on_ghz", "exchange_residual", "p_010", "p_110_011",
          "leakage_total", "status"}});
    add({"gate_error", 1, {"t_p_ns", "gate_ns", "noise", "error", "error_vs_ideal"}});
    add({"calibration", 1, {"quantity", "value", "unit"}});
    add({"phase_sweep", 1, {"a_int_ghz", "phi_2q_rad"}});
    add({"xeb_curve", 1, {"sequence", "depth", "mean_xeb", "mean_purity", "mean_leakage"}});
    add({"xeb_summary", 1, {"quantity", "value", "lo", "hi"}});
    add({"schedule", 1, {"t_ns", "omega_q1", "omega_c", "omega_q2", "g_1c", "g_2c", "g_12"}});
    add({"goldens_report", 1, {"file", "label", "status", "mismatches", "max_rel", "max_abs"}});
    return m;
  }();
  return table;
}

const Schema& schema(const std::string& name) {
  const auto it = schemas().find(name);
  if (it == schemas().end()) throw Error(ErrorKind::InvalidArgument, "unknown CSV schema '" + name + "'");
  return it->second;
}

Table::Table(const std::string& schema_name) : schema(schema_name), columns(io::schema(schema_name).columns) {}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add(const std::vector<Cell>& row) {
  if (row.size() != columns.size()) {
    throw Error(ErrorKind::InvalidArgument, "row width " + std::to_string(row.size()) +
                                                " does not match schema '" + schema + "'");
  }
  std::vector<std::string> out;
  out.reserve(row.size());
  for (const Cell& c : row) {
    if (const double* d = std::get_if<double>(&c)) {
      out.push_back(format_number(*d));
    } else if (const long long* i = std::get_if<long long>(&c)) {
      out.push_back(std::to_string(*i));
    } else {
      const std::string& s = std::get<std::string>(c);
      if (s.find_first_of(",\n\"") != std::string::npos) {
        throw Error(ErrorKind::InvalidArgument, "CSV text cell contains a separator: " + s);
      }
      out.push_back(s);
    }
  }
  rows.push_back(std::move(out));
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Io, "cannot open " + tmp.string());
    f << text;
    if (!f) throw Error(ErrorKind::Io, "write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_csv(const fs::path& path, const Table& table) {
  std::string s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
  write_text_atomic(path, s);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(std::move(cells));
  }
  return out;
}

// --- SVG ---------------------------------------------------------------

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 150, kT = 40, kB = 55;

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Range {
  double lo = 0, hi = 1;
  void widen() {
    if (!(hi > lo)) {
      const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= d;
      hi += d;
    }
  }
};

std::string frame(const std::string& title, const std::string& xl, const std::string& yl,
                  Range xr, Range yr, bool log_y) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << esc(title)
    << "</text>\n";
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  o << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = kL + pw * i / 4.0, fy = kT + ph - ph * i / 4.0;
    const double vx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    double vy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    if (log_y) vy = std::pow(10.0, vy);
    o << "<text x=\"" << fx << "\" y=\"" << kT + ph + 16 << "\" text-anchor=\"middle\">" << num(vx)
      << "</text>\n";
    o << "<text x=\"" << kL - 6 << "\" y=\"" << fy + 4 << "\" text-anchor=\"end\">" << num(vy)
      << "</text>\n";
  }
  o << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">" << esc(xl)
    << "</text>\n";
  o << "<text transform=\"translate(16," << kT + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << esc(yl) << "</text>\n";
  return o.str();
}

}  // namespace

std::string render_svg(const LinePlot& plot) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  auto ty = [&](double y) { return plot.log_y ? std::log10(std::max(y, 1e-300)) : y; };
  Range xr{INFINITY, -INFINITY}, yr{INFINITY, -INFINITY};
  for (const Series& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0)) continue;
      xr.lo = std::min(xr.lo, s.x[i]);
      xr.hi = std::max(xr.hi, s.x[i]);
      yr.lo = std::min(yr.lo, ty(s.y[i]));
      yr.hi = std::max(yr.hi, ty(s.y[i]));
    }
  }
  if (!std::isfinite(xr.lo)) xr = {0, 1};
  if (!std::isfinite(yr.lo)) yr = {0, 1};
  xr.widen();
  yr.widen();
  std::ostringstream o;
  o << frame(plot.title, plot.x_label, plot.y_label, xr, yr, plot.log_y);
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const Series& s = plot.series[k];
    const char* col = colors[k % 6];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0)) continue;
      const double px = kL + pw * (s.x[i] - xr.lo) / (xr.hi - xr.lo);
      const double py = kT + ph - ph * (ty(s.y[i]) - yr.lo) / (yr.hi - yr.lo);
      o << num(px) << ',' << num(py) << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << kW - kR + 10 << "\" y=\"" << kT + 14 + 16 * k << "\" fill=\"" << col << "\">"
      << esc(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_svg(const HeatMap& map) {
  Range xr{map.x.empty() ? 0 : map.x.front(), map.x.empty() ? 1 : map.x.back()};
  Range yr{map.y.empty() ? 0 : map.y.front(), map.y.empty() ? 1 : map.y.back()};
  xr.widen();
  yr.widen();
  double zlo = INFINITY, zhi = -INFINITY;
  for (const auto& row : map.z) {
    for (double v : row) {
      if (!std::isfinite(v)) continue;
      zlo = std::min(zlo, v);
      zhi = std::max(zhi, v);
    }
  }
  if (!std::isfinite(zlo)) zlo = zhi = 0.0;
  if (map.symmetric) {
    const double m = std::max(std::abs(zlo), std::abs(zhi));
    zlo = -m;
    zhi = m;
  }
  if (!(zhi > zlo)) zhi = zlo + 1.0;
  auto color = [&](double v) {
    double u = std::clamp((v - zlo) / (zhi - zlo), 0.0, 1.0);
    int r, g, b;
    if (map.symmetric) {  // blue → white → red
      if (u < 0.5) {
        r = g = static_cast<int>(255 * 2 * u);
        b = 255;
      } else {
        r = 255;
        g = b = static_cast<int>(255 * 2 * (1 - u));
      }
    } else {  // dark → yellow
      r = static_cast<int>(255 * u);
      g = static_cast<int>(200 * u + 30 * (1 - u));
      b = static_cast<int>(90 * (1 - u));
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };
  std::ostringstream o;
  o << frame(map.title, map.x_label, map.y_label, xr, yr, false);
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  const std::size_t nx = map.x.size(), ny = map.y.size();
  for (std::size_t r = 0; r < ny && r < map.z.size(); ++r) {
    for (std::size_t c = 0; c < nx && c < map.z[r].size(); ++c) {
      const double x0 = kL + pw * c / nx, y0 = kT + ph - ph * (r + 1) / ny;
      o << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(pw / nx + 0.5)
        << "\" height=\"" << num(ph / ny + 0.5) << "\" fill=\"" << color(map.z[r][c]) << "\"/>\n";
    }
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = zhi - (zhi - zlo) * i / 4.0;
    const double y = kT + ph * i / 4.0;
    o << "<rect x=\"" << kW - kR + 10 << "\" y=\"" << y << "\" width=\"14\" height=\"14\" fill=\""
      << color(v) << "\"/>\n";
    o << "<text x=\"" << kW - kR + 30 << "\" y=\"" << y + 11 << "\">" << num(v) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// --- binary goldens ------------------------------------------------------

namespace {

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& b, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, sizeof v);
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

struct Reader {
  const std::vector<unsigned char>& b;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > b.size()) throw Error(ErrorKind::Io, "golden file truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[pos + i]) << (8 * i);
    pos += 8;
    double x;
    std::memcpy(&x, &v, sizeof x);
    return x;
  }
};

}  // namespace

std::vector<unsigned char> encode_golden(const Golden& g) {
  if (g.data.size() != static_cast<std::size_t>(g.rows) * g.cols) {
    throw Error(ErrorKind::InvalidArgument, "golden '" + g.label + "': data size does not match shape");
  }
  std::vector<unsigned char> b{'N', 'Z', 'G', 'D'};
  put_u32(b, 1);
  put_u32(b, g.rows);
  put_u32(b, g.cols);
  put_f64(b, g.rel_tol);
  put_f64(b, g.abs_tol);
  put_u32(b, static_cast<std::uint32_t>(g.label.size()));
  b.insert(b.end(), g.label.begin(), g.label.end());
  for (double x : g.data) put_f64(b, x);
  return b;
}

Golden decode_golden(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 36 || !std::equal(bytes.begin(), bytes.begin() + 4, "NZGD")) {
    throw Error(ErrorKind::Io, "not an NZGD golden file");
  }
  Reader r{bytes, 4};
  if (const std::uint32_t v = r.u32(); v != 1) {
    throw Error(ErrorKind::Io, "unsupported golden format version " + std::to_string(v));
  }
  Golden g;
  g.rows = r.u32();
  g.cols = r.u32();
  g.rel_tol = r.f64();
  g.abs_tol = r.f64();
  const std::uint32_t L = r.u32();
  r.need(L);
  g.label.assign(bytes.begin() + r.pos, bytes.begin() + r.pos + L);
  r.pos += L;
  const std::size_t n = static_cast<std::size_t>(g.rows) * g.cols;
  if (bytes.size() - r.pos != 8 * n) throw Error(ErrorKind::Io, "golden payload size mismatch");
  g.data.resize(n);
  for (double& x : g.data) x = r.f64();
  return g;
}

void write_golden(const fs::path& path, const Golden& g) {
  const std::vector<unsigned char> b = encode_golden(g);
  write_text_atomic(path, std::string(b.begin(), b.end()));
}

Golden read_golden(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<unsigned char> b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_golden(b);
}

GoldenDiff compare_golden(const Golden& e, const Golden& a) {
  GoldenDiff d;
  if (e.label != a.label || e.rows != a.rows || e.cols != a.cols) {
    d.ok = false;
    d.mismatches = e.data.size();
    d.summary = "shape/label differ: expected " + e.label + " " + std::to_string(e.rows) + "x" +
                std::to_string(e.cols) + ", got " + a.label + " " + std::to_string(a.rows) + "x" +
                std::to_string(a.cols);
    return d;
  }
  std::size_t first = e.data.size();
  for (std::size_t i = 0; i < e.data.size(); ++i) {
    const double x = a.data[i], y = e.data[i];
    if (std::isnan(x) && std::isnan(y)) continue;
    const double diff = std::abs(x - y);
    const double rel = y != 0.0 ? diff / std::abs(y) : (diff == 0.0 ? 0.0 : INFINITY);
    d.max_abs = std::max(d.max_abs, diff);
    d.max_rel = std::max(d.max_rel, rel);
    if (!(diff <= e.abs_tol + e.rel_tol * std::abs(y))) {
      ++d.mismatches;
      if (first == e.data.size()) first = i;
    }
  }
  d.ok = d.mismatches == 0;
  if (!d.ok) {
    d.summary = std::to_string(d.mismatches) + " of " + std::to_string(e.data.size()) +
                " values out of tolerance; first at row " + std::to_string(first / e.cols) + " col " +
                std::to_string(first % e.cols) + ": expected " + format_number(e.data[first]) +
                ", got " + format_number(a.data[first]);
  }
  return d;
}

}  // namespace nzgate::io
