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
#include <variant>
#include <vector>

#include "nzgate/common.hpp"

namespace nzgate::io {

/// A CSV cell: numbers are written with 17 significant digits.
using Cell = std::variant<double, long long, std::string>;

/// Column layout of one CSV product. Changing `columns` requires bumping
/// `version`; the registry test pins both.
struct Schema {
  std::string name;
  int version = 1;
  std::vector<std::string> columns;
};

/// All CSV products written by the CLI, by name.
const std::map<std::string, Schema>& schemas();
const Schema& schema(const std::string& name);

struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  explicit Table(const std::string& schema_name);
  void add(const std::vector<Cell>& row);
  std::size_t size() const { return rows.size(); }
};

std::string format_number(double x);

/// Header row plus rows, '\n' line endings. Written to a temporary file and
/// renamed into place.
void write_csv(const std::filesystem::path& path, const Table& table);

/// Reads a CSV written by write_csv (no quoting).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

void write_text_atomic(const std::filesystem::path& path, const std::string& text);

// --- SVG ---------------------------------------------------------------

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<Series> series;
};

struct HeatMap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;               // columns
  std::vector<double> y;               // rows
  std::vector<std::vector<double>> z;  // z[row][col]
  bool symmetric = false;              // diverging colors around zero
};

std::string render_svg(const LinePlot& plot);
std::string render_svg(const HeatMap& map);

// --- binary goldens ------------------------------------------------------
//
// Layout, all integers and doubles little-endian:
//   0   char[4]  magic "NZGD"
//   4   u32      format version (1)
//   8   u32      rows
//   12  u32      columns
//   16  f64      relative tolerance
//   24  f64      absolute tolerance
//   32  u32      label length L
//   36  char[L]  UTF-8 label (the golden case id)
//   36+L f64[rows*columns], row-major

struct Golden {
  std::string label;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  std::vector<double> data;

  double at(std::uint32_t r, std::uint32_t c) const { return data[r * cols + c]; }
};

std::vector<unsigned char> encode_golden(const Golden& g);
Golden decode_golden(const std::vector<unsigned char>& bytes);
void write_golden(const std::filesystem::path& path, const Golden& g);
Golden read_golden(const std::filesystem::path& path);

struct GoldenDiff {
  bool ok = true;
  std::size_t mismatches = 0;
  double max_rel = 0.0;
  double max_abs = 0.0;
  std::string summary;
};

/// Element-wise |a − e| ≤ abs_tol + rel_tol·|e| using the expected file's
/// tolerances; shape and label must match.
GoldenDiff compare_golden(const Golden& expected, const Golden& actual);

}  // namespace nzgate::io
