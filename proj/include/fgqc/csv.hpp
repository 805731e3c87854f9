// Copyright 2026 The fgqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fgqc {

// 15 significant digits, C locale.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  void add(std::vector<CsvCell> row) { rows.push_back(std::move(row)); }
};

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_cell(const CsvCell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const long long* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  return csv_field(std::get<std::string>(cell));
}

}  // namespace detail

inline std::string to_csv(const CsvTable& table) {
  std::string out;
  const auto line = [&out](const auto& cells, auto&& render) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += render(cells[i]);
    }
    out += '\n';
  };
  line(table.header, detail::csv_field);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw std::invalid_argument("csv: ragged row");
    line(row, detail::csv_cell);
  }
  return out;
}

/// Writes the table with LF line endings. I/O failures surface the
/// system message.
inline void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
  const std::string text = to_csv(table);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string() + ": " + std::strerror(errno));
}

}  // namespace fgqc
