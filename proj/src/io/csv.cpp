// Copyright 2026 The wgqed Authors
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

#include "wgqed/io/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "wgqed/error.hpp"

namespace wgqed::io {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& field, std::size_t line) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw InputError("csv line " + std::to_string(line) + ": '" + field +
                     "' is not a finite number");
  return v;
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

int require_column(const CsvTable& t, std::string_view name, const std::string& file) {
  const int c = t.column(name);
  if (c < 0) throw InputError(file + ": missing column '" + std::string(name) + "'");
  return c;
}

}  // namespace

int CsvTable::column(std::string_view name) const {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (lower(trim(header[i])) == key) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false, any = false;
  char c;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
  };
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw InputError("csv: unterminated quoted field");
  if (any && (!field.empty() || !record.empty())) end_record();
  if (records.empty()) throw InputError("csv: no header line");

  CsvTable t;
  t.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.header.size())
      throw InputError("csv line " + std::to_string(r + 1) + ": expected " +
                       std::to_string(t.header.size()) + " fields, got " +
                       std::to_string(records[r].size()));
    t.rows.push_back(std::move(records[r]));
  }
  return t;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  auto in = open(path);
  return read_csv(in);
}

std::string escape_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericalError("number formatting failed");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string> header)
    : out_(out), width_(header.size()) {
  row(header);
}

void CsvWriter::row(std::span<const std::string> fields) {
  if (fields.size() != width_) throw InputError("csv row width mismatch");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << escape_field(fields[i]);
  }
  out_ << "\r\n";
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  row(fields);
}

MeasuredSpectrum read_measured_spectrum(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path);
  const std::string file = path.string();
  const int cx = require_column(t, "detuning_GHz", file);
  const int cy = require_column(t, "T_over_T0", file);
  const int cs = t.column("sigma");
  MeasuredSpectrum m;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    m.detuning_ghz.push_back(parse_number(t.rows[r][cx], r + 2));
    m.t_over_t0.push_back(parse_number(t.rows[r][cy], r + 2));
    if (cs >= 0) m.sigma.push_back(parse_number(t.rows[r][cs], r + 2));
  }
  m.validate();
  return m;
}

std::vector<SpectrumPoint> read_white_light(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path);
  const std::string file = path.string();
  const int cx = require_column(t, "wavelength_nm", file);
  const int cy = require_column(t, "intensity", file);
  std::vector<SpectrumPoint> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    out.push_back({parse_number(t.rows[r][cx], r + 2), parse_number(t.rows[r][cy], r + 2)});
  return out;
}

void write_columns(const std::filesystem::path& path,
                   std::span<const std::string> header,
                   std::span<const std::vector<double>> columns) {
  if (header.size() != columns.size()) throw InputError("header/column count mismatch");
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) throw InputError("columns differ in length");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  CsvWriter w(out, header);
  std::vector<double> row(columns.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) row[c] = columns[c][r];
    w.row(row);
  }
}

}  // namespace wgqed::io
