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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wgqed/fitting.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed::io {

/// RFC 4180 table: one header line, comma separated, CRLF-tolerant input.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column (case-insensitive), or -1.
  int column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

std::string escape_field(std::string_view field);
/// Shortest round-trippable decimal form.
std::string format_number(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::span<const std::string> header);
  void row(std::span<const std::string> fields);
  void row(std::span<const double> values);

 private:
  std::ostream& out_;
  std::size_t width_;
};

/// Columns detuning_GHz, T_over_T0 and optionally sigma.
MeasuredSpectrum read_measured_spectrum(const std::filesystem::path& path);
/// Columns wavelength_nm, intensity.
std::vector<SpectrumPoint> read_white_light(const std::filesystem::path& path);

/// Writes columns of equal length.
void write_columns(const std::filesystem::path& path,
                   std::span<const std::string> header,
                   std::span<const std::vector<double>> columns);

}  // namespace wgqed::io
