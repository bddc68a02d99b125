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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wgqed/emission.hpp"
#include "wgqed/fitting.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/waveguide.hpp"

namespace wgqed::io {

/// Uniform grid (linear or logarithmic) or an explicit list of values.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log = false;
  std::vector<double> explicit_values;

  std::vector<double> values() const;
};

/// A named subset of the configured emitters.
struct Scenario {
  std::string name;
  std::vector<int> emitters;
};

enum class G2Mode { transmitted, pl };

/// Parsed run configuration. Boundary units: frequencies in GHz, rates in
/// 1/ns, times in ns. `emitters` is already converted to internal units.
struct RunConfig {
  std::vector<EmitterParams> emitters;
  WaveguideFano fano;
  FanoPrefactor prefactor = FanoPrefactor::as_printed;
  DecayLayout decay = DecayLayout::independent;
  WaveguideGeometry geometry;

  std::optional<double> flux;  ///< photons/ns
  double wavelength_nm = 917.0;

  std::optional<GridSpec> detuning_ghz;
  std::optional<GridSpec> tau_ns;
  std::optional<GridSpec> flux_per_ns;

  int n_sd_samples = 400;
  std::uint64_t seed = 1;

  G2Mode g2_mode = G2Mode::transmitted;
  G2Averaging g2_averaging = G2Averaging::detector;
  std::optional<double> laser_detuning_ghz;

  std::optional<FitConfig> fit;
  std::optional<PumpParams> pump;
  std::vector<Scenario> scenarios;

  /// Scenarios to run: the configured ones, or a single "all" scenario.
  std::vector<Scenario> effective_scenarios() const;
  /// Scattering system for one scenario; requires a drive flux.
  ScatteringSystem system(const Scenario& scenario) const;
  std::vector<EmitterParams> select(const Scenario& scenario) const;

  /// Each throws InputError naming the missing key.
  const GridSpec& require_detuning() const;
  const GridSpec& require_tau() const;
  const GridSpec& require_flux_grid() const;
  double require_flux() const;
};

/// Parses and schema-checks a JSON document. Unknown keys, wrong types and
/// out-of-range values raise InputError with the offending key path.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace wgqed::io
