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

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/operators.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/scattering.hpp"

namespace wgqed {

/// A measured transmission spectrum. Detunings are laser frequencies in GHz
/// (delta / 2 pi); sigma is optional and, when empty, is estimated from the
/// off-resonant baseline.
struct MeasuredSpectrum {
  std::vector<double> detuning_ghz;
  std::vector<double> t_over_t0;
  std::vector<double> sigma;

  void validate() const;
  std::size_t size() const { return detuning_ghz.size(); }
};

enum class FitParameter { beta, sigma_sd, gamma_d, z_re, z_im, center };
inline constexpr std::size_t fit_parameter_count = 6;
inline constexpr std::array<FitParameter, fit_parameter_count> all_fit_parameters{
    FitParameter::beta, FitParameter::z_re,    FitParameter::z_im,
    FitParameter::sigma_sd, FitParameter::gamma_d, FitParameter::center};

std::string_view parameter_name(FitParameter p);
/// Inverse of parameter_name; throws InputError on unknown names.
FitParameter parameter_from_name(std::string_view name);

/// One quantum dot in measurement units: sigma_sd and center in GHz, gamma_d
/// in 1/ns, z the Fano coefficient of the waveguide at the dot.
struct DotModel {
  double beta = 0.1;
  double sigma_sd_ghz = 0.0;
  double gamma_d = 0.0;
  Complex z{1.0, 0.0};
  double center_ghz = 0.0;

  double get(FitParameter p) const;
  void set(FitParameter p, double value);
  EmitterParams emitter(double gamma_tot) const;
};

/// Settings shared by every forward-model evaluation.
struct ModelConfig {
  double gamma_tot = 1.0;  ///< total decay rate, 1/ns
  double flux = 0.01;      ///< drive flux, photons/ns
  FanoPrefactor prefactor = FanoPrefactor::as_printed;
  int n_sd_samples = 16;
  std::uint64_t sd_seed = 7;

  void validate() const;
};

struct ParameterSpec {
  bool free = false;
  double lower = 0.0;
  double upper = 1.0;
  double step = 0.01;  ///< initial proposal standard deviation
};

struct FitConfig {
  DotModel initial;
  std::array<ParameterSpec, fit_parameter_count> parameters = default_specs();
  ModelConfig model;
  int chain_length = 20000;  ///< total sweeps, burn-in included
  int burn_in = 5000;
  std::uint64_t seed = 1;

  ParameterSpec& spec(FitParameter p) { return parameters[static_cast<std::size_t>(p)]; }
  const ParameterSpec& spec(FitParameter p) const {
    return parameters[static_cast<std::size_t>(p)];
  }
  std::vector<FitParameter> free_parameters() const;
  bool in_bounds(const DotModel& m) const;
  void validate() const;

  /// beta, real z, sigma_sd and center free; gamma_d and imaginary z fixed.
  static std::array<ParameterSpec, fit_parameter_count> default_specs();
};

/// Model T/T0 for one dot on a GHz detuning grid.
std::vector<double> model_transmission(const DotModel& dot, const ModelConfig& model,
                                       std::span<const double> detuning_ghz,
                                       Execution exec = Execution::serial);

/// Per-point noise from the off-resonant baseline: the median absolute
/// deviation (x 1.4826) of points further than three line widths from the
/// feature, or of first differences when too few such points exist.
std::vector<double> estimate_noise(const MeasuredSpectrum& data);

/// sum_k -(model_k - data_k)^2 / (2 sigma_k^2), or -inf when `dot` leaves
/// the bounds of `config`. data.sigma must be filled.
double log_likelihood(const DotModel& dot, const MeasuredSpectrum& data,
                      const FitConfig& config, Execution exec = Execution::serial);

// ---------------------------------------------------------------------------
// Generic sampler

struct McmcSettings {
  int chain_length = 20000;
  int burn_in = 5000;
  std::uint64_t seed = 1;
  int adapt_interval = 50;
  double target_low = 0.2;
  double target_high = 0.4;
};

struct McmcChain {
  std::vector<std::vector<double>> samples;  ///< post-burn-in sweeps
  std::vector<double> log_target;            ///< per retained sample
  std::vector<double> map;                   ///< best state visited
  double map_log_target = 0.0;
  double acceptance_rate = 0.0;  ///< post-burn-in, over all proposals
  std::vector<double> steps;     ///< frozen proposal scales
};

/// Component-wise random-walk Metropolis-Hastings with Gaussian proposals.
/// Proposal scales adapt every adapt_interval sweeps during burn-in towards
/// the target acceptance band and are frozen afterwards. Proposals outside
/// [lower, upper] are rejected. Throws NumericalError when no move is
/// accepted after burn-in.
McmcChain metropolis_hastings(
    const std::function<double(std::span<const double>)>& log_target,
    std::vector<double> initial, std::vector<double> steps,
    std::span<const double> lower, std::span<const double> upper,
    const McmcSettings& settings);

// ---------------------------------------------------------------------------

struct ParameterSummary {
  FitParameter parameter;
  double mean = 0.0;
  double sd = 0.0;
  double p16 = 0.0;
  double p84 = 0.0;
  double map = 0.0;
};

struct FitResult {
  std::vector<FitParameter> free_parameters;  ///< column order of chain
  McmcChain chain;
  DotModel map_estimate;
  DotModel posterior_mean;
  std::vector<ParameterSummary> summary;
  std::vector<double> noise;  ///< sigma used per data point

  const ParameterSummary& operator[](FitParameter p) const;
};

FitResult mh_fit(const MeasuredSpectrum& data, const FitConfig& config,
                 Execution exec = Execution::serial);

/// Two-dot transmission from independently fitted single-dot parameters,
/// with both dots placed at dot2's center (zero mutual detuning) and the
/// waveguide Fano coefficient of dot2. Detuning grid in GHz; the returned
/// spectrum is in rad/ns like every SpectrumResult.
SpectrumResult predict_two_dot(const DotModel& dot1, const DotModel& dot2,
                               const ModelConfig& model,
                               std::span<const double> detuning_ghz,
                               DecayLayout layout = DecayLayout::independent,
                               Execution exec = Execution::parallel);

}  // namespace wgqed
