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

#include "wgqed/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "wgqed/error.hpp"
#include "wgqed/units.hpp"

namespace wgqed {

namespace {

constexpr double mad_to_sigma = 1.4826;

double median(std::vector<double> v) {
  if (v.empty()) throw InputError("median of empty set");
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

double mad_sigma(const std::vector<double>& v) {
  const double m = median(v);
  std::vector<double> dev(v.size());
  std::transform(v.begin(), v.end(), dev.begin(), [m](double x) { return std::abs(x - m); });
  return mad_to_sigma * median(std::move(dev));
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> to_rad_per_ns(std::span<const double> ghz) {
  std::vector<double> out(ghz.size());
  std::transform(ghz.begin(), ghz.end(), out.begin(),
                 [](double v) { return units::ghz_to_rad_per_ns(v); });
  return out;
}

}  // namespace

void MeasuredSpectrum::validate() const {
  if (detuning_ghz.size() != t_over_t0.size())
    throw InputError("detuning and transmission columns differ in length");
  if (detuning_ghz.size() < 3) throw InputError("spectrum needs at least 3 points");
  if (!sigma.empty() && sigma.size() != detuning_ghz.size())
    throw InputError("sigma column length mismatch");
  const bool ascending = detuning_ghz[1] > detuning_ghz[0];
  for (std::size_t k = 1; k < detuning_ghz.size(); ++k) {
    const bool up = detuning_ghz[k] > detuning_ghz[k - 1];
    const bool down = detuning_ghz[k] < detuning_ghz[k - 1];
    if (!(ascending ? up : down))
      throw InputError("detuning must be strictly monotone");
  }
  for (double t : t_over_t0)
    if (!(t > 0.0) || !std::isfinite(t))
      throw InputError("normalised transmission must be positive and finite");
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("sigma must be positive");
}

std::string_view parameter_name(FitParameter p) {
  switch (p) {
    case FitParameter::beta: return "beta";
    case FitParameter::sigma_sd: return "sigma_sd_ghz";
    case FitParameter::gamma_d: return "gamma_d";
    case FitParameter::z_re: return "z_re";
    case FitParameter::z_im: return "z_im";
    case FitParameter::center: return "center_ghz";
  }
  return "?";
}

FitParameter parameter_from_name(std::string_view name) {
  for (FitParameter p : all_fit_parameters)
    if (parameter_name(p) == name) return p;
  throw InputError("unknown fit parameter '" + std::string(name) + "'");
}

double DotModel::get(FitParameter p) const {
  switch (p) {
    case FitParameter::beta: return beta;
    case FitParameter::sigma_sd: return sigma_sd_ghz;
    case FitParameter::gamma_d: return gamma_d;
    case FitParameter::z_re: return z.real();
    case FitParameter::z_im: return z.imag();
    case FitParameter::center: return center_ghz;
  }
  return 0.0;
}

void DotModel::set(FitParameter p, double value) {
  switch (p) {
    case FitParameter::beta: beta = value; break;
    case FitParameter::sigma_sd: sigma_sd_ghz = value; break;
    case FitParameter::gamma_d: gamma_d = value; break;
    case FitParameter::z_re: z.real(value); break;
    case FitParameter::z_im: z.imag(value); break;
    case FitParameter::center: center_ghz = value; break;
  }
}

EmitterParams DotModel::emitter(double gamma_tot) const {
  EmitterParams e;
  e.delta0 = units::ghz_to_rad_per_ns(center_ghz);
  e.gamma_tot = gamma_tot;
  e.gamma_d = gamma_d;
  e.beta = beta;
  e.sigma_sd = units::ghz_to_rad_per_ns(sigma_sd_ghz);
  return e;
}

void ModelConfig::validate() const {
  if (!(gamma_tot > 0.0)) throw InputError("gamma_tot must be positive");
  if (!(flux > 0.0)) throw InputError("flux must be positive");
  if (n_sd_samples < 1) throw InputError("n_sd_samples must be >= 1");
}

std::array<ParameterSpec, fit_parameter_count> FitConfig::default_specs() {
  std::array<ParameterSpec, fit_parameter_count> s{};
  s[static_cast<std::size_t>(FitParameter::beta)] = {true, 0.0, 1.0, 0.01};
  s[static_cast<std::size_t>(FitParameter::sigma_sd)] = {true, 0.0, 2.0, 0.02};
  s[static_cast<std::size_t>(FitParameter::gamma_d)] = {false, 0.0, 10.0, 0.05};
  s[static_cast<std::size_t>(FitParameter::z_re)] = {true, -5.0, 5.0, 0.05};
  s[static_cast<std::size_t>(FitParameter::z_im)] = {false, -5.0, 5.0, 0.05};
  s[static_cast<std::size_t>(FitParameter::center)] = {true, -50.0, 50.0, 0.01};
  return s;
}

std::vector<FitParameter> FitConfig::free_parameters() const {
  std::vector<FitParameter> out;
  for (FitParameter p : all_fit_parameters)
    if (spec(p).free) out.push_back(p);
  return out;
}

bool FitConfig::in_bounds(const DotModel& m) const {
  for (FitParameter p : all_fit_parameters) {
    const auto& s = spec(p);
    if (!s.free) continue;
    const double v = m.get(p);
    if (!(v >= s.lower && v <= s.upper)) return false;
  }
  return m.beta >= 0.0 && m.beta <= 1.0 && m.sigma_sd_ghz >= 0.0 &&
         m.gamma_d >= 0.0 && std::abs(m.z) > 0.0;
}

void FitConfig::validate() const {
  model.validate();
  if (burn_in < 0) throw InputError("burn_in must be >= 0");
  if (!(chain_length > burn_in)) throw InputError("chain_length must exceed burn_in");
  for (FitParameter p : all_fit_parameters) {
    const auto& s = spec(p);
    if (!s.free) continue;
    const std::string name(parameter_name(p));
    if (!(s.lower < s.upper)) throw InputError("empty bounds for " + name);
    if (!(s.step > 0.0)) throw InputError("proposal step for " + name + " must be positive");
  }
  const auto& b = spec(FitParameter::beta);
  if (b.free && (b.lower < 0.0 || b.upper > 1.0))
    throw InputError("beta bounds must lie within [0, 1]");
  for (FitParameter p : {FitParameter::sigma_sd, FitParameter::gamma_d})
    if (spec(p).free && spec(p).lower < 0.0)
      throw InputError(std::string(parameter_name(p)) + " lower bound must be >= 0");
  if (free_parameters().empty()) throw InputError("no free fit parameters");
  if (!in_bounds(initial)) throw InputError("initial parameters lie outside the bounds");
}

std::vector<double> model_transmission(const DotModel& dot, const ModelConfig& model,
                                       std::span<const double> detuning_ghz,
                                       Execution exec) {
  model.validate();
  ScatteringSystem system;
  system.emitters = {dot.emitter(model.gamma_tot)};
  system.fano = WaveguideFano::from_z(dot.z);
  system.flux = model.flux;
  system.prefactor = model.prefactor;
  const auto grid = to_rad_per_ns(detuning_ghz);
  return transmission_spectrum(system, grid, model.n_sd_samples, model.sd_seed, exec)
      .intensity;
}

std::vector<double> estimate_noise(const MeasuredSpectrum& data) {
  data.validate();
  const auto& x = data.detuning_ghz;
  const auto& y = data.t_over_t0;
  const std::size_t n = y.size();

  // Locate the feature (dip or peak) relative to the median level.
  const double level = median(y);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(y[k] - level) > std::abs(y[peak] - level)) peak = k;
  const double half = 0.5 * std::abs(y[peak] - level);
  std::size_t left = peak, right = peak;
  while (left > 0 && std::abs(y[left] - level) > half) --left;
  while (right + 1 < n && std::abs(y[right] - level) > half) ++right;
  const double width = std::max(std::abs(x[right] - x[left]),
                                std::abs(x[std::min(peak + 1, n - 1)] - x[peak]));

  std::vector<double> baseline;
  for (std::size_t k = 0; k < n; ++k)
    if (std::abs(x[k] - x[peak]) > 3.0 * width) baseline.push_back(y[k]);

  double sigma = 0.0;
  if (baseline.size() >= 5) sigma = mad_sigma(baseline);
  if (!(sigma > 0.0)) {
    std::vector<double> diff(n - 1);
    for (std::size_t k = 1; k < n; ++k) diff[k - 1] = y[k] - y[k - 1];
    sigma = mad_sigma(diff) / std::sqrt(2.0);
  }
  if (!(sigma > 0.0))
    throw InputError("noise level cannot be estimated from noiseless data; supply sigma");
  return std::vector<double>(n, sigma);
}

double log_likelihood(const DotModel& dot, const MeasuredSpectrum& data,
                      const FitConfig& config, Execution exec) {
  if (data.sigma.size() != data.size())
    throw InputError("log_likelihood requires per-point sigma");
  if (!config.in_bounds(dot)) return -std::numeric_limits<double>::infinity();
  const auto model = model_transmission(dot, config.model, data.detuning_ghz, exec);
  double sum = 0.0;
  for (std::size_t k = 0; k < model.size(); ++k) {
    const double r = (model[k] - data.t_over_t0[k]) / data.sigma[k];
    sum -= 0.5 * r * r;
  }
  return sum;
}

McmcChain metropolis_hastings(
    const std::function<double(std::span<const double>)>& log_target,
    std::vector<double> initial, std::vector<double> steps,
    std::span<const double> lower, std::span<const double> upper,
    const McmcSettings& settings) {
  const std::size_t dim = initial.size();
  if (dim == 0) throw InputError("sampler needs at least one dimension");
  if (steps.size() != dim || lower.size() != dim || upper.size() != dim)
    throw InputError("sampler dimension mismatch");
  if (settings.burn_in < 0 || !(settings.chain_length > settings.burn_in))
    throw InputError("chain_length must exceed burn_in >= 0");
  if (settings.adapt_interval < 1) throw InputError("adapt_interval must be >= 1");
  for (std::size_t j = 0; j < dim; ++j)
    if (!(initial[j] >= lower[j] && initial[j] <= upper[j]))
      throw InputError("initial state outside bounds");

  std::mt19937_64 rng(settings.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<double> x = std::move(initial);
  double current = log_target(x);
  if (!std::isfinite(current))
    throw InputError("log target is not finite at the initial state");

  McmcChain out;
  out.map = x;
  out.map_log_target = current;
  const auto retained = static_cast<std::size_t>(settings.chain_length - settings.burn_in);
  out.samples.reserve(retained);
  out.log_target.reserve(retained);

  std::vector<int> window_accepts(dim, 0);
  long long accepted_after = 0;
  long long proposed_after = 0;

  for (int sweep = 0; sweep < settings.chain_length; ++sweep) {
    const bool burning = sweep < settings.burn_in;
    for (std::size_t j = 0; j < dim; ++j) {
      const double old = x[j];
      const double candidate = old + steps[j] * normal(rng);
      const double u = uniform(rng);
      bool accept = false;
      double proposed = -std::numeric_limits<double>::infinity();
      if (candidate >= lower[j] && candidate <= upper[j]) {
        x[j] = candidate;
        proposed = log_target(x);
        accept = std::isfinite(proposed) && std::log(u) < proposed - current;
      }
      if (accept) {
        current = proposed;
        if (current > out.map_log_target) {
          out.map_log_target = current;
          out.map = x;
        }
      } else {
        x[j] = old;
      }
      if (burning) {
        window_accepts[j] += accept ? 1 : 0;
      } else {
        ++proposed_after;
        accepted_after += accept ? 1 : 0;
      }
    }

    if (burning && (sweep + 1) % settings.adapt_interval == 0) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double rate = static_cast<double>(window_accepts[j]) / settings.adapt_interval;
        if (rate < settings.target_low) steps[j] *= 0.7;
        else if (rate > settings.target_high) steps[j] *= 1.4;
        steps[j] = std::min(steps[j], upper[j] - lower[j]);
        window_accepts[j] = 0;
      }
    }
    if (!burning) {
      out.samples.push_back(x);
      out.log_target.push_back(current);
    }
  }

  if (accepted_after == 0)
    throw NumericalError("sampler accepted no moves after burn-in; chain is stuck");
  out.acceptance_rate = static_cast<double>(accepted_after) / static_cast<double>(proposed_after);
  out.steps = std::move(steps);
  return out;
}

const ParameterSummary& FitResult::operator[](FitParameter p) const {
  for (const auto& s : summary)
    if (s.parameter == p) return s;
  throw InputError("parameter '" + std::string(parameter_name(p)) + "' was not fitted");
}

FitResult mh_fit(const MeasuredSpectrum& data, const FitConfig& config,
                 Execution exec) {
  config.validate();
  data.validate();
  MeasuredSpectrum prepared = data;
  if (prepared.sigma.empty()) prepared.sigma = estimate_noise(data);

  FitResult result;
  result.free_parameters = config.free_parameters();
  result.noise = prepared.sigma;
  const auto& free = result.free_parameters;

  std::vector<double> x0, steps, lower, upper;
  for (FitParameter p : free) {
    const auto& s = config.spec(p);
    x0.push_back(config.initial.get(p));
    steps.push_back(s.step);
    lower.push_back(s.lower);
    upper.push_back(s.upper);
  }

  auto unpack = [&](std::span<const double> v) {
    DotModel m = config.initial;
    for (std::size_t j = 0; j < free.size(); ++j) m.set(free[j], v[j]);
    return m;
  };
  const auto target = [&](std::span<const double> v) {
    return log_likelihood(unpack(v), prepared, config, exec);
  };

  McmcSettings settings;
  settings.chain_length = config.chain_length;
  settings.burn_in = config.burn_in;
  settings.seed = config.seed;
  result.chain = metropolis_hastings(target, x0, steps, lower, upper, settings);

  result.map_estimate = unpack(result.chain.map);
  std::vector<double> means(free.size());
  std::vector<double> column(result.chain.samples.size());
  for (std::size_t j = 0; j < free.size(); ++j) {
    for (std::size_t s = 0; s < column.size(); ++s) column[s] = result.chain.samples[s][j];
    ParameterSummary summary;
    summary.parameter = free[j];
    summary.mean = pairwise_mean(std::span<const double>(column));
    double var = 0.0;
    for (double v : column) var += (v - summary.mean) * (v - summary.mean);
    summary.sd = column.size() > 1 ? std::sqrt(var / static_cast<double>(column.size() - 1)) : 0.0;
    summary.p16 = quantile(column, 0.16);
    summary.p84 = quantile(column, 0.84);
    summary.map = result.chain.map[j];
    means[j] = summary.mean;
    result.summary.push_back(summary);
  }
  result.posterior_mean = unpack(means);
  return result;
}

SpectrumResult predict_two_dot(const DotModel& dot1, const DotModel& dot2,
                               const ModelConfig& model,
                               std::span<const double> detuning_ghz,
                               DecayLayout layout, Execution exec) {
  model.validate();
  DotModel a = dot1;
  a.center_ghz = dot2.center_ghz;
  ScatteringSystem system;
  system.emitters = {a.emitter(model.gamma_tot), dot2.emitter(model.gamma_tot)};
  system.fano = WaveguideFano::from_z(dot2.z);
  system.flux = model.flux;
  system.prefactor = model.prefactor;
  system.decay = layout;
  const auto grid = to_rad_per_ns(detuning_ghz);
  return transmission_spectrum(system, grid, model.n_sd_samples, model.sd_seed, exec);
}

}  // namespace wgqed
