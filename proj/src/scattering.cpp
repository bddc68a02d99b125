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

#include "wgqed/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "wgqed/error.hpp"

namespace wgqed {

namespace {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Mat4 dissipator4(const Mat2& x) {
  const Mat2 id = Mat2::Identity();
  const Mat2 xdx = x.adjoint() * x;
  return kron2(x.conjugate(), x) - 0.5 * kron2(id, xdx) -
         0.5 * kron2(xdx.transpose(), id);
}

struct EmitterMoments {
  Complex coherence;  // <s^->
  double population;  // <s^+ s^->
};

// Stationary state of one driven two-level emitter from its 4x4 Liouvillian.
EmitterMoments single_emitter_moments(double detuning, Complex rabi,
                                      double gamma, double gamma_d) {
  Mat2 lower = Mat2::Zero();
  lower(0, 1) = 1.0;
  const Mat2 raise = lower.adjoint();
  const Mat2 number = raise * lower;
  const Mat2 id = Mat2::Identity();
  const Complex i1(0.0, 1.0);

  const Mat2 H = -detuning * number + i1 * (rabi * raise - std::conj(rabi) * lower);
  Mat4 L = i1 * (kron2(id, H) - kron2(H.transpose(), id));
  L += gamma * dissipator4(lower);
  if (gamma_d > 0.0) L += 2.0 * gamma_d * dissipator4(number);

  L.row(0) << 1.0, 0.0, 0.0, 1.0;
  Vec4 rhs = Vec4::Zero();
  rhs(0) = 1.0;
  const Vec4 x = L.partialPivLu().solve(rhs);
  // vec(rho) = (rho_gg, rho_eg, rho_ge, rho_ee); <s^-> = rho_eg.
  return {x(1), x(3).real()};
}

std::vector<EmitterParams> shifted(std::span<const EmitterParams> emitters,
                                   std::span<const double> offsets) {
  std::vector<EmitterParams> out(emitters.begin(), emitters.end());
  if (!offsets.empty()) {
    if (offsets.size() != out.size())
      throw InputError("one spectral-diffusion offset per emitter required");
    for (std::size_t i = 0; i < out.size(); ++i) out[i].delta0 += offsets[i];
  }
  return out;
}

std::vector<Complex> emission_coefficients(const ScatteringSystem& system) {
  const Complex pref = system.fano.prefactor(system.prefactor);
  std::vector<Complex> c;
  c.reserve(system.emitters.size());
  for (const auto& e : system.emitters)
    c.push_back(pref * std::sqrt(e.beta * e.gamma_tot / 2.0) *
                std::polar(1.0, e.phase));
  return c;
}

void require_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw InputError(std::string(what) + " grid is empty");
  for (double v : grid)
    if (!std::isfinite(v))
      throw InputError(std::string(what) + " grid has non-finite entries");
}

}  // namespace

WaveguideFano WaveguideFano::from_z(Complex z) {
  if (!(std::abs(z) > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InputError("Fano coefficient z must be finite and non-zero");
  WaveguideFano f;
  f.z_ = z;
  return f;
}

WaveguideFano WaveguideFano::from_zeta(double zeta) {
  if (!std::isfinite(zeta)) throw InputError("zeta must be finite");
  return from_z(1.0 / Complex(1.0, zeta));
}

Complex WaveguideFano::prefactor(FanoPrefactor mode) const {
  switch (mode) {
    case FanoPrefactor::as_printed:
      return z_ / std::norm(z_);
    case FanoPrefactor::unit_modulus:
      return z_ / std::abs(z_);
  }
  return z_;
}

bool ScatteringSystem::validate() const {
  if (static_cast<int>(emitters.size()) > max_emitters)
    throw InputError("at most " + std::to_string(max_emitters) +
                     " emitters are supported");
  if (!(flux > 0.0) || !std::isfinite(flux))
    throw InputError("drive flux must be positive and finite");
  double beta_sum = 0.0;
  for (const auto& e : emitters) {
    e.validate();
    beta_sum += e.beta;
  }
  return beta_sum <= 1.0 + 1e-12;
}

double ScatteringSystem::amplitude() const { return std::sqrt(flux); }

OutputField output_field_parts(const ScatteringSystem& system) {
  system.validate();
  const int n = system.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  OutputField out{system.fano.z() * system.amplitude(), Operator::Zero(dim, dim)};
  const auto coeff = emission_coefficients(system);
  for (int k = 0; k < n; ++k)
    out.op += coeff[k] * ladder_operator(k, n, LadderKind::lower);
  return out;
}

std::vector<Complex> rabi_frequencies(const ScatteringSystem& system) {
  const Complex field = system.fano.z() * system.amplitude();
  std::vector<Complex> rabi;
  rabi.reserve(system.emitters.size());
  for (const auto& e : system.emitters)
    rabi.push_back(field * std::sqrt(e.beta * e.gamma_tot / 2.0));
  return rabi;
}

Liouvillian system_liouvillian(const ScatteringSystem& system,
                               double laser_detuning,
                               std::span<const double> offsets) {
  if (system.emitters.empty())
    return Liouvillian(Eigen::MatrixXcd::Zero(1, 1), 1);
  const auto emitters = shifted(system.emitters, offsets);
  const Operator H =
      build_hamiltonian(emitters, laser_detuning, rabi_frequencies(system));
  const auto jumps = decay_terms(emitters, system.decay);
  const auto dephasers = dephasing_terms(emitters);
  return build_liouvillian(H, jumps, dephasers);
}

namespace detail {

double intensity_full_space(const ScatteringSystem& system,
                            double laser_detuning,
                            std::span<const double> offsets) {
  const Liouvillian L = system_liouvillian(system, laser_detuning, offsets);
  const DensityMatrix rho = steady_state(L);
  const OutputField field = output_field_parts(system);
  const Operator a = Operator::Identity(L.hilbert_dim(), L.hilbert_dim()) +
                     field.op / field.scalar;
  return expectation(rho, a.adjoint() * a).real();
}

double intensity_factorized(const ScatteringSystem& system,
                            double laser_detuning,
                            std::span<const double> offsets) {
  if (system.decay != DecayLayout::independent)
    throw InputError("factorised kernel requires the independent layout");
  if (!offsets.empty() && offsets.size() != system.emitters.size())
    throw InputError("one spectral-diffusion offset per emitter required");
  const Complex scalar = system.fano.z() * system.amplitude();
  const auto coeff = emission_coefficients(system);
  const auto rabi = rabi_frequencies(system);

  Complex coherent(1.0, 0.0);
  double incoherent = 0.0;
  for (std::size_t i = 0; i < system.emitters.size(); ++i) {
    const auto& e = system.emitters[i];
    const double shift = offsets.empty() ? 0.0 : offsets[i];
    const auto m = single_emitter_moments(laser_detuning - e.delta0 - shift,
                                          rabi[i], e.gamma_tot, e.gamma_d);
    const Complex w = coeff[i] / scalar;
    coherent += w * m.coherence;
    incoherent += std::norm(w) * (m.population - std::norm(m.coherence));
  }
  return std::norm(coherent) + incoherent;
}

}  // namespace detail

namespace {

double intensity_kernel(const ScatteringSystem& system, double laser_detuning,
                        std::span<const double> offsets) {
  if (system.decay == DecayLayout::independent)
    return detail::intensity_factorized(system, laser_detuning, offsets);
  return detail::intensity_full_space(system, laser_detuning, offsets);
}

}  // namespace

double transmission_intensity(const ScatteringSystem& system,
                              double laser_detuning) {
  system.validate();
  return intensity_kernel(system, laser_detuning, {});
}

std::vector<std::vector<double>> spectral_diffusion_offsets(
    std::span<const EmitterParams> emitters, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("n_sd_samples must be >= 1");
  const std::size_t n = emitters.size();
  const bool wandering = std::any_of(emitters.begin(), emitters.end(),
                                     [](const auto& e) { return e.sigma_sd > 0.0; });
  if (!wandering) return {std::vector<double>(n, 0.0)};

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(n_samples),
                                        std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < rows.size(); s += 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = emitters[i].sigma_sd * normal(rng);
      rows[s][i] = x;
      if (s + 1 < rows.size()) rows[s + 1][i] = -x;
    }
  }
  return rows;
}

std::optional<double> half_dip_width(std::span<const double> detuning,
                                     std::span<const double> intensity) {
  if (detuning.size() != intensity.size() || detuning.size() < 3) return std::nullopt;
  const auto it = std::min_element(intensity.begin(), intensity.end());
  const std::size_t m = static_cast<std::size_t>(it - intensity.begin());
  const double dip = 1.0 - *it;
  if (!(dip > 0.0)) return std::nullopt;
  const double level = 1.0 - 0.5 * dip;

  auto crossing = [&](std::size_t inner, std::size_t outer) {
    const double t = (level - intensity[inner]) / (intensity[outer] - intensity[inner]);
    return detuning[inner] + t * (detuning[outer] - detuning[inner]);
  };
  std::optional<double> left, right;
  for (std::size_t k = m; k > 0; --k)
    if (intensity[k - 1] >= level) {
      left = crossing(k, k - 1);
      break;
    }
  for (std::size_t k = m; k + 1 < intensity.size(); ++k)
    if (intensity[k + 1] >= level) {
      right = crossing(k, k + 1);
      break;
    }
  if (!left || !right) return std::nullopt;
  return std::abs(*right - *left);
}

SpectrumResult transmission_spectrum(const ScatteringSystem& system,
                                     std::span<const double> detuning_grid,
                                     int n_sd_samples, std::uint64_t seed,
                                     Execution exec) {
  system.validate();
  require_grid(detuning_grid, "detuning");
  const auto offsets = spectral_diffusion_offsets(system.emitters, n_sd_samples, seed);
  const std::size_t n_samples = offsets.size();

  const auto values = parallel_map(
      detuning_grid.size() * n_samples, exec, [&](std::size_t task) {
        const std::size_t point = task / n_samples;
        const std::size_t sample = task % n_samples;
        return intensity_kernel(system, detuning_grid[point], offsets[sample]);
      });

  SpectrumResult out;
  out.detuning.assign(detuning_grid.begin(), detuning_grid.end());
  out.intensity.resize(detuning_grid.size());
  for (std::size_t p = 0; p < detuning_grid.size(); ++p)
    out.intensity[p] = pairwise_mean(
        std::span<const double>(values).subspan(p * n_samples, n_samples));
  out.dip = 1.0 - *std::min_element(out.intensity.begin(), out.intensity.end());
  out.fwhm = half_dip_width(out.detuning, out.intensity);
  out.n_sd_samples = n_sd_samples;
  out.seed = seed;
  return out;
}

namespace {

struct CorrelationSample {
  std::vector<double> numerator;
  double intensity = 0.0;
};

CorrelationSample intensity_correlation(const ScatteringSystem& system,
                                        double laser_detuning,
                                        std::span<const double> offsets,
                                        std::span<const double> tau_grid) {
  const Liouvillian L = system_liouvillian(system, laser_detuning, offsets);
  const DensityMatrix rho = steady_state(L);
  const OutputField field = output_field_parts(system);
  const Eigen::Index d = L.hilbert_dim();
  const Operator a = Operator::Identity(d, d) + field.op / field.scalar;
  const Operator ad = a.adjoint();
  const Operator n = ad * a;

  const CorrelatorSeries series = two_time_correlator(rho, L, ad, n, a, tau_grid);
  CorrelationSample out;
  out.numerator.reserve(series.values.size());
  for (const auto& v : series.values) out.numerator.push_back(v.real());
  out.intensity = expectation(rho, n).real();
  return out;
}

}  // namespace

G2Result g2_transmitted(const ScatteringSystem& system, double laser_detuning,
                        std::span<const double> tau_grid, int n_sd_samples,
                        std::uint64_t seed, G2Averaging averaging,
                        Execution exec) {
  system.validate();
  validate_tau_grid(tau_grid);
  const auto offsets = spectral_diffusion_offsets(system.emitters, n_sd_samples, seed);
  const auto samples = parallel_map(offsets.size(), exec, [&](std::size_t s) {
    return intensity_correlation(system, laser_detuning, offsets[s], tau_grid);
  });

  const std::size_t n_tau = tau_grid.size();
  const std::size_t n_samples = samples.size();
  std::vector<double> scratch(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) scratch[s] = samples[s].intensity;
  const double mean_intensity = pairwise_mean(std::span<const double>(scratch));
  if (!(mean_intensity > 0.0))
    throw NumericalError("transmitted intensity vanishes; g2 undefined");

  G2Result out;
  out.tau.assign(tau_grid.begin(), tau_grid.end());
  out.g2.resize(n_tau);
  out.mean_intensity = mean_intensity;
  for (std::size_t k = 0; k < n_tau; ++k) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      const auto& smp = samples[s];
      scratch[s] = averaging == G2Averaging::detector
                       ? smp.numerator[k]
                       : smp.numerator[k] / (smp.intensity * smp.intensity);
    }
    const double mean = pairwise_mean(std::span<const double>(scratch));
    out.g2[k] = averaging == G2Averaging::detector
                    ? mean / (mean_intensity * mean_intensity)
                    : mean;
  }
  out.g2_zero = out.g2.front();
  return out;
}

double resonant_detuning(const ScatteringSystem& system) {
  if (system.emitters.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& e : system.emitters) sum += e.delta0;
  return sum / static_cast<double>(system.emitters.size());
}

SaturationCurve saturation_curve(const ScatteringSystem& system,
                                 std::span<const double> flux_grid,
                                 std::optional<double> laser_detuning,
                                 int n_sd_samples, std::uint64_t seed,
                                 Execution exec) {
  system.validate();
  require_grid(flux_grid, "flux");
  for (std::size_t k = 0; k < flux_grid.size(); ++k) {
    if (!(flux_grid[k] > 0.0)) throw InputError("fluxes must be positive");
    if (k > 0 && !(flux_grid[k] > flux_grid[k - 1]))
      throw InputError("flux grid must be ascending");
  }
  const double detuning = laser_detuning.value_or(resonant_detuning(system));
  const auto offsets = spectral_diffusion_offsets(system.emitters, n_sd_samples, seed);
  const std::size_t n_samples = offsets.size();

  const auto values = parallel_map(
      flux_grid.size() * n_samples, exec, [&](std::size_t task) {
        ScatteringSystem driven = system;
        driven.flux = flux_grid[task / n_samples];
        return intensity_kernel(driven, detuning, offsets[task % n_samples]);
      });

  SaturationCurve out;
  out.flux.assign(flux_grid.begin(), flux_grid.end());
  out.laser_detuning = detuning;
  out.dip.resize(flux_grid.size());
  for (std::size_t k = 0; k < flux_grid.size(); ++k)
    out.dip[k] = 1.0 - pairwise_mean(std::span<const double>(values).subspan(
                           k * n_samples, n_samples));

  const double weak = out.dip.front();
  if (out.dip.size() < 2 || !(weak > 0.0)) return out;
  const double half = 0.5 * weak;
  for (std::size_t k = 1; k < out.dip.size(); ++k) {
    if (out.dip[k] <= half) {
      const double t = (out.dip[k - 1] - half) / (out.dip[k - 1] - out.dip[k]);
      const double lo = std::log(out.flux[k - 1]);
      const double hi = std::log(out.flux[k]);
      out.critical_flux = std::exp(lo + t * (hi - lo));
      break;
    }
  }
  return out;
}

}  // namespace wgqed
