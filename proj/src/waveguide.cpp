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

#include "wgqed/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "wgqed/error.hpp"
#include "wgqed/units.hpp"

namespace wgqed {

namespace {

constexpr double speed_of_light_um_per_ns = units::speed_of_light * 1e-3;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InputError(std::string(name) + " must be positive and finite");
}

double spectral_power(std::span<const double> x, std::span<const double> y,
                      double frequency) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += y[i] * std::polar(1.0, -units::two_pi * frequency * x[i]);
  return std::norm(acc);
}

// Frequency (cycles per nm) of the strongest component above min_frequency.
double dominant_frequency(std::span<const double> x, std::span<const double> y,
                          double min_frequency, double max_frequency) {
  const std::size_t scan = std::max<std::size_t>(512, 8 * x.size());
  const double step = (max_frequency - min_frequency) / static_cast<double>(scan);
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t i = 0; i <= scan; ++i) {
    const double p = spectral_power(x, y, min_frequency + step * static_cast<double>(i));
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  const double lo = min_frequency + step * static_cast<double>(best > 0 ? best - 1 : 0);
  const double hi = min_frequency + step * static_cast<double>(std::min(best + 1, scan));
  const auto [f, neg_power] = boost::math::tools::brent_find_minima(
      [&](double f) { return -spectral_power(x, y, f); }, lo, hi, 52);
  (void)neg_power;
  return f;
}

std::vector<double> moving_median(std::span<const double> x,
                                  std::span<const double> y, double window) {
  std::vector<double> out(y.size());
  std::vector<double> scratch;
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (x[lo] < x[i] - 0.5 * window) ++lo;
    while (hi < x.size() && x[hi] <= x[i] + 0.5 * window) ++hi;
    scratch.assign(y.begin() + static_cast<std::ptrdiff_t>(lo),
                   y.begin() + static_cast<std::ptrdiff_t>(hi));
    const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(scratch.size() / 2);
    std::nth_element(scratch.begin(), mid, scratch.end());
    out[i] = *mid;
  }
  return out;
}

}  // namespace

void WaveguideGeometry::validate() const {
  require_positive(length_um, "length_um");
  require_positive(wavelength_nm, "wavelength_nm");
  if (!(group_index >= 1.0)) throw InputError("group_index must be >= 1");
  if (!(reflectivity >= 0.0 && reflectivity < 1.0))
    throw InputError("reflectivity must lie in [0, 1)");
  if (!(coupling_efficiency > 0.0 && coupling_efficiency <= 1.0))
    throw InputError("coupling_efficiency must lie in (0, 1]");
}

double group_index(double wavelength_nm, double length_um, double delta_lambda_nm) {
  require_positive(wavelength_nm, "wavelength");
  require_positive(length_um, "length");
  require_positive(delta_lambda_nm, "fringe period");
  const double length_nm = length_um * 1e3;
  return wavelength_nm * wavelength_nm / (2.0 * length_nm * delta_lambda_nm);
}

double mean_photon_number(double coupling_efficiency, double flux_per_ns,
                          double length_um, double group_index,
                          double reflectivity) {
  if (!(reflectivity < 1.0)) throw InputError("reflectivity must be < 1");
  if (!(flux_per_ns >= 0.0)) throw InputError("flux must be >= 0");
  require_positive(length_um, "length");
  require_positive(group_index, "group index");
  const double photon_lifetime_ns =
      length_um * group_index / (speed_of_light_um_per_ns * (1.0 - reflectivity));
  return coupling_efficiency * flux_per_ns * photon_lifetime_ns;
}

double power_to_flux(double power_uw, double wavelength_nm) {
  require_positive(power_uw, "power");
  require_positive(wavelength_nm, "wavelength");
  const double photon_energy = units::planck * units::speed_of_light / (wavelength_nm * 1e-9);
  return power_uw * 1e-6 / photon_energy * 1e-9;
}

double flux_to_power(double flux_per_ns, double wavelength_nm) {
  require_positive(flux_per_ns, "flux");
  require_positive(wavelength_nm, "wavelength");
  const double photon_energy = units::planck * units::speed_of_light / (wavelength_nm * 1e-9);
  return flux_per_ns * 1e9 * photon_energy * 1e6;
}

double reflectivity_from_visibility(double visibility) {
  if (!(visibility >= 0.0)) throw InputError("visibility must be >= 0");
  if (visibility > 1.0) throw InputError("visibility > 1");
  if (visibility == 0.0) return 0.0;
  return (1.0 - std::sqrt(1.0 - visibility * visibility)) / visibility;
}

FringeAnalysis fringe_analysis(std::span<const SpectrumPoint> white_light) {
  if (white_light.size() < 16) throw InputError("too few fringes: spectrum too short");
  std::vector<SpectrumPoint> pts(white_light.begin(), white_light.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.wavelength_nm < b.wavelength_nm;
  });
  std::vector<double> x, y;
  for (const auto& p : pts) {
    if (!std::isfinite(p.wavelength_nm) || !std::isfinite(p.intensity))
      throw InputError("white-light spectrum has non-finite values");
    x.push_back(p.wavelength_nm);
    y.push_back(p.intensity);
  }
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw InputError("duplicate wavelengths in spectrum");

  const double span = x.back() - x.front();
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  if (!(*hi_it - *lo_it > 1e-12 * std::max(1.0, std::abs(mean))))
    throw InputError("too few fringes: spectrum is constant");
  if (!(mean > 0.0)) throw InputError("white-light intensity must be positive on average");

  const double nyquist = 0.5 * static_cast<double>(x.size() - 1) / span;
  // Scan below the three-period minimum so that slow fringes are found (and
  // rejected) rather than aliased onto a faster component.
  const double min_frequency = 0.5 / span;
  if (!(nyquist > 3.0 / span)) throw InputError("too few fringes: undersampled");

  // Remove the straight-line trend; whatever is left must oscillate.
  const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - x_mean) * (y[i] - mean);
    sxx += (x[i] - x_mean) * (x[i] - x_mean);
  }
  const double slope = sxy / sxx;
  std::vector<double> centred(y.size());
  double modulation = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    centred[i] = y[i] - mean - slope * (x[i] - x_mean);
    modulation = std::max(modulation, std::abs(centred[i]));
  }
  if (!(modulation > 1e-9 * mean)) throw InputError("too few fringes: no modulation");
  double frequency = dominant_frequency(x, centred, min_frequency, nyquist);

  const std::vector<double> baseline = moving_median(x, y, 5.0 / frequency);
  std::vector<double> residual(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) residual[i] = y[i] - baseline[i];
  frequency = dominant_frequency(x, residual, min_frequency, nyquist);

  FringeAnalysis out;
  out.period_nm = 1.0 / frequency;
  out.n_periods = span * frequency;
  if (out.n_periods < 3.0) throw InputError("too few fringes");

  double visibility_sum = 0.0;
  int windows = 0;
  std::size_t i = 0;
  for (double start = x.front(); start + out.period_nm <= x.back(); start += out.period_nm) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    while (i < x.size() && x[i] < start) ++i;
    std::size_t j = i;
    for (; j < x.size() && x[j] < start + out.period_nm; ++j) {
      if (!(baseline[j] > 0.0)) throw InputError("baseline must be positive");
      const double q = y[j] / baseline[j];
      hi = std::max(hi, q);
      lo = std::min(lo, q);
    }
    if (j - i >= 4) {
      visibility_sum += (hi - lo) / (hi + lo);
      ++windows;
    }
  }
  if (windows == 0) throw InputError("too few fringes: no complete period sampled");
  out.visibility = visibility_sum / windows;
  out.reflectivity = reflectivity_from_visibility(out.visibility);
  return out;
}

}  // namespace wgqed
