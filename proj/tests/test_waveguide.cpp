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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "wgqed/error.hpp"
#include "wgqed/units.hpp"
#include "wgqed/waveguide.hpp"

using namespace wgqed;

namespace {

// Two-mirror transmission with a linear fringe phase and a slow envelope.
std::vector<SpectrumPoint> airy(double reflectivity, double period_nm, double noise,
                                std::uint64_t seed, double lo = 900.0, double hi = 940.0,
                                int n = 2000) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<SpectrumPoint> out;
  for (int k = 0; k < n; ++k) {
    const double lambda = lo + (hi - lo) * k / (n - 1);
    const double r = reflectivity;
    const double t = (1 - r) * (1 - r) /
                     (1 + r * r - 2 * r * std::cos(units::two_pi * lambda / period_nm));
    const double envelope = 1.0 + 0.2 * (lambda - lo) / (hi - lo);
    out.push_back({lambda, envelope * t + noise * g(rng)});
  }
  return out;
}

}  // namespace

TEST_CASE("group index") {
  CHECK(group_index(917.0, 15.0, 3.74) == doctest::Approx(7.5).epsilon(0.01));
  CHECK(group_index(917.0, 15.0, 2 * 3.74) == doctest::Approx(0.5 * group_index(917.0, 15.0, 3.74)).epsilon(1e-15));
  const double unity = 917.0 * 917.0 / (2.0 * 15.0e3);
  CHECK(group_index(917.0, 15.0, unity) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(group_index(917.0, 15.0, 0.0), InputError);
  CHECK_THROWS_AS(group_index(-1.0, 15.0, 1.0), InputError);
  CHECK_THROWS_AS(group_index(917.0, 0.0, 1.0), InputError);
}

TEST_CASE("power and flux") {
  // hc / lambda = 2.166e-19 J at 917 nm.
  CHECK(power_to_flux(1.0, 917.0) == doctest::Approx(4.6e3).epsilon(0.01));
  CHECK(power_to_flux(1.0, 2 * 917.0) == doctest::Approx(2 * power_to_flux(1.0, 917.0)).epsilon(1e-15));
  CHECK(power_to_flux(1e-12, 917.0) == doctest::Approx(1e-12 * power_to_flux(1.0, 917.0)).epsilon(1e-12));
  CHECK(flux_to_power(power_to_flux(0.37, 917.0), 917.0) == doctest::Approx(0.37).epsilon(1e-14));
  CHECK_THROWS_AS(power_to_flux(0.0, 917.0), InputError);
  CHECK_THROWS_AS(power_to_flux(1.0, 0.0), InputError);
}

TEST_CASE("mean photon number") {
  const double flux = power_to_flux(1.0, 917.0);
  CHECK(mean_photon_number(1.0, flux, 15.0, 7.5, 0.17) == doctest::Approx(1.9).epsilon(0.2));
  CHECK(mean_photon_number(1.0, 0.0, 15.0, 7.5, 0.17) == 0.0);
  const double base = mean_photon_number(0.5, 100.0, 15.0, 7.5, 0.17);
  CHECK(mean_photon_number(0.5, 200.0, 15.0, 7.5, 0.17) == doctest::Approx(2 * base).epsilon(1e-15));
  CHECK(mean_photon_number(0.5, 100.0, 15.0, 15.0, 0.17) == doctest::Approx(2 * base).epsilon(1e-15));
  CHECK_THROWS_AS(mean_photon_number(1.0, 1.0, 15.0, 7.5, 1.0), InputError);
}

TEST_CASE("geometry validation") {
  WaveguideGeometry g;
  CHECK_NOTHROW(g.validate());
  g.reflectivity = 1.0;
  CHECK_THROWS_AS(g.validate(), InputError);
  g = {};
  g.group_index = 0.5;
  CHECK_THROWS_AS(g.validate(), InputError);
  g = {};
  g.coupling_efficiency = 0.0;
  CHECK_THROWS_AS(g.validate(), InputError);
}

TEST_CASE("visibility inversion") {
  for (double r : {0.0, 0.05, 0.17, 0.5, 0.9}) {
    const double v = 2 * r / (1 + r * r);
    CHECK(reflectivity_from_visibility(v) == doctest::Approx(r).epsilon(1e-12));
  }
  CHECK_THROWS_AS(reflectivity_from_visibility(1.2), InputError);
}

TEST_CASE("fringe analysis round trip") {
  const auto spectrum = airy(0.17, 3.74, 0.0, 1);
  const auto f = fringe_analysis(spectrum);
  CHECK(f.period_nm == doctest::Approx(3.74).epsilon(0.05 / 3.74));
  CHECK(std::abs(f.reflectivity - 0.17) < 0.01);
  CHECK(f.n_periods > 10.0);
  CHECK(group_index(917.0, 15.0, f.period_nm) ==
        doctest::Approx(group_index(917.0, 15.0, 3.74)).epsilon(0.02));

  const auto noisy = fringe_analysis(airy(0.17, 3.74, 0.002, 2));
  CHECK(noisy.period_nm == doctest::Approx(3.74).epsilon(0.05 / 3.74));
  CHECK(std::abs(noisy.reflectivity - 0.17) < 0.01);
}

TEST_CASE("fringe analysis without fringes") {
  const auto flat = airy(0.0, 3.74, 0.0, 1);
  try {
    fringe_analysis(flat);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("too few fringes") != std::string::npos);
  }
  std::vector<SpectrumPoint> constant(100, {0.0, 1.0});
  for (int k = 0; k < 100; ++k) constant[static_cast<std::size_t>(k)].wavelength_nm = 900.0 + k;
  CHECK_THROWS_AS(fringe_analysis(constant), InputError);

  const auto noise_only = fringe_analysis(airy(0.0, 3.74, 0.001, 3));
  CHECK(noise_only.reflectivity < 0.02);

  // Two periods are not enough to measure a fringe spacing.
  CHECK_THROWS_AS(fringe_analysis(airy(0.17, 3.74, 0.0, 1, 900.0, 907.5, 400)), InputError);
}
