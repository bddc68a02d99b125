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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "support/oracles.hpp"
#include "wgqed/error.hpp"
#include "wgqed/fitting.hpp"
#include "wgqed/units.hpp"

using namespace wgqed;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

MeasuredSpectrum synthetic(const DotModel& truth, const ModelConfig& model,
                           const std::vector<double>& detuning, double noise,
                           std::uint64_t seed) {
  MeasuredSpectrum d;
  d.detuning_ghz = detuning;
  d.t_over_t0 = model_transmission(truth, model, detuning);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, noise);
  for (double& v : d.t_over_t0) v += n(rng);
  d.sigma.assign(detuning.size(), noise);
  return d;
}

ModelConfig small_model() {
  ModelConfig m;
  m.gamma_tot = units::ghz_to_rad_per_ns(0.16);
  m.flux = 0.01;
  m.n_sd_samples = 4;
  return m;
}

}  // namespace

TEST_CASE("parameter names round-trip") {
  for (auto p : all_fit_parameters) CHECK(parameter_from_name(parameter_name(p)) == p);
  CHECK_THROWS_AS(parameter_from_name("alpha"), InputError);
}

TEST_CASE("model transmission matches the weak-drive oracle without wandering") {
  DotModel dot;
  dot.beta = 0.3;
  dot.z = {0.8, 0.3};
  dot.center_ghz = 0.1;
  ModelConfig m = small_model();
  m.flux = 1e-5;
  const auto g = grid(-1.0, 1.0, 21);
  const auto t = model_transmission(dot, m, g);
  oracle::Dot o;
  o.gamma = m.gamma_tot;
  o.beta = dot.beta;
  o.delta0 = units::ghz_to_rad_per_ns(dot.center_ghz);
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(t[k] == doctest::Approx(oracle::weak_intensity({o}, dot.z,
                                                         units::ghz_to_rad_per_ns(g[k])))
                      .epsilon(1e-4));
}

TEST_CASE("log likelihood peaks at the generating parameters") {
  DotModel truth;
  truth.beta = 0.2;
  truth.sigma_sd_ghz = 0.1;
  truth.z = {-0.5, 0.0};
  FitConfig cfg;
  cfg.model = small_model();
  cfg.initial = truth;
  const auto d = synthetic(truth, cfg.model, grid(-1.5, 1.5, 41), 0.0, 1);
  MeasuredSpectrum data = d;
  data.sigma.assign(d.size(), 1.0);
  CHECK(log_likelihood(truth, data, cfg) == doctest::Approx(0.0));

  for (auto p : {FitParameter::beta, FitParameter::sigma_sd, FitParameter::z_re}) {
    for (double f : {0.8, 1.2}) {
      DotModel moved = truth;
      moved.set(p, truth.get(p) * f);
      CHECK(log_likelihood(moved, data, cfg) < 0.0);
    }
  }
  DotModel outside = truth;
  outside.beta = 1.2;
  CHECK(log_likelihood(outside, data, cfg) == -std::numeric_limits<double>::infinity());

  MeasuredSpectrum no_sigma = data;
  no_sigma.sigma.clear();
  CHECK_THROWS_AS(log_likelihood(truth, no_sigma, cfg), InputError);
}

TEST_CASE("sampler reproduces a Gaussian target") {
  const double mu = 0.3, sd = 0.1;
  auto target = [&](std::span<const double> x) {
    const double r = (x[0] - mu) / sd;
    return -0.5 * r * r;
  };
  McmcSettings s;
  s.chain_length = 40000;
  s.burn_in = 2000;
  s.seed = 11;
  const std::vector<double> lo{-10.0}, hi{10.0};
  const auto chain = metropolis_hastings(target, {2.0}, {1.0}, lo, hi, s);
  REQUIRE(chain.samples.size() == 38000);
  double m = 0.0, v = 0.0;
  for (const auto& x : chain.samples) m += x[0];
  m /= chain.samples.size();
  for (const auto& x : chain.samples) v += (x[0] - m) * (x[0] - m);
  v /= chain.samples.size() - 1;
  // Autocorrelated chain: allow a generous effective-sample-size factor.
  const double se = sd / std::sqrt(chain.samples.size() / 20.0);
  CHECK(std::abs(m - mu) < 3.0 * se);
  CHECK(std::sqrt(v) == doctest::Approx(sd).epsilon(0.05));
  CHECK(chain.acceptance_rate > 0.15);
  CHECK(chain.acceptance_rate < 0.6);
  CHECK(chain.map[0] == doctest::Approx(mu).epsilon(0.05));
}

TEST_CASE("sampler respects bounds and is seeded") {
  // Target mass piles against the lower bound.
  auto target = [](std::span<const double> x) { return -5.0 * (x[0] + x[1]); };
  McmcSettings s;
  s.chain_length = 3000;
  s.burn_in = 500;
  s.seed = 3;
  const std::vector<double> lo{0.0, 0.0}, hi{1.0, 2.0};
  const auto a = metropolis_hastings(target, {0.5, 0.5}, {0.1, 0.1}, lo, hi, s);
  const auto b = metropolis_hastings(target, {0.5, 0.5}, {0.1, 0.1}, lo, hi, s);
  for (const auto& x : a.samples) {
    CHECK(x[0] >= 0.0);
    CHECK(x[0] <= 1.0);
    CHECK(x[1] >= 0.0);
    CHECK(x[1] <= 2.0);
  }
  CHECK(a.samples == b.samples);
  s.seed = 4;
  const auto c = metropolis_hastings(target, {0.5, 0.5}, {0.1, 0.1}, lo, hi, s);
  CHECK(a.samples != c.samples);
}

TEST_CASE("sampler input validation") {
  auto target = [](std::span<const double>) { return 0.0; };
  McmcSettings s;
  s.chain_length = 10;
  s.burn_in = 5;
  const std::vector<double> lo{0.0}, hi{1.0};
  CHECK_THROWS_AS(metropolis_hastings(target, {2.0}, {0.1}, lo, hi, s), InputError);
  CHECK_THROWS_AS(metropolis_hastings(target, {}, {}, {}, {}, s), InputError);
  s.burn_in = 10;
  CHECK_THROWS_AS(metropolis_hastings(target, {0.5}, {0.1}, lo, hi, s), InputError);
  auto bad = [](std::span<const double>) { return -std::numeric_limits<double>::infinity(); };
  s.burn_in = 5;
  CHECK_THROWS_AS(metropolis_hastings(bad, {0.5}, {0.1}, lo, hi, s), InputError);
}

TEST_CASE("fit recovers a synthetic single-dot spectrum") {
  DotModel truth;
  truth.beta = 0.25;
  truth.sigma_sd_ghz = 0.1;
  truth.z = {1.0, 0.0};
  truth.center_ghz = 0.05;
  FitConfig cfg;
  cfg.model = small_model();
  cfg.spec(FitParameter::z_re).free = false;  // weak drive: only beta / z is identified
  cfg.initial = truth;
  cfg.initial.beta = 0.15;
  cfg.initial.sigma_sd_ghz = 0.2;
  cfg.initial.center_ghz = 0.0;
  cfg.chain_length = 2500;
  cfg.burn_in = 700;
  cfg.seed = 5;
  const auto data = synthetic(truth, cfg.model, grid(-1.5, 1.5, 41), 0.01, 9);

  const auto fit = mh_fit(data, cfg);
  REQUIRE(fit.free_parameters.size() == 3);
  for (const auto& s : fit.summary) {
    INFO(parameter_name(s.parameter));
    CHECK(std::abs(s.mean - truth.get(s.parameter)) < 3.0 * s.sd);
    CHECK(s.p16 <= s.p84);
    CHECK(s.sd > 0.0);
  }
  CHECK(fit[FitParameter::beta].mean == doctest::Approx(0.25).epsilon(0.15));
  CHECK_THROWS_AS(fit[FitParameter::gamma_d], InputError);
  CHECK(fit.posterior_mean.z == truth.z);
  CHECK(fit.noise == data.sigma);

  const auto again = mh_fit(data, cfg);
  CHECK(again.chain.samples == fit.chain.samples);
}

TEST_CASE("flat data gives a vanishing beta") {
  MeasuredSpectrum flat;
  flat.detuning_ghz = grid(-1.5, 1.5, 41);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 0.01);
  for (std::size_t k = 0; k < flat.size(); ++k) flat.t_over_t0.push_back(1.0 + n(rng));
  FitConfig cfg;
  cfg.model = small_model();
  cfg.spec(FitParameter::z_re).free = false;
  cfg.initial.beta = 0.3;
  cfg.initial.z = {1.0, 0.0};
  cfg.initial.sigma_sd_ghz = 0.1;
  cfg.chain_length = 2000;
  cfg.burn_in = 500;
  const auto fit = mh_fit(flat, cfg);
  CHECK(fit[FitParameter::beta].mean < 0.03);
  // sigma estimated from the data itself
  CHECK(fit.noise.front() == doctest::Approx(0.01).epsilon(0.4));
}

TEST_CASE("noise estimate from the baseline") {
  MeasuredSpectrum d;
  d.detuning_ghz = grid(-5.0, 5.0, 201);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 0.02);
  for (double x : d.detuning_ghz)
    d.t_over_t0.push_back(1.0 - 0.5 / (1.0 + x * x / 0.01) + n(rng));
  const auto s = estimate_noise(d);
  REQUIRE(s.size() == d.size());
  CHECK(s.front() == doctest::Approx(0.02).epsilon(0.2));
  CHECK(std::all_of(s.begin(), s.end(), [&](double v) { return v == s.front(); }));

  MeasuredSpectrum exact;
  exact.detuning_ghz = grid(-1.0, 1.0, 11);
  exact.t_over_t0.assign(11, 1.0);
  CHECK_THROWS_AS(estimate_noise(exact), InputError);
}

TEST_CASE("measured spectrum validation") {
  MeasuredSpectrum d;
  d.detuning_ghz = {0.0, 1.0, 2.0};
  d.t_over_t0 = {1.0, 0.9, 1.0};
  CHECK_NOTHROW(d.validate());
  auto bad = d;
  bad.detuning_ghz = {0.0, 2.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = d;
  bad.t_over_t0 = {1.0, -0.1, 1.0};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = d;
  bad.t_over_t0.pop_back();
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = d;
  bad.sigma = {0.1, 0.0, 0.1};
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("fit configuration validation") {
  FitConfig cfg;
  cfg.initial.beta = 0.1;
  CHECK_NOTHROW(cfg.validate());
  auto c = cfg;
  c.initial.beta = 1.5;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = cfg;
  c.burn_in = c.chain_length;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = cfg;
  for (auto& p : c.parameters) p.free = false;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = cfg;
  c.spec(FitParameter::beta).upper = 2.0;
  CHECK_THROWS_AS(c.validate(), InputError);
  c = cfg;
  c.model.n_sd_samples = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("two-dot prediction") {
  ModelConfig m = small_model();
  m.n_sd_samples = 1;
  m.flux = 1e-5;
  const auto g = grid(-1.0, 1.0, 81);

  DotModel a;
  a.beta = 0.2;
  a.z = {1.0, 0.0};
  a.center_ghz = 0.4;
  DotModel b = a;
  b.center_ghz = 0.0;

  SUBCASE("a dark partner leaves the single spectrum") {
    DotModel dark = a;
    dark.beta = 0.0;
    const auto two = predict_two_dot(dark, b, m, g);
    const auto one = model_transmission(b, m, g);
    for (std::size_t k = 0; k < g.size(); ++k)
      CHECK(two.intensity[k] == doctest::Approx(one[k]).epsilon(1e-9));
  }
  SUBCASE("identical dots against the weak-drive oracle") {
    const auto two = predict_two_dot(a, b, m, g);
    oracle::Dot o;
    o.gamma = m.gamma_tot;
    o.beta = a.beta;
    for (std::size_t k = 0; k < g.size(); ++k)
      CHECK(two.intensity[k] ==
            doctest::Approx(oracle::weak_intensity({o, o}, a.z, units::ghz_to_rad_per_ns(g[k])))
                .epsilon(0.05));
  }
  SUBCASE("pair dip exceeds both single dips") {
    DotModel q1{0.14, 0.12, 0.0, {1.0, 0.0}, 0.0};
    DotModel q2{0.075, 0.065, 0.0, {1.0, 0.0}, 0.0};
    m.n_sd_samples = 16;
    const auto two = predict_two_dot(q1, q2, m, g);
    auto dip = [](const std::vector<double>& t) {
      return 1.0 - *std::min_element(t.begin(), t.end());
    };
    CHECK(two.dip > dip(model_transmission(q1, m, g)));
    CHECK(two.dip > dip(model_transmission(q2, m, g)));
  }
  SUBCASE("negative real z turns dips into peaks, and the pair feature is larger") {
    DotModel q1{0.09, 0.27, 0.0, {-0.15, 0.0}, 0.0};
    DotModel q2{0.06, 7.8e-4, 0.0, {-2.08, 0.0}, 0.0};
    m.n_sd_samples = 16;
    auto feature = [](const std::vector<double>& t) {
      double f = 0.0;
      for (double v : t) f = std::max(f, std::abs(1.0 - v));
      return f;
    };
    const auto two = predict_two_dot(q1, q2, m, g);
    DotModel q1_here = q1;  // single-dot reference in the pair's waveguide
    q1_here.z = q2.z;
    const auto one1 = model_transmission(q1_here, m, g);
    const auto one2 = model_transmission(q2, m, g);
    CHECK(two.dip <= 0.0);
    CHECK(*std::max_element(one2.begin(), one2.end()) > 1.0);
    CHECK(feature(two.intensity) > feature(one1));
    CHECK(feature(two.intensity) > feature(one2));
  }
  SUBCASE("collective decay broadens the line") {
    const auto ind = predict_two_dot(a, b, m, g, DecayLayout::independent);
    const auto col = predict_two_dot(a, b, m, g, DecayLayout::collective);
    REQUIRE(ind.fwhm.has_value());
    REQUIRE(col.fwhm.has_value());
    CHECK(*col.fwhm > *ind.fwhm);
  }
}
