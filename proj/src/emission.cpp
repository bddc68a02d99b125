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

#include "wgqed/emission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "wgqed/dynamics.hpp"
#include "wgqed/error.hpp"

namespace wgqed {

namespace {

constexpr int max_pl_emitters = 4;

struct PlCorrelation {
  std::vector<double> numerator;
  double intensity = 0.0;
};

PlCorrelation pl_correlation(std::span<const EmitterParams> emitters,
                             std::span<const double> phases, double pump_rate,
                             std::span<const double> tau_grid) {
  const int n = static_cast<int>(emitters.size());
  const Operator H = build_hamiltonian(emitters, 0.0, 0.0);
  auto jumps = decay_terms(emitters, DecayLayout::independent);
  for (int k = 0; k < n; ++k)
    jumps.push_back({pump_rate, ladder_operator(k, n, LadderKind::raise)});
  const auto dephasers = dephasing_terms(emitters);
  const Liouvillian L = build_liouvillian(H, jumps, dephasers);
  const DensityMatrix rho = steady_state(L);

  const Eigen::Index dim = L.hilbert_dim();
  Operator d = Operator::Zero(dim, dim);
  for (int k = 0; k < n; ++k)
    d += std::polar(1.0, phases[k]) * ladder_operator(k, n, LadderKind::lower);
  const Operator dd = d.adjoint();
  const Operator count = dd * d;

  const auto series = two_time_correlator(rho, L, dd, count, d, tau_grid);
  PlCorrelation out;
  for (const auto& v : series.values) out.numerator.push_back(v.real());
  out.intensity = expectation(rho, count).real();
  return out;
}

}  // namespace

G2Result pl_g2(std::span<const EmitterParams> emitters, const PumpParams& pump,
               std::span<const double> tau_grid) {
  const int n = static_cast<int>(emitters.size());
  if (n < 1 || n > max_pl_emitters)
    throw InputError("pl_g2 supports 1 to " + std::to_string(max_pl_emitters) +
                     " emitters, got " + std::to_string(n));
  if (!(pump.pump_rate > 0.0)) throw InputError("pump_rate must be > 0");
  if (!pump.detector_phases.empty() &&
      pump.detector_phases.size() != emitters.size())
    throw InputError("one detector phase per emitter required");
  for (const auto& e : emitters) e.validate();
  validate_tau_grid(tau_grid);

  std::vector<double> phases = pump.detector_phases;
  phases.resize(emitters.size(), 0.0);

  std::vector<double> numerator(tau_grid.size(), 0.0);
  double intensity = 0.0;
  if (pump.distinguishable) {
    std::vector<double> populations;
    for (int k = 0; k < n; ++k) {
      const auto single = pl_correlation(emitters.subspan(k, 1),
                                         std::span<const double>(phases).subspan(k, 1),
                                         pump.pump_rate, tau_grid);
      for (std::size_t t = 0; t < numerator.size(); ++t)
        numerator[t] += single.numerator[t];
      populations.push_back(single.intensity);
      intensity += single.intensity;
    }
    double cross = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) cross += populations[i] * populations[j];
    for (double& v : numerator) v += cross;
  } else {
    std::vector<EmitterParams> degenerate(emitters.begin(), emitters.end());
    for (auto& e : degenerate) e.delta0 = 0.0;
    const auto joint = pl_correlation(degenerate, phases, pump.pump_rate, tau_grid);
    numerator = joint.numerator;
    intensity = joint.intensity;
  }

  if (!(intensity > 0.0)) throw NumericalError("emitted intensity vanishes");
  G2Result out;
  out.tau.assign(tau_grid.begin(), tau_grid.end());
  out.mean_intensity = intensity;
  for (double v : numerator) out.g2.push_back(v / (intensity * intensity));
  out.g2_zero = out.g2.front();
  return out;
}

AntibunchingFit radiative_rate_from_g2(std::span<const double> tau,
                                       std::span<const double> g2) {
  if (tau.size() != g2.size() || tau.size() < 4)
    throw InputError("need at least four (tau, g2) points of equal length");
  double min_abs_tau = std::numeric_limits<double>::infinity();
  double max_abs_tau = 0.0;
  for (double t : tau) {
    const double a = std::abs(t);
    if (a > 0.0) min_abs_tau = std::min(min_abs_tau, a);
    max_abs_tau = std::max(max_abs_tau, a);
  }
  if (!(max_abs_tau > 0.0) || !std::isfinite(min_abs_tau))
    throw InputError("tau values must not all be zero");

  // For fixed k the optimal amplitude is linear least squares; only the rate
  // is searched.
  auto amplitude_for = [&](double k) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double e = std::exp(-k * std::abs(tau[i]));
      num += (1.0 - g2[i]) * e;
      den += e * e;
    }
    return std::clamp(num / den, 0.0, 1.0);
  };
  auto sse = [&](double log_k) {
    const double k = std::exp(log_k);
    const double a = amplitude_for(k);
    double s = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double r = g2[i] - (1.0 - a * std::exp(-k * std::abs(tau[i])));
      s += r * r;
    }
    return s;
  };

  const double lo = std::log(0.1 / max_abs_tau);
  const double hi = std::log(10.0 / min_abs_tau);
  constexpr int scan = 400;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) {
    const double v = sse(lo + (hi - lo) * i / scan);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double step = (hi - lo) / scan;
  const auto [log_k, value] = boost::math::tools::brent_find_minima(
      sse, lo + step * std::max(best - 1, 0), lo + step * std::min(best + 1, scan), 52);

  AntibunchingFit fit;
  fit.decay_rate = std::exp(log_k);
  fit.amplitude = amplitude_for(fit.decay_rate);
  fit.residual = value;
  if (!(fit.amplitude > 1e-3))
    throw InputError("non-dipped data: no antibunching dip to fit");
  return fit;
}

}  // namespace wgqed
