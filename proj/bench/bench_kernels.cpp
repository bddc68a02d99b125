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

// Serial reference versus OpenMP execution of the spectral-diffusion kernels.

#include <vector>

#include <benchmark/benchmark.h>

#include "wgqed/scattering.hpp"
#include "wgqed/units.hpp"

namespace {

using namespace wgqed;

ScatteringSystem two_dots(DecayLayout layout) {
  EmitterParams e;
  e.gamma_tot = units::ghz_to_rad_per_ns(0.16);
  e.beta = 0.3;
  e.sigma_sd = units::ghz_to_rad_per_ns(0.2);
  ScatteringSystem s;
  s.emitters = {e, e};
  s.flux = 0.01 * e.gamma_tot;
  s.decay = layout;
  return s;
}

std::vector<double> grid(int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = units::ghz_to_rad_per_ns(-2.0 + 4.0 * k / (n - 1));
  return g;
}

void run_spectrum(benchmark::State& state, DecayLayout layout, Execution exec) {
  const auto system = two_dots(layout);
  const auto g = grid(101);
  for (auto _ : state)
    benchmark::DoNotOptimize(transmission_spectrum(system, g, static_cast<int>(state.range(0)), 3, exec));
}

void run_g2(benchmark::State& state, Execution exec) {
  const auto system = two_dots(DecayLayout::independent);
  std::vector<double> tau(101);
  for (std::size_t k = 0; k < tau.size(); ++k) tau[k] = 0.05 * static_cast<double>(k);
  for (auto _ : state)
    benchmark::DoNotOptimize(g2_transmitted(system, 0.0, tau, static_cast<int>(state.range(0)), 3,
                                            G2Averaging::detector, exec));
}

void BM_SpectrumFactorizedSerial(benchmark::State& s) { run_spectrum(s, DecayLayout::independent, Execution::serial); }
void BM_SpectrumFactorizedParallel(benchmark::State& s) { run_spectrum(s, DecayLayout::independent, Execution::parallel); }
void BM_SpectrumCollectiveSerial(benchmark::State& s) { run_spectrum(s, DecayLayout::collective, Execution::serial); }
void BM_SpectrumCollectiveParallel(benchmark::State& s) { run_spectrum(s, DecayLayout::collective, Execution::parallel); }
void BM_G2Serial(benchmark::State& s) { run_g2(s, Execution::serial); }
void BM_G2Parallel(benchmark::State& s) { run_g2(s, Execution::parallel); }

BENCHMARK(BM_SpectrumFactorizedSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumFactorizedParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumCollectiveSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumCollectiveParallel)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_G2Serial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_G2Parallel)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
