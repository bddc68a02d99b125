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
#include <optional>
#include <span>
#include <vector>

#include "wgqed/dynamics.hpp"
#include "wgqed/operators.hpp"
#include "wgqed/parallel.hpp"

namespace wgqed {

/// Which factor multiplies the emitted field in the output relation.
/// as_printed: z / |z|^2.  unit_modulus: z / |z|.
enum class FanoPrefactor { as_printed, unit_modulus };

/// Complex Fano coefficient of the bare waveguide, either given directly or
/// through the facet parameter zeta with z = 1 / (1 + i zeta).
class WaveguideFano {
 public:
  WaveguideFano() = default;
  static WaveguideFano from_z(Complex z);
  static WaveguideFano from_zeta(double zeta);

  Complex z() const { return z_; }
  Complex prefactor(FanoPrefactor mode) const;

 private:
  Complex z_{1.0, 0.0};
};

/// Emitters plus waveguide plus coherent drive: the root of the forward model.
///
/// The drive is a coherent state of flux F photons/ns, amplitude
/// alpha = sqrt(F). Emitter i is driven with Rabi frequency
/// z alpha sqrt(beta_i gamma_i / 2), and the transmitted field is
///   a_out = z alpha + p(z) sum_i sqrt(beta_i gamma_i / 2) e^{i phase_i} s_i^-
/// with p(z) the Fano prefactor. The phase of the emitted term is the one
/// that, under the +i[H, rho] generator, gives t = 1 - beta for a single
/// resonant emitter in the weak-drive limit.
struct ScatteringSystem {
  std::vector<EmitterParams> emitters;
  WaveguideFano fano;
  DecayLayout decay = DecayLayout::independent;
  double flux = 0.0;
  FanoPrefactor prefactor = FanoPrefactor::as_printed;

  /// Throws InputError on invalid emitters or flux. Returns false (and the
  /// caller may warn) when sum of beta exceeds one.
  bool validate() const;
  int size() const { return static_cast<int>(emitters.size()); }
  double amplitude() const;
};

/// a_out = scalar * 1 + op.
struct OutputField {
  Complex scalar;
  Operator op;
};

OutputField output_field_parts(const ScatteringSystem& system);

std::vector<Complex> rabi_frequencies(const ScatteringSystem& system);

/// Liouvillian at a given laser detuning, with optional per-emitter shifts of
/// the transition frequencies (spectral-diffusion offsets).
Liouvillian system_liouvillian(const ScatteringSystem& system,
                               double laser_detuning,
                               std::span<const double> offsets = {});

/// Transmitted intensity normalised to the bare waveguide,
/// <a_out^dag a_out>_ss / (|z|^2 |alpha|^2). Equal to 1 when no emitter is
/// coupled.
double transmission_intensity(const ScatteringSystem& system,
                              double laser_detuning);

/// Spectral-diffusion draws: row s holds the offset of every emitter in
/// sample s. Rows come in antithetic pairs (+x, -x). When every sigma_sd is
/// zero a single all-zero row is returned.
std::vector<std::vector<double>> spectral_diffusion_offsets(
    std::span<const EmitterParams> emitters, int n_samples, std::uint64_t seed);

struct SpectrumResult {
  std::vector<double> detuning;   ///< rad/ns
  std::vector<double> intensity;  ///< T / T0
  double dip = 0.0;               ///< 1 - min(T / T0)
  std::optional<double> fwhm;     ///< rad/ns; empty when unresolved
  int n_sd_samples = 1;
  std::uint64_t seed = 0;
};

/// Full width at half dip by linear interpolation around the minimum. Empty
/// when the dip is not positive or a half-dip crossing lies outside the grid.
std::optional<double> half_dip_width(std::span<const double> detuning,
                                     std::span<const double> intensity);

SpectrumResult transmission_spectrum(const ScatteringSystem& system,
                                     std::span<const double> detuning_grid,
                                     int n_sd_samples, std::uint64_t seed,
                                     Execution exec = Execution::parallel);

/// detector: g2 = <G2> / <I>^2 over spectral-diffusion samples (what a
/// coincidence counter integrating over the wandering measures).
/// per_sample: g2 = < G2 / I^2 >.
enum class G2Averaging { detector, per_sample };

struct G2Result {
  std::vector<double> tau;  ///< ns
  std::vector<double> g2;
  double g2_zero = 0.0;
  double mean_intensity = 0.0;
};

G2Result g2_transmitted(const ScatteringSystem& system, double laser_detuning,
                        std::span<const double> tau_grid, int n_sd_samples,
                        std::uint64_t seed,
                        G2Averaging averaging = G2Averaging::detector,
                        Execution exec = Execution::parallel);

struct SaturationCurve {
  std::vector<double> flux;  ///< photons/ns
  std::vector<double> dip;   ///< 1 - T / T0
  std::optional<double> critical_flux;
  double laser_detuning = 0.0;
};

/// Mean transition frequency of the emitters; 0 with no emitters.
double resonant_detuning(const ScatteringSystem& system);

/// dip(F) on an ascending flux grid. The critical flux is where the dip first
/// falls to half of its value at the lowest flux, interpolated linearly in
/// log F. laser_detuning defaults to resonant_detuning(system).
SaturationCurve saturation_curve(const ScatteringSystem& system,
                                 std::span<const double> flux_grid,
                                 std::optional<double> laser_detuning,
                                 int n_sd_samples, std::uint64_t seed,
                                 Execution exec = Execution::parallel);

namespace detail {

/// Intensity from the full 2^N-dimensional steady state (reference kernel).
double intensity_full_space(const ScatteringSystem& system,
                            double laser_detuning,
                            std::span<const double> offsets);

/// Intensity for the independent layout from per-emitter 2x2 steady states;
/// the stationary state factorises because no term couples the emitters.
double intensity_factorized(const ScatteringSystem& system,
                            double laser_detuning,
                            std::span<const double> offsets);

}  // namespace detail

}  // namespace wgqed
