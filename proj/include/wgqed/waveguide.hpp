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

#include <span>
#include <vector>

namespace wgqed {

/// Photonic-crystal waveguide geometry. Lengths in um, wavelengths in nm.
struct WaveguideGeometry {
  double length_um = 15.0;
  double wavelength_nm = 917.0;
  double group_index = 1.0;
  double reflectivity = 0.0;
  double coupling_efficiency = 1.0;

  void validate() const;
};

/// n_g = lambda^2 / (2 L delta_lambda).
double group_index(double wavelength_nm, double length_um, double delta_lambda_nm);

/// Mean number of guided photons, eta_c F L n_g / (c (1 - R)); flux in
/// photons/ns.
double mean_photon_number(double coupling_efficiency, double flux_per_ns,
                          double length_um, double group_index,
                          double reflectivity);

/// Photon flux (photons/ns) carried by power_uw at wavelength_nm.
double power_to_flux(double power_uw, double wavelength_nm);
double flux_to_power(double flux_per_ns, double wavelength_nm);

struct SpectrumPoint {
  double wavelength_nm = 0.0;
  double intensity = 0.0;
};

struct FringeAnalysis {
  double period_nm = 0.0;     ///< Fabry-Perot fringe spacing
  double visibility = 0.0;    ///< mean (max - min) / (max + min) per period
  double reflectivity = 0.0;  ///< from V = 2R / (1 + R^2)
  double n_periods = 0.0;     ///< span / period
};

/// Fringe spacing and facet reflectivity of a white-light transmission
/// spectrum. The period is the dominant spatial frequency of the spectrum
/// after subtracting a moving-median baseline five periods wide; the
/// visibility is averaged over complete periods of the baseline-normalised
/// spectrum. Throws InputError for spectra with fewer than three fringes.
FringeAnalysis fringe_analysis(std::span<const SpectrumPoint> white_light);

/// Inverse of V = 2R / (1 + R^2) on [0, 1).
double reflectivity_from_visibility(double visibility);

}  // namespace wgqed
