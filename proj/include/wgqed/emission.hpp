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

#include "wgqed/operators.hpp"
#include "wgqed/scattering.hpp"

namespace wgqed {

/// Non-resonant excitation modelled as an incoherent pump s^+ at pump_rate on
/// every emitter, with no coherent drive.
struct PumpParams {
  double pump_rate = 0.0;               ///< rad/ns, > 0
  std::vector<double> detector_phases;  ///< per emitter; empty means all zero
  bool distinguishable = false;         ///< add emitter intensities incoherently
};

/// Photoluminescence g2(tau) of the summed emitter field
/// D = sum_i e^{i phase_i} s_i^-. Indistinguishable emitters are evaluated
/// jointly with all transitions made degenerate; distinguishable ones
/// contribute sum_i G_i(tau) + sum_{i != j} n_i n_j over (sum_i n_i)^2.
G2Result pl_g2(std::span<const EmitterParams> emitters, const PumpParams& pump,
               std::span<const double> tau_grid);

struct AntibunchingFit {
  double decay_rate = 0.0;  ///< gamma_tot + pump rate, 1/ns
  double amplitude = 0.0;   ///< dip depth a in (0, 1]
  double residual = 0.0;    ///< sum of squared residuals
};

/// Least-squares fit of g2(tau) = 1 - a exp(-k |tau|). Throws InputError for
/// data without an antibunching dip.
AntibunchingFit radiative_rate_from_g2(std::span<const double> tau,
                                       std::span<const double> g2);

}  // namespace wgqed
