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
#include <string>
#include <vector>

#include "wgqed/operators.hpp"

namespace wgqed {

/// Trace-one, Hermitian, positive-semidefinite operator.
///
/// Construction Hermitizes and renormalises its argument. Eigenvalues in
/// [-clip, 0) are clipped to zero; anything more negative, a trace far from
/// one, or a large anti-Hermitian part is a NumericalError.
class DensityMatrix {
 public:
  static constexpr double clip_threshold = 1e-9;

  explicit DensityMatrix(const Operator& rho);

  const Operator& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

  static DensityMatrix pure(const Eigen::VectorXcd& psi);
  static DensityMatrix ground(int n_emitters);

 private:
  Operator rho_;
};

Complex expectation(const DensityMatrix& rho, const Operator& op);

/// Stationary state of L from a null-space solve with one row replaced by the
/// trace condition. Throws NumericalError when the stationary state is not
/// unique (the message carries the null-space dimension) or the residual
/// |L rho_ss| exceeds 1e-9 per entry.
DensityMatrix steady_state(const Liouvillian& L);

/// exp(L t) applied to column-stacked operators. Step exponentials are
/// computed by scaling and squaring and reused while the step size repeats,
/// so a uniform tau grid costs one matrix exponential.
class Propagator {
 public:
  explicit Propagator(const Liouvillian& L);

  SuperVector advance(const SuperVector& v, double dt);

 private:
  Liouvillian L_;
  double cached_dt_ = -1.0;
  Eigen::MatrixXcd cached_exp_;
};

/// rho(t) = exp(L t) rho0.
DensityMatrix propagate(const DensityMatrix& rho0, const Liouvillian& L,
                        double t);

struct CorrelatorSeries {
  std::vector<double> tau;     ///< ns, strictly increasing, starts at 0
  std::vector<Complex> values;
  std::string label;
};

/// Throws InputError unless the grid is non-empty, starts at 0 and is
/// strictly increasing.
void validate_tau_grid(std::span<const double> tau_grid);

/// <A(0) B(tau) C(0)> = trace(B exp(L tau)[C rho_ss A]) on tau_grid.
///
/// For an intensity correlation of an output operator a use A = a^dag,
/// B = a^dag a, C = a.
CorrelatorSeries two_time_correlator(const DensityMatrix& rho_ss,
                                     const Liouvillian& L, const Operator& A,
                                     const Operator& B, const Operator& C,
                                     std::span<const double> tau_grid);

}  // namespace wgqed
