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

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wgqed {

using Complex = std::complex<double>;

/// Dense operator on the 2^N-dimensional emitter Hilbert space.
///
/// Basis states are bit strings with emitter 0 as the most significant
/// factor; bit value 0 is the ground state |g> and 1 the excited state |e>.
/// For two emitters the order is |gg>, |ge>, |eg>, |ee>.
using Operator = Eigen::MatrixXcd;
using SuperVector = Eigen::VectorXcd;

/// Hilbert spaces above 2^6 make the 4^N Liouvillian impractical for dense
/// linear algebra.
inline constexpr int max_emitters = 6;

/// Physical parameters of a single two-level emitter. Rates in rad/ns.
struct EmitterParams {
  double delta0 = 0.0;     ///< transition frequency relative to the reference
  double gamma_tot = 1.0;  ///< total population decay rate
  double gamma_d = 0.0;    ///< pure dephasing rate
  double beta = 0.0;       ///< fraction of gamma_tot emitted into the guided mode
  double sigma_sd = 0.0;   ///< spectral-diffusion standard deviation
  double phase = 0.0;      ///< propagation phase of the emitted field (rad)

  /// Throws InputError when an invariant is violated.
  void validate() const;
};

enum class LadderKind { raise, lower, population };

Operator ladder_operator(int index, int n_emitters, LadderKind kind);
Operator identity_operator(int n_emitters);

/// Number of emitters encoded by a 2^N dimensional operator. Throws when the
/// dimension is not a power of two.
int emitter_count(const Operator& op);

bool is_hermitian(const Operator& op, double tol = 1e-12);

/// H = -sum_i (laser_detuning - delta0_i) n_i + i rabi sum_i (s_i^+ - s_i^-).
Operator build_hamiltonian(std::span<const EmitterParams> emitters,
                           double laser_detuning, double rabi);

/// Per-emitter complex drive: the drive term of emitter i is
/// i (rabi_i s_i^+ - conj(rabi_i) s_i^-), which reduces to the real form above.
Operator build_hamiltonian(std::span<const EmitterParams> emitters,
                           double laser_detuning,
                           std::span<const Complex> rabi);

/// D[x] rho = x rho x^dag - (x^dag x rho + rho x^dag x) / 2.
Operator dissipator(const Operator& x, const Operator& rho);

struct RatedOperator {
  double rate = 0.0;
  Operator op;
};

/// Column-stacking vectorisation: vec(rho)[r + c * dim] = rho(r, c).
SuperVector vectorize(const Operator& rho);
Operator unvectorize(const SuperVector& v, Eigen::Index dim);

/// Generator of rho_dot = i[H, rho] + sum_k rate_k D[x_k] rho acting on
/// column-stacked density matrices.
class Liouvillian {
 public:
  Liouvillian() = default;
  Liouvillian(Eigen::MatrixXcd matrix, Eigen::Index hilbert_dim);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index hilbert_dim() const { return hilbert_dim_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  Operator apply(const Operator& rho) const;

  /// Row vector t with t * vec(rho) = trace(rho).
  Eigen::RowVectorXcd trace_functional() const;

 private:
  Eigen::MatrixXcd matrix_;
  Eigen::Index hilbert_dim_ = 0;
};

/// Superoperator of rho -> i[H, rho].
Eigen::MatrixXcd hamiltonian_superoperator(const Operator& H);
/// Superoperator of rho -> D[x] rho.
Eigen::MatrixXcd dissipator_superoperator(const Operator& x);

Liouvillian build_liouvillian(const Operator& H,
                              std::span<const RatedOperator> jumps,
                              std::span<const RatedOperator> dephasers = {});

/// How emitters share the guided mode when they decay.
///
/// independent: one jump s_i^- per emitter at rate gamma_tot_i.
/// collective:  the guided part is a single jump
///              sum_i sqrt(beta_i gamma_tot_i) e^{i phase_i} s_i^-,
///              the unguided remainder (1 - beta_i) gamma_tot_i decays
///              independently. With beta = 1 this is the pure collective
///              jump sum_i sqrt(gamma_tot_i) e^{i phase_i} s_i^-.
enum class DecayLayout { independent, collective };

std::vector<RatedOperator> decay_terms(std::span<const EmitterParams> emitters,
                                       DecayLayout layout);

/// Pure dephasing 2 gamma_d D[s^+ s^-] per emitter, omitted when gamma_d = 0.
std::vector<RatedOperator> dephasing_terms(
    std::span<const EmitterParams> emitters);

}  // namespace wgqed
