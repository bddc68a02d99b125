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

#include "wgqed/operators.hpp"

#include <cmath>
#include <string>

#include "wgqed/error.hpp"

namespace wgqed {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_emitter_count(int n_emitters) {
  if (n_emitters < 0 || n_emitters > max_emitters)
    throw InputError("emitter count " + std::to_string(n_emitters) +
                     " outside [0, " + std::to_string(max_emitters) + "]");
}

void check_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw InputError(std::string(what) + ": dimension mismatch");
}

}  // namespace

void EmitterParams::validate() const {
  if (!(gamma_tot > 0.0)) throw InputError("gamma_tot must be > 0");
  if (!(gamma_d >= 0.0)) throw InputError("gamma_d must be >= 0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw InputError("beta must lie in [0, 1]");
  if (!(sigma_sd >= 0.0)) throw InputError("sigma_sd must be >= 0");
  if (!std::isfinite(delta0) || !std::isfinite(phase))
    throw InputError("delta0 and phase must be finite");
}

Operator ladder_operator(int index, int n_emitters, LadderKind kind) {
  check_emitter_count(n_emitters);
  if (index < 0 || index >= n_emitters)
    throw InputError("emitter index " + std::to_string(index) +
                     " out of range for " + std::to_string(n_emitters) +
                     " emitters");
  const Eigen::Index dim = Eigen::Index{1} << n_emitters;
  const Eigen::Index bit = Eigen::Index{1} << (n_emitters - 1 - index);
  Operator op = Operator::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    const bool excited = (s & bit) != 0;
    switch (kind) {
      case LadderKind::lower:
        if (excited) op(s & ~bit, s) = 1.0;
        break;
      case LadderKind::raise:
        if (!excited) op(s | bit, s) = 1.0;
        break;
      case LadderKind::population:
        if (excited) op(s, s) = 1.0;
        break;
    }
  }
  return op;
}

Operator identity_operator(int n_emitters) {
  check_emitter_count(n_emitters);
  const Eigen::Index dim = Eigen::Index{1} << n_emitters;
  return Operator::Identity(dim, dim);
}

int emitter_count(const Operator& op) {
  const Eigen::Index dim = op.rows();
  if (dim != op.cols() || dim < 1 || (dim & (dim - 1)) != 0)
    throw InputError("operator dimension " + std::to_string(dim) +
                     " is not a power of two");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

bool is_hermitian(const Operator& op, double tol) {
  if (op.rows() != op.cols()) return false;
  return (op - op.adjoint()).cwiseAbs().maxCoeff() < tol;
}

Operator build_hamiltonian(std::span<const EmitterParams> emitters,
                           double laser_detuning, double rabi) {
  std::vector<Complex> drives(emitters.size(), Complex(rabi, 0.0));
  return build_hamiltonian(emitters, laser_detuning, drives);
}

Operator build_hamiltonian(std::span<const EmitterParams> emitters,
                           double laser_detuning,
                           std::span<const Complex> rabi) {
  if (emitters.empty()) throw InputError("build_hamiltonian: no emitters");
  if (rabi.size() != emitters.size())
    throw InputError("build_hamiltonian: one drive amplitude per emitter");
  const int n = static_cast<int>(emitters.size());
  check_emitter_count(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Operator H = Operator::Zero(dim, dim);
  const Complex i1(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    const Operator lower = ladder_operator(k, n, LadderKind::lower);
    const Operator raise = lower.adjoint();
    H -= (laser_detuning - emitters[k].delta0) * (raise * lower);
    H += i1 * (rabi[k] * raise - std::conj(rabi[k]) * lower);
  }
  return H;
}

Operator dissipator(const Operator& x, const Operator& rho) {
  check_same_dim(x, rho, "dissipator");
  const Operator xdx = x.adjoint() * x;
  return x * rho * x.adjoint() - 0.5 * (xdx * rho + rho * xdx);
}

SuperVector vectorize(const Operator& rho) {
  return Eigen::Map<const SuperVector>(rho.data(), rho.size());
}

Operator unvectorize(const SuperVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw InputError("unvectorize: size mismatch");
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Liouvillian::Liouvillian(Eigen::MatrixXcd matrix, Eigen::Index hilbert_dim)
    : matrix_(std::move(matrix)), hilbert_dim_(hilbert_dim) {
  if (matrix_.rows() != hilbert_dim_ * hilbert_dim_ ||
      matrix_.cols() != matrix_.rows())
    throw InputError("Liouvillian: matrix is not (dim^2 x dim^2)");
}

Operator Liouvillian::apply(const Operator& rho) const {
  if (rho.rows() != hilbert_dim_ || rho.cols() != hilbert_dim_)
    throw InputError("Liouvillian::apply: dimension mismatch");
  return unvectorize(matrix_ * vectorize(rho), hilbert_dim_);
}

Eigen::RowVectorXcd Liouvillian::trace_functional() const {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(dim());
  for (Eigen::Index k = 0; k < hilbert_dim_; ++k) t(k + k * hilbert_dim_) = 1.0;
  return t;
}

Eigen::MatrixXcd hamiltonian_superoperator(const Operator& H) {
  const Eigen::Index d = H.rows();
  const Operator id = Operator::Identity(d, d);
  const Complex i1(0.0, 1.0);
  return i1 * (kron(id, H) - kron(H.transpose(), id));
}

Eigen::MatrixXcd dissipator_superoperator(const Operator& x) {
  const Eigen::Index d = x.rows();
  const Operator id = Operator::Identity(d, d);
  const Operator xdx = x.adjoint() * x;
  return kron(x.conjugate(), x) - 0.5 * kron(id, xdx) -
         0.5 * kron(xdx.transpose(), id);
}

Liouvillian build_liouvillian(const Operator& H,
                              std::span<const RatedOperator> jumps,
                              std::span<const RatedOperator> dephasers) {
  if (H.rows() != H.cols()) throw InputError("Hamiltonian is not square");
  Eigen::MatrixXcd L = hamiltonian_superoperator(H);
  for (auto list : {jumps, dephasers}) {
    for (const auto& term : list) {
      check_same_dim(H, term.op, "build_liouvillian");
      if (!(term.rate >= 0.0)) throw InputError("negative dissipation rate");
      if (term.rate == 0.0) continue;
      L += term.rate * dissipator_superoperator(term.op);
    }
  }
  return Liouvillian(std::move(L), H.rows());
}

std::vector<RatedOperator> decay_terms(std::span<const EmitterParams> emitters,
                                       DecayLayout layout) {
  const int n = static_cast<int>(emitters.size());
  check_emitter_count(n);
  std::vector<RatedOperator> terms;
  if (n == 0) return terms;
  if (layout == DecayLayout::independent) {
    for (int k = 0; k < n; ++k)
      terms.push_back({emitters[k].gamma_tot,
                       ladder_operator(k, n, LadderKind::lower)});
    return terms;
  }

  const Eigen::Index dim = Eigen::Index{1} << n;
  Operator collective = Operator::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    const auto& e = emitters[k];
    const Operator lower = ladder_operator(k, n, LadderKind::lower);
    collective += std::sqrt(e.beta * e.gamma_tot) * std::polar(1.0, e.phase) * lower;
    const double unguided = (1.0 - e.beta) * e.gamma_tot;
    if (unguided > 0.0) terms.push_back({unguided, lower});
  }
  terms.push_back({1.0, std::move(collective)});
  return terms;
}

std::vector<RatedOperator> dephasing_terms(
    std::span<const EmitterParams> emitters) {
  const int n = static_cast<int>(emitters.size());
  check_emitter_count(n);
  std::vector<RatedOperator> terms;
  for (int k = 0; k < n; ++k)
    if (emitters[k].gamma_d > 0.0)
      terms.push_back({2.0 * emitters[k].gamma_d,
                       ladder_operator(k, n, LadderKind::population)});
  return terms;
}

}  // namespace wgqed
