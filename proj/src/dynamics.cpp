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

#include "wgqed/dynamics.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "wgqed/error.hpp"

namespace wgqed {

namespace {

constexpr double hermiticity_tolerance = 1e-8;
constexpr double degenerate_rcond = 1e-13;
constexpr double stationarity_tolerance = 1e-9;
constexpr double trace_drift_tolerance = 1e-9;

int null_space_dimension(const Eigen::MatrixXcd& L) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(L);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() ? s(0) : 1.0);
  int count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < cutoff) ++count;
  return count;
}

}  // namespace

DensityMatrix::DensityMatrix(const Operator& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw InputError("density matrix must be square and non-empty");
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermiticity_tolerance * scale)
    throw NumericalError("density matrix is not Hermitian");
  Operator h = 0.5 * (rho + rho.adjoint());
  const double tr = h.trace().real();
  if (!std::isfinite(tr) || tr <= 0.0)
    throw NumericalError("density matrix has non-positive trace");
  h /= tr;

  Eigen::SelfAdjointEigenSolver<Operator> eig(h);
  const auto& values = eig.eigenvalues();
  const double lowest = values.minCoeff();
  if (lowest < -clip_threshold)
    throw NumericalError("density matrix eigenvalue " + std::to_string(lowest) +
                         " below clipping threshold");
  if (lowest < 0.0) {
    Eigen::VectorXd clipped = values.cwiseMax(0.0);
    clipped /= clipped.sum();
    h = eig.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
        eig.eigenvectors().adjoint();
  }
  rho_ = std::move(h);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw InputError("pure state must be non-zero");
  const Eigen::VectorXcd u = psi / norm;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::ground(int n_emitters) {
  const Operator id = identity_operator(n_emitters);
  Operator rho = Operator::Zero(id.rows(), id.cols());
  rho(0, 0) = 1.0;
  return DensityMatrix(rho);
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim())
    throw InputError("expectation: dimension mismatch");
  return (op * rho.matrix()).trace();
}

DensityMatrix steady_state(const Liouvillian& L) {
  const Eigen::Index n = L.dim();
  const Eigen::Index d = L.hilbert_dim();
  if (n == 0) throw InputError("steady_state: empty Liouvillian");

  // The trace functional is a left null vector of L with unit weight on row
  // 0, so row 0 is redundant and can carry the normalisation instead.
  Eigen::MatrixXcd A = L.matrix();
  A.row(0) = L.trace_functional();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
  b(0) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  // The rcond estimate can miss exactly zero pivots, so check those as well.
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const bool singular = !(pivots.minCoeff() > degenerate_rcond * pivots.maxCoeff());
  if (singular || !(lu.rcond() > degenerate_rcond)) {
    throw NumericalError("steady state is not unique: null space dimension " +
                         std::to_string(null_space_dimension(L.matrix())));
  }
  const SuperVector x = lu.solve(b);

  const double scale = std::max(1.0, L.matrix().cwiseAbs().maxCoeff());
  const double residual = (L.matrix() * x).cwiseAbs().maxCoeff();
  if (!(residual <= stationarity_tolerance * scale))
    throw NumericalError("steady-state residual " + std::to_string(residual) +
                         " exceeds tolerance");
  return DensityMatrix(unvectorize(x, d));
}

Propagator::Propagator(const Liouvillian& L) : L_(L) {}

SuperVector Propagator::advance(const SuperVector& v, double dt) {
  if (!(dt >= 0.0)) throw InputError("propagation time must be >= 0");
  if (dt == 0.0) return v;
  if (!(cached_dt_ > 0.0 && std::abs(dt - cached_dt_) <= 1e-12 * dt)) {
    cached_exp_ = (L_.matrix() * Complex(dt, 0.0)).exp();
    if (!cached_exp_.allFinite())
      throw NumericalError("matrix exponential overflowed");
    cached_dt_ = dt;
  }
  return cached_exp_ * v;
}

DensityMatrix propagate(const DensityMatrix& rho0, const Liouvillian& L,
                        double t) {
  if (rho0.dim() != L.hilbert_dim())
    throw InputError("propagate: dimension mismatch");
  if (!(t >= 0.0)) throw InputError("propagate: t must be >= 0");
  if (t == 0.0) return rho0;
  Propagator prop(L);
  const Operator rho = unvectorize(prop.advance(vectorize(rho0.matrix()), t),
                                   L.hilbert_dim());
  const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (drift > trace_drift_tolerance)
    throw NumericalError("trace drifted by " + std::to_string(drift) +
                         " during propagation");
  return DensityMatrix(rho);
}

void validate_tau_grid(std::span<const double> tau_grid) {
  if (tau_grid.empty()) throw InputError("tau grid is empty");
  if (tau_grid.front() != 0.0) throw InputError("tau grid must start at 0");
  for (std::size_t k = 1; k < tau_grid.size(); ++k)
    if (!(tau_grid[k] > tau_grid[k - 1]))
      throw InputError("tau grid must be strictly increasing");
}

CorrelatorSeries two_time_correlator(const DensityMatrix& rho_ss,
                                     const Liouvillian& L, const Operator& A,
                                     const Operator& B, const Operator& C,
                                     std::span<const double> tau_grid) {
  validate_tau_grid(tau_grid);
  const Eigen::Index d = L.hilbert_dim();
  for (const Operator* op : {&A, &B, &C})
    if (op->rows() != d || op->cols() != d)
      throw InputError("two_time_correlator: dimension mismatch");
  if (rho_ss.dim() != d) throw InputError("two_time_correlator: state dimension");

  // trace(B X) = vec(B^T) . vec(X) without conjugation.
  const Operator bt = B.transpose();
  const SuperVector probe = vectorize(bt);

  CorrelatorSeries out;
  out.tau.assign(tau_grid.begin(), tau_grid.end());
  out.values.reserve(tau_grid.size());
  Propagator prop(L);
  SuperVector v = vectorize(C * rho_ss.matrix() * A);
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    if (k > 0) v = prop.advance(v, tau_grid[k] - tau_grid[k - 1]);
    out.values.push_back(probe.transpose() * v);
  }
  return out;
}

}  // namespace wgqed
