/*
 Copyright 2026 The cgmres-precond Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <vector>

#include "cgmres/types.hpp"

namespace cgmres {

/// Matrix-free linear map v -> A v. Must be deterministic within a solve.
class LinearOperator {
public:
  virtual ~LinearOperator() = default;
  virtual Index dimension() const = 0;
  virtual Vector apply(const VectorCRef &v) const = 0;
};

/// Action r -> M^{-1} r of a preconditioner M. Must be linear in r.
class Preconditioner {
public:
  virtual ~Preconditioner() = default;
  virtual Index dimension() const = 0;
  virtual Vector solve(const VectorCRef &r) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
public:
  explicit IdentityPreconditioner(Index n) : n_(n) {}
  Index dimension() const override { return n_; }
  Vector solve(const VectorCRef &r) const override { return r; }

private:
  Index n_;
};

/// Dense matrix as an operator.
class MatrixOperator final : public LinearOperator {
public:
  explicit MatrixOperator(Matrix A) : A_(std::move(A)) {}
  Index dimension() const override { return A_.rows(); }
  Vector apply(const VectorCRef &v) const override { return A_ * v; }

private:
  Matrix A_;
};

class SolverFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct GmresOptions {
  int k_max = 100;
  double tol = 1e-5;
  /// Run exactly k_max Arnoldi steps (stopping only on breakdown).
  bool fixed_iterations = false;
  /// Second modified Gram-Schmidt pass.
  bool reorthogonalize = false;
  /// Copy the Krylov basis and Hessenberg matrix into the report.
  bool keep_basis = false;
};

struct GmresReport {
  Vector solution;
  int iterations = 0;
  /// Preconditioned residual norm estimate |H y - beta e1| at exit.
  double residual_estimate = 0.0;
  /// beta = ||M^{-1}(b - A x0)||.
  double initial_residual = 0.0;
  bool breakdown = false;
  bool converged = false;
  /// Only filled with keep_basis: V (m x (k+1)) and H ((k+1) x k).
  Matrix basis;
  Matrix hessenberg;
};

/**
 * @brief Incremental least-squares solve of min_y ||H y - beta e1|| for an
 * upper Hessenberg H built one column at a time, via Givens rotations.
 */
class GivensLeastSquares {
public:
  GivensLeastSquares(double beta, Index capacity);

  /// Appends column k (0-based) whose first k+2 entries are given; returns
  /// the updated residual norm.
  double add_column(const VectorCRef &column);

  Index columns() const { return k_; }
  double residual() const { return std::abs(g_[k_]); }
  Vector solve() const;

private:
  Matrix R_;
  Vector g_;
  std::vector<double> cos_, sin_;
  Index k_ = 0;
};

struct LeastSquaresResult {
  Vector y;
  double residual = 0.0;
};

/// Residual and minimizer of the (k+1) x k Hessenberg least-squares problem
/// formed by the leading block of H.
LeastSquaresResult residual_estimate(const MatrixCRef &H, double beta,
                                     Index k);

/**
 * @brief Left-preconditioned GMRES on z -> M^{-1} A z.
 *
 * Arnoldi with single-pass modified Gram-Schmidt; stops when the
 * preconditioned residual estimate falls to tol * beta, on happy breakdown
 * (H_{k+1,k} < 1e-14 beta), or after k_max steps. beta = 0 returns x0 with
 * zero iterations. Throws SolverFailure on non-finite arithmetic.
 */
GmresReport gmres_solve(const LinearOperator &op, const VectorCRef &b,
                        const VectorCRef &x0, const GmresOptions &options,
                        const Preconditioner &M);

} // namespace cgmres
