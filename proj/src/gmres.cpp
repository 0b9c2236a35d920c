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

#include "cgmres/gmres.hpp"

#include <cmath>

namespace cgmres {

GivensLeastSquares::GivensLeastSquares(double beta, Index capacity)
    : R_(Matrix::Zero(capacity + 1, capacity)),
      g_(Vector::Zero(capacity + 1)) {
  g_[0] = beta;
  cos_.reserve(static_cast<std::size_t>(capacity));
  sin_.reserve(static_cast<std::size_t>(capacity));
}

double GivensLeastSquares::add_column(const VectorCRef &column) {
  const Index k = k_;
  if (k >= R_.cols()) {
    throw std::logic_error("GivensLeastSquares: capacity exceeded");
  }
  Vector h = column.head(k + 2);
  for (Index i = 0; i < k; ++i) {
    const double c = cos_[static_cast<std::size_t>(i)];
    const double s = sin_[static_cast<std::size_t>(i)];
    const double a = h[i];
    const double b = h[i + 1];
    h[i] = c * a + s * b;
    h[i + 1] = -s * a + c * b;
  }
  const double denom = std::hypot(h[k], h[k + 1]);
  double c = 1.0;
  double s = 0.0;
  if (denom > 0.0) {
    c = h[k] / denom;
    s = h[k + 1] / denom;
  }
  cos_.push_back(c);
  sin_.push_back(s);
  h[k] = denom;
  h[k + 1] = 0.0;
  R_.col(k).head(k + 2) = h;

  const double gk = g_[k];
  g_[k] = c * gk;
  g_[k + 1] = -s * gk;
  ++k_;
  return std::abs(g_[k_]);
}

Vector GivensLeastSquares::solve() const {
  Vector y(k_);
  for (Index i = k_ - 1; i >= 0; --i) {
    double acc = g_[i];
    for (Index j = i + 1; j < k_; ++j) {
      acc -= R_(i, j) * y[j];
    }
    y[i] = R_(i, i) != 0.0 ? acc / R_(i, i) : 0.0;
  }
  return y;
}

LeastSquaresResult residual_estimate(const MatrixCRef &H, double beta,
                                     Index k) {
  if (H.rows() < k + 1 || H.cols() < k) {
    throw ContractViolation("residual_estimate: H smaller than (k+1) x k");
  }
  GivensLeastSquares ls(beta, k);
  for (Index j = 0; j < k; ++j) {
    ls.add_column(H.col(j).head(j + 2));
  }
  return {ls.solve(), ls.residual()};
}

GmresReport gmres_solve(const LinearOperator &op, const VectorCRef &b,
                        const VectorCRef &x0, const GmresOptions &options,
                        const Preconditioner &M) {
  const Index m = op.dimension();
  require_size(b, m, "gmres_solve b");
  require_size(x0, m, "gmres_solve x0");
  if (M.dimension() != m) {
    throw ContractViolation("gmres_solve: preconditioner dimension mismatch");
  }
  if (options.k_max < 1 || !(options.tol > 0.0)) {
    throw ContractViolation("gmres_solve: need k_max >= 1 and tol > 0");
  }

  GmresReport report;
  report.solution = x0;

  Vector z = M.solve(b - op.apply(x0));
  const double beta = z.norm();
  if (!std::isfinite(beta)) {
    throw SolverFailure("gmres_solve: non-finite initial residual");
  }
  report.initial_residual = beta;
  report.residual_estimate = beta;
  if (beta == 0.0) {
    report.converged = true;
    return report;
  }

  const Index k_max = options.k_max;
  Matrix V(m, k_max + 1);
  Matrix H = Matrix::Zero(k_max + 1, k_max);
  V.col(0) = z / beta;
  GivensLeastSquares ls(beta, k_max);
  const double target = options.tol * beta;
  const double breakdown_floor = 1e-14 * beta;

  Index k = 0;
  while (k < k_max) {
    z = M.solve(op.apply(V.col(k)));
    if (!z.allFinite()) {
      throw SolverFailure("gmres_solve: non-finite preconditioned product");
    }
    const int passes = options.reorthogonalize ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
      for (Index i = 0; i <= k; ++i) {
        const double hik = V.col(i).dot(z);
        H(i, k) += hik;
        z -= hik * V.col(i);
      }
    }
    const double hnext = z.norm();
    H(k + 1, k) = hnext;
    const double res = ls.add_column(H.col(k).head(k + 2));
    ++k;
    report.residual_estimate = res;
    if (hnext < breakdown_floor) {
      report.breakdown = true;
      break;
    }
    V.col(k) = z / hnext;
    if (!options.fixed_iterations && res <= target) {
      break;
    }
  }

  const Vector y = ls.solve();
  report.solution = x0 + V.leftCols(k) * y;
  if (!report.solution.allFinite()) {
    throw SolverFailure("gmres_solve: non-finite solution");
  }
  report.iterations = static_cast<int>(k);
  report.converged = report.breakdown || report.residual_estimate <= target;
  if (options.keep_basis) {
    report.basis = V.leftCols(report.breakdown ? k : k + 1);
    report.hessenberg = H.topLeftCorner(k + 1, k);
  }
  return report;
}

} // namespace cgmres
