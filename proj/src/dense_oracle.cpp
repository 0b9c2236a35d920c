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

#include "cgmres/dense_oracle.hpp"

#include <cmath>
#include <ostream>
#include <utility>

namespace cgmres {

Matrix finite_difference_jacobian(const ResidualFunction &F,
                                  const VectorCRef &U, double h,
                                  DifferenceScheme scheme) {
  const Index m = U.size();
  Vector probe = U;
  Matrix A;
  Vector base;
  if (scheme == DifferenceScheme::Forward) {
    base = F(probe);
  }
  for (Index k = 0; k < m; ++k) {
    const double orig = probe[k];
    probe[k] = orig + h;
    Vector plus = F(probe);
    Vector col;
    if (scheme == DifferenceScheme::Forward) {
      col = (plus - base) / h;
    } else {
      probe[k] = orig - h;
      col = (plus - F(probe)) / (2.0 * h);
    }
    probe[k] = orig;
    if (k == 0) {
      A.resize(col.size(), m);
    }
    A.col(k) = col;
  }
  return A;
}

Matrix build_dense_jacobian(const OcpModel &model, const ControlVector &U,
                            const VectorCRef &x, double t, double h,
                            DifferenceScheme scheme) {
  if (U.size() > kDenseOracleLimit) {
    throw OracleRefusal("build_dense_jacobian: m = " +
                        std::to_string(U.size()) + " exceeds the limit of " +
                        std::to_string(kDenseOracleLimit));
  }
  const Vector xs = x;
  const ProblemDims dims = U.dims();
  const ResidualFunction F = [&](const Vector &data) {
    return assemble_F(model, ControlVector(dims, data), xs, t);
  };
  return finite_difference_jacobian(F, U.data(), h, scheme);
}

Vector dense_solve(const MatrixCRef &A_in, const VectorCRef &b_in) {
  const Index n = A_in.rows();
  if (A_in.cols() != n) {
    throw ContractViolation("dense_solve: matrix is not square");
  }
  require_size(b_in, n, "dense_solve b");
  Matrix A = A_in;
  Vector b = b_in;
  const double scale = n > 0 ? A.cwiseAbs().maxCoeff() : 0.0;
  const double floor = 1e-14 * scale;

  for (Index col = 0; col < n; ++col) {
    Index pivot = col;
    for (Index r = col + 1; r < n; ++r) {
      if (std::abs(A(r, col)) > std::abs(A(pivot, col))) {
        pivot = r;
      }
    }
    if (!(std::abs(A(pivot, col)) > floor)) {
      throw SingularMatrixError("dense_solve: singular at column " +
                                std::to_string(col));
    }
    if (pivot != col) {
      A.row(pivot).swap(A.row(col));
      std::swap(b[pivot], b[col]);
    }
    for (Index r = col + 1; r < n; ++r) {
      const double factor = A(r, col) / A(col, col);
      if (factor == 0.0) {
        continue;
      }
      A.row(r).tail(n - col) -= factor * A.row(col).tail(n - col);
      b[r] -= factor * b[col];
    }
  }
  Vector x(n);
  for (Index r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (Index c = r + 1; c < n; ++c) {
      acc -= A(r, c) * x[c];
    }
    x[r] = acc / A(r, r);
  }
  return x;
}

double symmetry_defect(const MatrixCRef &A) {
  if (A.rows() != A.cols()) {
    throw ContractViolation("symmetry_defect: matrix is not square");
  }
  double worst = 0.0;
  for (Index i = 0; i < A.rows(); ++i) {
    for (Index j = i + 1; j < A.cols(); ++j) {
      worst = std::max(worst, std::abs(A(i, j) - A(j, i)));
    }
  }
  return worst;
}

void write_dense_matrix(const MatrixCRef &A, std::ostream &out) {
  const auto old_precision = out.precision(17);
  for (Index r = 0; r < A.rows(); ++r) {
    for (Index c = 0; c < A.cols(); ++c) {
      if (c > 0) {
        out << ' ';
      }
      out << A(r, c);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

} // namespace cgmres
