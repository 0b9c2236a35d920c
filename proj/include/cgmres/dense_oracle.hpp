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

// Brute-force reference computations. Everything here is O(m) residual
// evaluations or O(m^3) arithmetic and is meant for desk-scale checks only.

#pragma once

#include <functional>
#include <iosfwd>
#include <stdexcept>

#include "cgmres/horizon.hpp"

namespace cgmres {

class OracleRefusal : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class DifferenceScheme { Forward, Central };

/// Largest system the oracle will materialize.
inline constexpr Index kDenseOracleLimit = 2000;

using ResidualFunction = std::function<Vector(const Vector &)>;

/// Column-by-column finite-difference Jacobian of an arbitrary residual.
Matrix finite_difference_jacobian(const ResidualFunction &F,
                                  const VectorCRef &U, double h,
                                  DifferenceScheme scheme);

/// Dense A with A e_k = (F[U + h e_k] - F[U]) / h, or the central quotient.
/// Throws OracleRefusal when m exceeds kDenseOracleLimit.
Matrix build_dense_jacobian(const OcpModel &model, const ControlVector &U,
                            const VectorCRef &x, double t, double h,
                            DifferenceScheme scheme = DifferenceScheme::Forward);

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError
/// when a pivot falls below 1e-14 times the largest entry of A.
Vector dense_solve(const MatrixCRef &A, const VectorCRef &b);

/// max |A_ij - A_ji| over i < j.
double symmetry_defect(const MatrixCRef &A);

/// One row per line, space separated, full precision.
void write_dense_matrix(const MatrixCRef &A, std::ostream &out);

} // namespace cgmres
