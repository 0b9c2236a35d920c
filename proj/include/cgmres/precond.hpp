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

// Sparse block-arrow preconditioner for the optimality system.
//
// The Jacobian of F is approximated by keeping only the stage-local second
// derivatives of the Lagrangian for each gridpoint,
//
//   W_i = dtau * [ H_uu(i)  C_u(i)^T ]
//                [ C_u(i)   0        ],
//
// and the exact last l = m_psi + m_p columns of the forward-difference
// Jacobian (the border). Border rows are the transposed border columns and
// the l x l corner is symmetrized, so M is exactly symmetric.
//
// After permuting the unknowns to (u_0, mu_0, u_1, mu_1, ..., nu, p) the
// matrix has arrow shape
//
//   [ W   B ]     W = diag(W_0 .. W_{N-1}),  B = [B_0; ..; B_{N-1}],
//   [ B^T C ]
//
// and is factored in O(N): a small pivoted LU per W_i, the transformed
// border pieces W_i^{-1} B_i, and a dense LU of the l x l Schur complement
// S = C - sum_i B_i^T W_i^{-1} B_i.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "cgmres/gmres.hpp"
#include "cgmres/horizon.hpp"

namespace cgmres {

class FactorizationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SparsePreconditioner {
  ProblemDims dims;
  /// W_i, (m_u + m_c) square, unknowns ordered (u_i, mu_i).
  std::vector<Matrix> blocks;
  /// First m - l rows of the exact border columns, in ControlVector order.
  Matrix border;
  /// Symmetrized l x l corner.
  Matrix corner;

  /// Stored entries: N (m_u+m_c)^2 + 2 (m-l) l + l^2.
  Index stored_nonzeros() const;

  /// `perm[k]` is the ControlVector index placed at permuted position k.
  std::vector<Index> permutation() const;

  /// Rows of the border belonging to gridpoint i, as a (m_u+m_c) x l block.
  Matrix border_piece(Index i) const;

  /// M v without materializing M.
  Vector multiply(const VectorCRef &v) const;

  /// Dense M in ControlVector order (tests and debugging only).
  Matrix materialize() const;
};

/**
 * @brief Assembles M at the trajectory computed for (U_prev, x_j, t_j).
 *
 * `jacobian_action` must be the forward-difference operator at the same
 * point; it supplies the border columns as A e_k for the last l unit
 * vectors. Throws ContractViolation when the trajectory was computed for a
 * different point or lacks costates.
 */
SparsePreconditioner assemble_preconditioner(
    const OcpModel &model, const ControlVector &U_prev, const VectorCRef &x_j,
    double t_j, const HorizonTrajectory &trajectory,
    const LinearOperator &jacobian_action);

class FactoredPreconditioner final : public Preconditioner {
public:
  Index dimension() const override { return dims_.unknowns(); }
  /// M^{-1} r via block forward and back substitution.
  Vector solve(const VectorCRef &r) const override;

  const ProblemDims &dims() const { return dims_; }
  bool regularized() const { return regularized_count_ > 0; }
  Index regularized_blocks() const { return regularized_count_; }
  const Matrix &schur_complement() const { return schur_; }

private:
  friend FactoredPreconditioner factorize(const SparsePreconditioner &M);

  ProblemDims dims_;
  std::vector<Eigen::PartialPivLU<Matrix>> block_lu_;
  std::vector<Matrix> border_;      // B_i
  std::vector<Matrix> transformed_; // W_i^{-1} B_i
  Matrix schur_;
  Eigen::PartialPivLU<Matrix> schur_lu_;
  Index regularized_count_ = 0;
};

/**
 * @brief O(N) block-arrow LU of M.
 *
 * A diagonal block whose smallest LU pivot is below 1e-12 gets a ridge of
 * 1e-8 (1 + max|W_i|) on its diagonal and is counted as regularized. A
 * singular Schur complement throws FactorizationError.
 */
FactoredPreconditioner factorize(const SparsePreconditioner &M);

inline Vector apply_inverse(const FactoredPreconditioner &F,
                            const VectorCRef &r) {
  return F.solve(r);
}

/**
 * Closed-form inverse of the per-gridpoint block
 *
 *   K = [ m11  0    m13 ]
 *       [ 0    m22  m23 ]
 *       [ m13  m23  0   ]
 *
 * as adj(K) scaled by D = 1 / (m11 m23^2 + m13^2 m22). Returns nullopt when
 * |m11 m23^2 + m13^2 m22| < 1e-14.
 */
std::optional<Eigen::Matrix3d> closed_form_block_inverse(double m11,
                                                         double m22,
                                                         double m13,
                                                         double m23);

/// Matrix-market-style dump (1-based "row col value" per nonzero) of M,
/// optionally in the permuted arrow ordering.
void write_sparsity_pattern(const SparsePreconditioner &M, std::ostream &out,
                            bool permuted);

} // namespace cgmres
