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

#include "cgmres/precond.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace cgmres {

namespace {

constexpr double kPivotFloor = 1e-12;
constexpr double kRidgeScale = 1e-8;
constexpr double kSchurPivotFloor = 1e-14;

double min_pivot(const Eigen::PartialPivLU<Matrix> &lu) {
  if (lu.matrixLU().size() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return lu.matrixLU().diagonal().cwiseAbs().minCoeff();
}

} // namespace

Index SparsePreconditioner::stored_nonzeros() const {
  const Index b = dims.stage_width();
  const Index l = dims.border_width();
  const Index inner = dims.unknowns() - l;
  return dims.N * b * b + 2 * inner * l + l * l;
}

std::vector<Index> SparsePreconditioner::permutation() const {
  std::vector<Index> perm;
  perm.reserve(static_cast<std::size_t>(dims.unknowns()));
  for (Index i = 0; i < dims.N; ++i) {
    for (Index k = 0; k < dims.m_u(); ++k) {
      perm.push_back(dims.u_offset(i) + k);
    }
    for (Index k = 0; k < dims.m_c(); ++k) {
      perm.push_back(dims.mu_offset(i) + k);
    }
  }
  for (Index k = dims.border_offset(); k < dims.unknowns(); ++k) {
    perm.push_back(k);
  }
  return perm;
}

Matrix SparsePreconditioner::border_piece(Index i) const {
  const Index l = dims.border_width();
  Matrix piece(dims.stage_width(), l);
  piece.topRows(dims.m_u()) = border.middleRows(dims.u_offset(i), dims.m_u());
  piece.bottomRows(dims.m_c()) =
      border.middleRows(dims.mu_offset(i), dims.m_c());
  return piece;
}

Vector SparsePreconditioner::multiply(const VectorCRef &v) const {
  require_size(v, dims.unknowns(), "SparsePreconditioner::multiply");
  const Index l = dims.border_width();
  const Index inner = dims.unknowns() - l;
  const Index mu = dims.m_u();
  const Index mc = dims.m_c();
  const auto v_border = v.tail(l);

  Vector out(dims.unknowns());
  out.head(inner) = border * v_border;
  out.tail(l) = border.transpose() * v.head(inner) + corner * v_border;

  Vector local(dims.stage_width());
  for (Index i = 0; i < dims.N; ++i) {
    local.head(mu) = v.segment(dims.u_offset(i), mu);
    local.tail(mc) = v.segment(dims.mu_offset(i), mc);
    const Vector w = blocks[static_cast<std::size_t>(i)] * local;
    out.segment(dims.u_offset(i), mu) += w.head(mu);
    out.segment(dims.mu_offset(i), mc) += w.tail(mc);
  }
  return out;
}

Matrix SparsePreconditioner::materialize() const {
  const Index m = dims.unknowns();
  const Index l = dims.border_width();
  const Index inner = m - l;
  Matrix M = Matrix::Zero(m, m);
  const std::vector<Index> perm = permutation();
  const Index b = dims.stage_width();
  for (Index i = 0; i < dims.N; ++i) {
    const Matrix &W = blocks[static_cast<std::size_t>(i)];
    for (Index r = 0; r < b; ++r) {
      for (Index c = 0; c < b; ++c) {
        M(perm[static_cast<std::size_t>(i * b + r)],
          perm[static_cast<std::size_t>(i * b + c)]) = W(r, c);
      }
    }
  }
  M.topRightCorner(inner, l) = border;
  M.bottomLeftCorner(l, inner) = border.transpose();
  M.bottomRightCorner(l, l) = corner;
  return M;
}

SparsePreconditioner assemble_preconditioner(
    const OcpModel &model, const ControlVector &U_prev, const VectorCRef &x_j,
    double t_j, const HorizonTrajectory &trajectory,
    const LinearOperator &jacobian_action) {
  if (!trajectory.matches(U_prev, x_j, t_j) || !trajectory.has_costates()) {
    throw ContractViolation(
        "assemble_preconditioner: trajectory was computed for a different "
        "point");
  }
  const ProblemDims &dims = U_prev.dims();
  if (jacobian_action.dimension() != dims.unknowns()) {
    throw ContractViolation(
        "assemble_preconditioner: operator dimension mismatch");
  }

  SparsePreconditioner M;
  M.dims = dims;
  const Index mu = dims.m_u();
  const Index mc = dims.m_c();
  const Index b = dims.stage_width();
  const double dtau = trajectory.dtau;
  const auto p = U_prev.p();

  M.blocks.reserve(static_cast<std::size_t>(dims.N));
  for (Index i = 0; i < dims.N; ++i) {
    const double tau = trajectory.tau[i];
    const auto xi = trajectory.states.col(i);
    const auto lam = trajectory.costates.col(i + 1);
    Matrix W = Matrix::Zero(b, b);
    W.topLeftCorner(mu, mu) =
        model.hamiltonian_uu(t_j, tau, xi, lam, U_prev.u(i), U_prev.mu(i), p);
    if (mc > 0) {
      const Matrix Cu = model.constraint_u(t_j, tau, xi, U_prev.u(i), p);
      W.bottomLeftCorner(mc, mu) = Cu;
      W.topRightCorner(mu, mc) = Cu.transpose();
    }
    W *= dtau;
    M.blocks.push_back(std::move(W));
  }

  const Index m = dims.unknowns();
  const Index l = dims.border_width();
  const Index inner = m - l;
  M.border.resize(inner, l);
  Matrix Z(l, l);
  Vector e = Vector::Zero(m);
  for (Index k = 0; k < l; ++k) {
    e[inner + k] = 1.0;
    const Vector col = jacobian_action.apply(e);
    e[inner + k] = 0.0;
    M.border.col(k) = col.head(inner);
    Z.col(k) = col.tail(l);
  }
  M.corner = 0.5 * (Z + Z.transpose());
  return M;
}

FactoredPreconditioner factorize(const SparsePreconditioner &M) {
  const ProblemDims &dims = M.dims;
  if (static_cast<Index>(M.blocks.size()) != dims.N) {
    throw ContractViolation("factorize: block count does not match N");
  }
  FactoredPreconditioner F;
  F.dims_ = dims;
  const Index l = dims.border_width();
  F.block_lu_.reserve(M.blocks.size());
  F.border_.reserve(M.blocks.size());
  F.transformed_.reserve(M.blocks.size());

  Matrix S = M.corner;
  for (Index i = 0; i < dims.N; ++i) {
    const Matrix &W = M.blocks[static_cast<std::size_t>(i)];
    Eigen::PartialPivLU<Matrix> lu(W);
    if (!(min_pivot(lu) >= kPivotFloor)) {
      const double max_abs = W.size() > 0 ? W.cwiseAbs().maxCoeff() : 0.0;
      Matrix ridged = W;
      ridged.diagonal().array() += kRidgeScale * (1.0 + max_abs);
      lu.compute(ridged);
      ++F.regularized_count_;
    }
    Matrix B = M.border_piece(i);
    Matrix Y = lu.solve(B);
    S.noalias() -= B.transpose() * Y;
    F.block_lu_.push_back(std::move(lu));
    F.border_.push_back(std::move(B));
    F.transformed_.push_back(std::move(Y));
  }

  if (l > 0) {
    if (!S.allFinite()) {
      throw FactorizationError("factorize: non-finite Schur complement");
    }
    F.schur_lu_.compute(S);
    const double scale = S.cwiseAbs().maxCoeff();
    if (scale == 0.0 || min_pivot(F.schur_lu_) <= kSchurPivotFloor * scale) {
      throw FactorizationError("factorize: singular Schur complement");
    }
  }
  F.schur_ = std::move(S);
  return F;
}

Vector FactoredPreconditioner::solve(const VectorCRef &r) const {
  require_size(r, dims_.unknowns(), "FactoredPreconditioner::solve");
  const Index mu = dims_.m_u();
  const Index mc = dims_.m_c();
  const Index b = dims_.stage_width();
  const Index l = dims_.border_width();

  // Forward: z_i = W_i^{-1} r_i, s = r_border - sum B_i^T z_i.
  std::vector<Vector> z(static_cast<std::size_t>(dims_.N));
  Vector s = r.tail(l);
  Vector local(b);
  for (Index i = 0; i < dims_.N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    local.head(mu) = r.segment(dims_.u_offset(i), mu);
    local.tail(mc) = r.segment(dims_.mu_offset(i), mc);
    z[k] = block_lu_[k].solve(local);
    if (l > 0) {
      s.noalias() -= border_[k].transpose() * z[k];
    }
  }

  Vector out(dims_.unknowns());
  Vector y_border = Vector::Zero(l);
  if (l > 0) {
    y_border = schur_lu_.solve(s);
    out.tail(l) = y_border;
  }
  // Back: y_i = z_i - (W_i^{-1} B_i) y_border.
  for (Index i = 0; i < dims_.N; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (l > 0) {
      z[k].noalias() -= transformed_[k] * y_border;
    }
    out.segment(dims_.u_offset(i), mu) = z[k].head(mu);
    out.segment(dims_.mu_offset(i), mc) = z[k].tail(mc);
  }
  return out;
}

std::optional<Eigen::Matrix3d> closed_form_block_inverse(double m11,
                                                         double m22,
                                                         double m13,
                                                         double m23) {
  const double denom = m11 * m23 * m23 + m13 * m22 * m13;
  if (std::abs(denom) < 1e-14) {
    return std::nullopt;
  }
  const double D = 1.0 / denom;
  Eigen::Matrix3d inv;
  inv << m23 * m23, -m13 * m23, m13 * m22,  //
      -m23 * m13, m13 * m13, m11 * m23,     //
      m22 * m13, m11 * m23, -m11 * m22;
  return inv * D;
}

void write_sparsity_pattern(const SparsePreconditioner &M, std::ostream &out,
                            bool permuted) {
  Matrix dense = M.materialize();
  if (permuted) {
    const std::vector<Index> perm = M.permutation();
    Matrix P(dense.rows(), dense.cols());
    for (Index r = 0; r < dense.rows(); ++r) {
      for (Index c = 0; c < dense.cols(); ++c) {
        P(r, c) = dense(perm[static_cast<std::size_t>(r)],
                        perm[static_cast<std::size_t>(c)]);
      }
    }
    dense = std::move(P);
  }
  Index nnz = 0;
  for (Index c = 0; c < dense.cols(); ++c) {
    for (Index r = 0; r < dense.rows(); ++r) {
      nnz += dense(r, c) != 0.0 ? 1 : 0;
    }
  }
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << dense.rows() << ' ' << dense.cols() << ' ' << nnz << '\n';
  const auto old_precision = out.precision(17);
  for (Index c = 0; c < dense.cols(); ++c) {
    for (Index r = 0; r < dense.rows(); ++r) {
      if (dense(r, c) != 0.0) {
        out << (r + 1) << ' ' << (c + 1) << ' ' << dense(r, c) << '\n';
      }
    }
  }
  out.precision(old_precision);
}

} // namespace cgmres
