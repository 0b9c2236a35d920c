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

#include "cgmres/continuation.hpp"

#include <chrono>
#include <cmath>
#include <memory>

#include "cgmres/dense_oracle.hpp"
#include "cgmres/precond.hpp"

namespace cgmres {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

void ContinuationConfig::validate() const {
  if (!(h > 0.0) || !(dt > 0.0) || !(tol > 0.0)) {
    throw ContractViolation("ContinuationConfig: h, dt and tol must be > 0");
  }
  if (k_max < 1) {
    throw ContractViolation("ContinuationConfig: k_max must be >= 1");
  }
}

FdOperator::FdOperator(const OcpModel &model, ControlVector U, Vector x,
                       double t, double h, HorizonTrajectory *trajectory_out)
    : model_(&model), U_(std::move(U)), x_(std::move(x)), t_(t), h_(h) {
  if (!(h_ > 0.0)) {
    throw ContractViolation("FdOperator: h must be > 0");
  }
  base_ = assemble_F(*model_, U_, x_, t_, trajectory_out);
}

FdOperator::FdOperator(const OcpModel &model, ControlVector U, Vector x,
                       double t, double h, Vector base_residual)
    : model_(&model), U_(std::move(U)), x_(std::move(x)), t_(t), h_(h),
      base_(std::move(base_residual)) {
  if (!(h_ > 0.0)) {
    throw ContractViolation("FdOperator: h must be > 0");
  }
  require_size(base_, U_.size(), "FdOperator base residual");
}

Vector FdOperator::apply(const VectorCRef &v) const {
  require_size(v, U_.size(), "FdOperator::apply");
  ControlVector shifted(U_.dims(), U_.data() + h_ * v);
  return (assemble_F(*model_, shifted, x_, t_) - base_) / h_;
}

Vector residual_b(const OcpModel &model, const ControlVector &U_prev,
                  const VectorCRef &x_j, double t_j) {
  return -assemble_F(model, U_prev, x_j, t_j);
}

FdOperator fd_operator(const OcpModel &model, const ControlVector &U_prev,
                       const VectorCRef &x_j, double t_j, double h) {
  return FdOperator(model, U_prev, x_j, t_j, h);
}

StepResult continuation_step(const OcpModel &model, const ControlVector &U_prev,
                             const VectorCRef &x_j, double t_j,
                             const ContinuationConfig &cfg) {
  cfg.validate();
  const Index m = U_prev.size();

  HorizonTrajectory trajectory;
  const FdOperator A(model, U_prev, x_j, t_j, cfg.h, &trajectory);
  const Vector rhs = -A.base_residual() / cfg.h;

  const auto precond_start = Clock::now();

  StepResult result;
  std::unique_ptr<Preconditioner> M;
  if (cfg.precond == PrecondMode::Sparse) {
    try {
      auto factored = std::make_unique<FactoredPreconditioner>(factorize(
          assemble_preconditioner(model, U_prev, x_j, t_j, trajectory, A)));
      result.regularized = factored->regularized();
      M = std::move(factored);
    } catch (const FactorizationError &) {
      result.precond_fallback = true;
    }
  }
  if (!M) {
    M = std::make_unique<IdentityPreconditioner>(m);
  }
  result.precond_seconds = seconds_since(precond_start);

  GmresOptions options;
  options.k_max = cfg.k_max;
  options.tol = cfg.tol;
  options.fixed_iterations = cfg.fixed_iterations;

  const auto solve_start = Clock::now();
  try {
    result.report = gmres_solve(A, rhs, Vector::Zero(m), options, *M);
  } catch (const SolverFailure &e) {
    throw StepError(e.what(), result.report);
  }
  result.solve_seconds = seconds_since(solve_start);

  result.U = ControlVector(U_prev.dims(),
                           U_prev.data() + cfg.h * result.report.solution);
  result.u_applied = result.U.u(0);
  result.residual_norm = assemble_F(model, result.U, x_j, t_j).norm();
  if (!std::isfinite(result.residual_norm)) {
    throw StepError("continuation_step: non-finite residual after update",
                    result.report);
  }
  return result;
}

Vector propagate_state(const OcpModel &model, const VectorCRef &x_j,
                       const VectorCRef &u_j, double t_j, double dt,
                       const VectorCRef &p) {
  const ModelDimensions d = model.dimensions();
  require_size(x_j, d.n_x, "propagate_state x");
  require_size(u_j, d.m_u, "propagate_state u");
  Vector next = x_j + model.plant_dynamics(t_j, x_j, u_j, p) * dt;
  if (!next.allFinite()) {
    throw NumericError("propagate_state: non-finite state");
  }
  return next;
}

InitResult initialize_U0(const OcpModel &model, const VectorCRef &x0,
                         double t0, Index N, const InitOptions &options) {
  const ProblemDims dims(model.dimensions(), N);
  ControlVector U = model.initial_guess(dims, t0, x0);
  if (U.dims() != dims) {
    throw ContractViolation("initial_guess returned a mismatched layout");
  }

  auto residual = [&](const Vector &data) {
    return assemble_F(model, ControlVector(dims, data), x0, t0);
  };

  Vector F = residual(U.data());
  double norm = F.norm();
  int iter = 0;
  for (; iter < options.max_iterations && norm > options.target; ++iter) {
    const Matrix J = build_dense_jacobian(model, U, x0, t0,
                                          options.jacobian_step,
                                          DifferenceScheme::Central);
    Vector step;
    try {
      step = dense_solve(J, -F);
    } catch (const SingularMatrixError &) {
      break;
    }
    double alpha = model.max_step_fraction(U, step);
    bool accepted = false;
    while (alpha >= options.min_step) {
      const Vector trial = U.data() + alpha * step;
      try {
        const Vector F_trial = residual(trial);
        const double trial_norm = F_trial.norm();
        if (trial_norm <= (1.0 - options.armijo * alpha) * norm) {
          U.data() = trial;
          F = F_trial;
          norm = trial_norm;
          accepted = true;
          break;
        }
      } catch (const NumericError &) {
        // fall through and shrink the step
      }
      alpha *= options.backtrack;
    }
    if (!accepted) {
      break;
    }
  }
  if (!(norm <= options.accept)) {
    throw InitializationError("initialize_U0: Newton stagnated at ||F|| = " +
                              std::to_string(norm));
  }
  return {std::move(U), norm, iter};
}

} // namespace cgmres
