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

#include "cgmres/gmres.hpp"
#include "cgmres/horizon.hpp"

namespace cgmres {

enum class PrecondMode { None, Sparse };

struct ContinuationConfig {
  double h = 1e-8;         // forward-difference step
  double dt = 1.0 / 500.0; // sampling period
  double tol = 1e-5;       // GMRES relative tolerance
  int k_max = 100;
  PrecondMode precond = PrecondMode::Sparse;
  bool fixed_iterations = false;

  void validate() const;
};

/**
 * @brief Forward-difference Jacobian action at a fixed point,
 *   a(V) = (F[U + h V, x, t] - F[U, x, t]) / h.
 *
 * The base residual is evaluated once at construction.
 */
class FdOperator final : public LinearOperator {
public:
  FdOperator(const OcpModel &model, ControlVector U, Vector x, double t,
             double h, HorizonTrajectory *trajectory_out = nullptr);
  /// Reuses an already computed F[U, x, t].
  FdOperator(const OcpModel &model, ControlVector U, Vector x, double t,
             double h, Vector base_residual);

  Index dimension() const override { return U_.size(); }
  Vector apply(const VectorCRef &v) const override;

  const Vector &base_residual() const { return base_; }
  double step() const { return h_; }

private:
  const OcpModel *model_;
  ControlVector U_;
  Vector x_;
  double t_;
  double h_;
  Vector base_;
};

/// b_j = -F[U_prev, x_j, t_j].
Vector residual_b(const OcpModel &model, const ControlVector &U_prev,
                  const VectorCRef &x_j, double t_j);

FdOperator fd_operator(const OcpModel &model, const ControlVector &U_prev,
                       const VectorCRef &x_j, double t_j, double h);

struct StepResult {
  ControlVector U;
  Vector u_applied;
  /// ||F[U_j, x_j, t_j]|| after the update.
  double residual_norm = 0.0;
  GmresReport report;
  double precond_seconds = 0.0;
  double solve_seconds = 0.0;
  bool regularized = false;
  /// The preconditioner could not be factored; this step ran without it.
  bool precond_fallback = false;
};

class StepError : public std::runtime_error {
public:
  StepError(const std::string &what, GmresReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const GmresReport &report() const { return report_; }

private:
  GmresReport report_;
};

/**
 * One continuation update: solve a(V) = b_j / h by GMRES from V = 0 and set
 * U_j = U_prev + h V. The trajectory computed for b_j also feeds the
 * preconditioner. Throws StepError when GMRES hits non-finite arithmetic.
 */
StepResult continuation_step(const OcpModel &model, const ControlVector &U_prev,
                             const VectorCRef &x_j, double t_j,
                             const ContinuationConfig &cfg);

/// Explicit Euler step of the plant: x + f_plant(t, x, u, p) dt.
Vector propagate_state(const OcpModel &model, const VectorCRef &x_j,
                       const VectorCRef &u_j, double t_j, double dt,
                       const VectorCRef &p);

class InitializationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct InitOptions {
  double target = 1e-6;        // stop once ||F|| <= target
  int max_iterations = 50;
  double accept = 1e-3;        // below this the result is still usable
  double backtrack = 0.5;
  double min_step = 0x1p-20;
  double armijo = 1e-4;
  double jacobian_step = 1e-6; // central differences
};

struct InitResult {
  ControlVector U;
  double residual_norm = 0.0;
  int iterations = 0;
};

/**
 * Model heuristic followed by damped Newton on F[U, x0, t0] = 0 with the
 * dense central-difference Jacobian and Armijo backtracking on ||F||.
 * Throws InitializationError if ||F|| stays above `accept`.
 */
InitResult initialize_U0(const OcpModel &model, const VectorCRef &x0,
                         double t0, Index N, const InitOptions &options = {});

} // namespace cgmres
