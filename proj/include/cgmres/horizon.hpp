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

#include "cgmres/control_vector.hpp"
#include "cgmres/ocp_model.hpp"

namespace cgmres {

/**
 * @brief Predicted states and costates over the horizon grid.
 *
 * Column i of `states` / `costates` is x_i / lambda_i, i = 0..N. The inputs
 * the trajectory was computed from are kept so consumers can check that it
 * belongs to the (U, x, t) they were handed.
 */
struct HorizonTrajectory {
  Matrix states;   // n_x x (N+1)
  Matrix costates; // n_x x (N+1)
  Vector tau;      // N+1 grid coordinates
  double dtau = 0.0;

  Vector source_controls;
  Vector source_state;
  double source_time = 0.0;

  Index gridpoints() const { return tau.size() - 1; }
  bool has_costates() const { return costates.size() > 0; }

  /// True when this trajectory was computed from exactly (U, x, t).
  bool matches(const ControlVector &U, const VectorCRef &x, double t) const;
};

/// Horizon grid step: model.horizon_length() / N.
double horizon_step(const OcpPrimitives &model, const ProblemDims &dims);

/// Explicit-Euler forward recursion x_{i+1} = x_i + f(tau_i, x_i, u_i, p) dtau
/// starting from x_0 = x_current. Throws NumericError naming the gridpoint on
/// NaN/Inf.
HorizonTrajectory forward_states(const OcpModel &model, const ControlVector &U,
                                 const VectorCRef &x_current, double t);

/// Backward recursion from lambda_N = phi_x + psi_x^T nu:
///   lambda_i = lambda_{i+1} + H_x(tau_i, x_i, lambda_{i+1}, u_i, mu_i, p) dtau.
HorizonTrajectory backward_costates(const OcpModel &model,
                                    const ControlVector &U,
                                    HorizonTrajectory trajectory, double t);

/**
 * @brief Optimality residual F[U, x, t].
 *
 * Stacked in ControlVector order:
 *   H_u(tau_i, x_i, lambda_{i+1}, u_i, mu_i, p) dtau   for i = 0..N-1
 *   C(tau_i, x_i, u_i, p) dtau                         for i = 0..N-1
 *   psi(x_N, p)
 *   phi_p + psi_p^T nu + sum_i H_p(...) dtau
 *
 * The trajectory is recomputed on every call. When `trajectory_out` is not
 * null the trajectory used is moved into it.
 */
Vector assemble_F(const OcpModel &model, const ControlVector &U,
                  const VectorCRef &x_current, double t,
                  HorizonTrajectory *trajectory_out = nullptr);

} // namespace cgmres
