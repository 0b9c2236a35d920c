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

#include "cgmres/horizon.hpp"

namespace cgmres {

namespace {

void check_layout(const OcpModel &model, const ControlVector &U) {
  if (U.dims().model != model.dimensions()) {
    throw ContractViolation("ControlVector layout does not match the model");
  }
  require_size(U.data(), U.dims().unknowns(), "ControlVector data");
}

} // namespace

bool HorizonTrajectory::matches(const ControlVector &U, const VectorCRef &x,
                                double t) const {
  return t == source_time && source_controls.size() == U.size() &&
         source_state.size() == x.size() && source_controls == U.data() &&
         source_state == x;
}

double horizon_step(const OcpPrimitives &model, const ProblemDims &dims) {
  return model.horizon_length() / static_cast<double>(dims.N);
}

HorizonTrajectory forward_states(const OcpModel &model, const ControlVector &U,
                                 const VectorCRef &x_current, double t) {
  check_layout(model, U);
  const ProblemDims &dims = U.dims();
  require_size(x_current, dims.n_x(), "forward_states x_current");

  HorizonTrajectory traj;
  traj.dtau = horizon_step(model, dims);
  traj.tau.resize(dims.N + 1);
  traj.states.resize(dims.n_x(), dims.N + 1);
  traj.states.col(0) = x_current;
  const auto p = U.p();
  for (Index i = 0; i < dims.N; ++i) {
    traj.tau[i] = static_cast<double>(i) * traj.dtau;
    const Vector f =
        model.dynamics(t, traj.tau[i], traj.states.col(i), U.u(i), p);
    traj.states.col(i + 1) = traj.states.col(i) + f * traj.dtau;
    if (!traj.states.col(i + 1).allFinite()) {
      throw NumericError("forward_states: non-finite state at gridpoint " +
                             std::to_string(i + 1),
                         i + 1);
    }
  }
  traj.tau[dims.N] = static_cast<double>(dims.N) * traj.dtau;
  traj.source_controls = U.data();
  traj.source_state = x_current;
  traj.source_time = t;
  return traj;
}

HorizonTrajectory backward_costates(const OcpModel &model,
                                    const ControlVector &U,
                                    HorizonTrajectory traj, double t) {
  check_layout(model, U);
  const ProblemDims &dims = U.dims();
  if (traj.states.cols() != dims.N + 1 || traj.states.rows() != dims.n_x()) {
    throw ContractViolation("backward_costates: states not computed");
  }
  const auto p = U.p();
  const auto xN = traj.states.col(dims.N);

  traj.costates.resize(dims.n_x(), dims.N + 1);
  Vector lambdaN = model.terminal_cost_x(xN, p);
  if (dims.m_psi() > 0) {
    lambdaN += model.terminal_constraint_x(xN, p).transpose() * U.nu();
  }
  traj.costates.col(dims.N) = lambdaN;
  if (!lambdaN.allFinite()) {
    throw NumericError("backward_costates: non-finite terminal costate",
                       dims.N);
  }
  for (Index i = dims.N - 1; i >= 0; --i) {
    const Vector Hx =
        model.hamiltonian_x(t, traj.tau[i], traj.states.col(i),
                            traj.costates.col(i + 1), U.u(i), U.mu(i), p);
    traj.costates.col(i) = traj.costates.col(i + 1) + Hx * traj.dtau;
    if (!traj.costates.col(i).allFinite()) {
      throw NumericError("backward_costates: non-finite costate at gridpoint " +
                             std::to_string(i),
                         i);
    }
  }
  return traj;
}

Vector assemble_F(const OcpModel &model, const ControlVector &U,
                  const VectorCRef &x_current, double t,
                  HorizonTrajectory *trajectory_out) {
  HorizonTrajectory traj = backward_costates(
      model, U, forward_states(model, U, x_current, t), t);
  const ProblemDims &dims = U.dims();
  const auto p = U.p();
  const double dtau = traj.dtau;

  Vector F(dims.unknowns());
  Vector p_row = Vector::Zero(dims.m_p());
  for (Index i = 0; i < dims.N; ++i) {
    const double tau = traj.tau[i];
    const auto xi = traj.states.col(i);
    const auto lam = traj.costates.col(i + 1);
    F.segment(dims.u_offset(i), dims.m_u()) =
        model.hamiltonian_u(t, tau, xi, lam, U.u(i), U.mu(i), p) * dtau;
    if (dims.m_c() > 0) {
      F.segment(dims.mu_offset(i), dims.m_c()) =
          model.constraint(t, tau, xi, U.u(i), p) * dtau;
    }
    if (dims.m_p() > 0) {
      p_row += model.hamiltonian_p(t, tau, xi, lam, U.u(i), U.mu(i), p) * dtau;
    }
  }
  const auto xN = traj.states.col(dims.N);
  if (dims.m_psi() > 0) {
    F.segment(dims.nu_offset(), dims.m_psi()) =
        model.terminal_constraint(xN, p);
  }
  if (dims.m_p() > 0) {
    p_row += model.terminal_cost_p(xN, p);
    if (dims.m_psi() > 0) {
      p_row += model.terminal_constraint_p(xN, p).transpose() * U.nu();
    }
    F.segment(dims.p_offset(), dims.m_p()) = p_row;
  }
  if (!F.allFinite()) {
    throw NumericError("assemble_F: non-finite residual");
  }
  if (trajectory_out != nullptr) {
    *trajectory_out = std::move(traj);
  }
  return F;
}

} // namespace cgmres
