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

#include "cgmres/ocp_model.hpp"

#include <cmath>
#include <limits>

namespace cgmres {

namespace {

// Forward-difference step sqrt(eps) scaled by the argument magnitude.
double forward_step(double value) {
  static const double root_eps =
      std::sqrt(std::numeric_limits<double>::epsilon());
  return root_eps * std::max(1.0, std::abs(value));
}

// Step for differencing a gradient that may itself be a finite difference.
double second_order_step(double value) {
  static const double cube_root_eps =
      std::cbrt(std::numeric_limits<double>::epsilon());
  return cube_root_eps * std::max(1.0, std::abs(value));
}

template <typename Fn>
Matrix central_jacobian(Fn &&fn, const VectorCRef &at, Index rows,
                        double step) {
  Matrix J(rows, at.size());
  Vector probe = at;
  for (Index k = 0; k < at.size(); ++k) {
    const double orig = probe[k];
    probe[k] = orig + step;
    const Vector fp = fn(probe);
    probe[k] = orig - step;
    const Vector fm = fn(probe);
    probe[k] = orig;
    J.col(k) = (fp - fm) / (2.0 * step);
  }
  return J;
}

std::vector<std::string> indexed_names(const char *prefix, Index n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    names.push_back(prefix + std::to_string(i));
  }
  return names;
}

} // namespace

ControlVector OcpPrimitives::initial_guess(const ProblemDims &dims, double,
                                           const VectorCRef &) const {
  ControlVector U(dims);
  U.p().setOnes();
  return U;
}

std::vector<std::string> OcpPrimitives::state_names() const {
  return indexed_names("x", dimensions().n_x);
}

std::vector<std::string> OcpPrimitives::control_names() const {
  return indexed_names("u", dimensions().m_u);
}

double OcpModel::hamiltonian(double t, double tau, const VectorCRef &x,
                             const VectorCRef &lambda, const VectorCRef &u,
                             const VectorCRef &mu, const VectorCRef &p) const {
  double H = running_cost(t, tau, x, u, p);
  H += lambda.dot(dynamics(t, tau, x, u, p));
  if (mu.size() > 0) {
    H += mu.dot(constraint(t, tau, x, u, p));
  }
  return H;
}

Matrix OcpModel::hamiltonian_uu(double t, double tau, const VectorCRef &x,
                                const VectorCRef &lambda, const VectorCRef &u,
                                const VectorCRef &mu,
                                const VectorCRef &p) const {
  const Vector base = hamiltonian_u(t, tau, x, lambda, u, mu, p);
  Matrix out(u.size(), u.size());
  Vector probe = u;
  for (Index k = 0; k < u.size(); ++k) {
    const double h = second_order_step(u[k]);
    probe[k] = u[k] + h;
    out.col(k) = (hamiltonian_u(t, tau, x, lambda, probe, mu, p) - base) / h;
    probe[k] = u[k];
  }
  return out;
}

Matrix OcpModel::constraint_u(double t, double tau, const VectorCRef &x,
                              const VectorCRef &u, const VectorCRef &p) const {
  const Vector base = constraint(t, tau, x, u, p);
  Matrix out(base.size(), u.size());
  Vector probe = u;
  for (Index k = 0; k < u.size(); ++k) {
    const double h = forward_step(u[k]);
    probe[k] = u[k] + h;
    out.col(k) = (constraint(t, tau, x, probe, p) - base) / h;
    probe[k] = u[k];
  }
  return out;
}

// ---------------------------------------------------------------------------

FiniteDifferenceModel::FiniteDifferenceModel(
    std::shared_ptr<const OcpPrimitives> base, double step)
    : base_(std::move(base)), step_(step) {
  if (!base_) {
    throw ContractViolation("FiniteDifferenceModel: null base model");
  }
}

ModelDimensions FiniteDifferenceModel::dimensions() const {
  return base_->dimensions();
}
double FiniteDifferenceModel::horizon_length() const {
  return base_->horizon_length();
}
Vector FiniteDifferenceModel::dynamics(double t, double tau,
                                       const VectorCRef &x, const VectorCRef &u,
                                       const VectorCRef &p) const {
  return base_->dynamics(t, tau, x, u, p);
}
Vector FiniteDifferenceModel::constraint(double t, double tau,
                                         const VectorCRef &x,
                                         const VectorCRef &u,
                                         const VectorCRef &p) const {
  return base_->constraint(t, tau, x, u, p);
}
Vector FiniteDifferenceModel::terminal_constraint(const VectorCRef &x,
                                                  const VectorCRef &p) const {
  return base_->terminal_constraint(x, p);
}
double FiniteDifferenceModel::terminal_cost(const VectorCRef &x,
                                            const VectorCRef &p) const {
  return base_->terminal_cost(x, p);
}
double FiniteDifferenceModel::running_cost(double t, double tau,
                                           const VectorCRef &x,
                                           const VectorCRef &u,
                                           const VectorCRef &p) const {
  return base_->running_cost(t, tau, x, u, p);
}
Vector FiniteDifferenceModel::plant_dynamics(double t, const VectorCRef &x,
                                             const VectorCRef &u,
                                             const VectorCRef &p) const {
  return base_->plant_dynamics(t, x, u, p);
}
ControlVector FiniteDifferenceModel::initial_guess(const ProblemDims &dims,
                                                   double t0,
                                                   const VectorCRef &x0) const {
  return base_->initial_guess(dims, t0, x0);
}
double FiniteDifferenceModel::max_step_fraction(const ControlVector &U,
                                                const VectorCRef &dU) const {
  return base_->max_step_fraction(U, dU);
}
std::optional<ControlBand>
FiniteDifferenceModel::control_band(double t, const VectorCRef &p) const {
  return base_->control_band(t, p);
}
std::vector<std::string> FiniteDifferenceModel::state_names() const {
  return base_->state_names();
}
std::vector<std::string> FiniteDifferenceModel::control_names() const {
  return base_->control_names();
}

Vector FiniteDifferenceModel::hamiltonian_x(double t, double tau,
                                            const VectorCRef &x,
                                            const VectorCRef &lambda,
                                            const VectorCRef &u,
                                            const VectorCRef &mu,
                                            const VectorCRef &p) const {
  return central_gradient(
      [&](const Vector &xs) { return hamiltonian(t, tau, xs, lambda, u, mu, p); },
      x, step_);
}

Vector FiniteDifferenceModel::hamiltonian_u(double t, double tau,
                                            const VectorCRef &x,
                                            const VectorCRef &lambda,
                                            const VectorCRef &u,
                                            const VectorCRef &mu,
                                            const VectorCRef &p) const {
  return central_gradient(
      [&](const Vector &us) { return hamiltonian(t, tau, x, lambda, us, mu, p); },
      u, step_);
}

Vector FiniteDifferenceModel::hamiltonian_p(double t, double tau,
                                            const VectorCRef &x,
                                            const VectorCRef &lambda,
                                            const VectorCRef &u,
                                            const VectorCRef &mu,
                                            const VectorCRef &p) const {
  return central_gradient(
      [&](const Vector &ps) { return hamiltonian(t, tau, x, lambda, u, mu, ps); },
      p, step_);
}

Vector FiniteDifferenceModel::terminal_cost_x(const VectorCRef &x,
                                              const VectorCRef &p) const {
  return central_gradient(
      [&](const Vector &xs) { return base_->terminal_cost(xs, p); }, x, step_);
}

Vector FiniteDifferenceModel::terminal_cost_p(const VectorCRef &x,
                                              const VectorCRef &p) const {
  return central_gradient(
      [&](const Vector &ps) { return base_->terminal_cost(x, ps); }, p, step_);
}

Matrix FiniteDifferenceModel::terminal_constraint_x(const VectorCRef &x,
                                                    const VectorCRef &p) const {
  return central_jacobian(
      [&](const Vector &xs) { return base_->terminal_constraint(xs, p); }, x,
      dimensions().m_psi, step_);
}

Matrix FiniteDifferenceModel::terminal_constraint_p(const VectorCRef &x,
                                                    const VectorCRef &p) const {
  return central_jacobian(
      [&](const Vector &ps) { return base_->terminal_constraint(x, ps); }, p,
      dimensions().m_psi, step_);
}

// ---------------------------------------------------------------------------

namespace {

void check_stage_args(const ModelDimensions &d, const VectorCRef &x,
                      const VectorCRef &u, const VectorCRef &p,
                      const char *who) {
  const std::string prefix(who);
  require_size(x, d.n_x, (prefix + " x").c_str());
  require_size(u, d.m_u, (prefix + " u").c_str());
  require_size(p, d.m_p, (prefix + " p").c_str());
}

} // namespace

Vector eval_dynamics(const OcpPrimitives &model, double t, double tau,
                     const VectorCRef &x, const VectorCRef &u,
                     const VectorCRef &p) {
  const ModelDimensions d = model.dimensions();
  check_stage_args(d, x, u, p, "eval_dynamics");
  Vector out = model.dynamics(t, tau, x, u, p);
  require_size(out, d.n_x, "eval_dynamics result");
  return out;
}

Vector eval_constraint(const OcpPrimitives &model, double t, double tau,
                       const VectorCRef &x, const VectorCRef &u,
                       const VectorCRef &p) {
  const ModelDimensions d = model.dimensions();
  check_stage_args(d, x, u, p, "eval_constraint");
  Vector out = model.constraint(t, tau, x, u, p);
  require_size(out, d.m_c, "eval_constraint result");
  return out;
}

HamiltonianGradients
eval_hamiltonian_gradients(const OcpModel &model, double t, double tau,
                           const VectorCRef &x, const VectorCRef &lambda,
                           const VectorCRef &u, const VectorCRef &mu,
                           const VectorCRef &p) {
  const ModelDimensions d = model.dimensions();
  check_stage_args(d, x, u, p, "eval_hamiltonian_gradients");
  require_size(lambda, d.n_x, "eval_hamiltonian_gradients lambda");
  require_size(mu, d.m_c, "eval_hamiltonian_gradients mu");
  HamiltonianGradients g{model.hamiltonian_x(t, tau, x, lambda, u, mu, p),
                         model.hamiltonian_u(t, tau, x, lambda, u, mu, p),
                         model.hamiltonian_p(t, tau, x, lambda, u, mu, p)};
  require_size(g.x, d.n_x, "H_x result");
  require_size(g.u, d.m_u, "H_u result");
  require_size(g.p, d.m_p, "H_p result");
  return g;
}

} // namespace cgmres
