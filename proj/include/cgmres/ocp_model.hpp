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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cgmres/control_vector.hpp"
#include "cgmres/dimensions.hpp"

namespace cgmres {

/// Admissible interval for one control component at a given time.
struct ControlBand {
  Index component = 0;
  double lower = 0.0;
  double upper = 0.0;
};

/**
 * @brief Problem primitives of a finite-horizon optimal control problem.
 *
 * Every evaluator receives the wall-clock time `t` of the current sample and
 * the horizon coordinate `tau` of the gridpoint separately, so time-varying
 * problems can mix both. Evaluators must be pure.
 */
class OcpPrimitives {
public:
  virtual ~OcpPrimitives() = default;

  virtual ModelDimensions dimensions() const = 0;

  /// Length of the horizon in the tau coordinate; the grid step is this / N.
  virtual double horizon_length() const { return 1.0; }

  virtual Vector dynamics(double t, double tau, const VectorCRef &x,
                          const VectorCRef &u, const VectorCRef &p) const = 0;
  virtual Vector constraint(double t, double tau, const VectorCRef &x,
                            const VectorCRef &u, const VectorCRef &p) const = 0;
  virtual Vector terminal_constraint(const VectorCRef &x,
                                     const VectorCRef &p) const = 0;
  virtual double terminal_cost(const VectorCRef &x,
                               const VectorCRef &p) const = 0;
  virtual double running_cost(double t, double tau, const VectorCRef &x,
                              const VectorCRef &u,
                              const VectorCRef &p) const = 0;

  /// Real-time plant dynamics used to propagate the closed loop. Defaults to
  /// the horizon dynamics at tau = 0.
  virtual Vector plant_dynamics(double t, const VectorCRef &x,
                                const VectorCRef &u,
                                const VectorCRef &p) const {
    return dynamics(t, 0.0, x, u, p);
  }

  /// Starting point for the initial nonlinear solve. Default: all zeros
  /// except p = 1.
  virtual ControlVector initial_guess(const ProblemDims &dims, double t0,
                                      const VectorCRef &x0) const;

  /// Largest alpha in (0, 1] such that U + alpha * dU stays on the branch
  /// of solutions the model intends (for example, a positive slack). Used
  /// by the initial nonlinear solve only. Default: no restriction.
  virtual double max_step_fraction(const ControlVector & /*U*/,
                                   const VectorCRef & /*dU*/) const {
    return 1.0;
  }

  /// Optional band on an applied control, used for plotting and checks.
  virtual std::optional<ControlBand> control_band(double /*t*/,
                                                  const VectorCRef & /*p*/) const {
    return std::nullopt;
  }

  virtual std::vector<std::string> state_names() const;
  virtual std::vector<std::string> control_names() const;
};

/**
 * @brief Full model contract: primitives plus analytic first derivatives.
 *
 * The Hamiltonian is H = L + lambda^T f + mu^T C. Gradients are returned as
 * column vectors (transposed derivatives). The second-derivative blocks used
 * by the preconditioner have forward-difference defaults; models with
 * closed forms should override them.
 */
class OcpModel : public OcpPrimitives {
public:
  double hamiltonian(double t, double tau, const VectorCRef &x,
                     const VectorCRef &lambda, const VectorCRef &u,
                     const VectorCRef &mu, const VectorCRef &p) const;

  virtual Vector hamiltonian_x(double t, double tau, const VectorCRef &x,
                               const VectorCRef &lambda, const VectorCRef &u,
                               const VectorCRef &mu,
                               const VectorCRef &p) const = 0;
  virtual Vector hamiltonian_u(double t, double tau, const VectorCRef &x,
                               const VectorCRef &lambda, const VectorCRef &u,
                               const VectorCRef &mu,
                               const VectorCRef &p) const = 0;
  virtual Vector hamiltonian_p(double t, double tau, const VectorCRef &x,
                               const VectorCRef &lambda, const VectorCRef &u,
                               const VectorCRef &mu,
                               const VectorCRef &p) const = 0;

  virtual Vector terminal_cost_x(const VectorCRef &x,
                                 const VectorCRef &p) const = 0;
  virtual Vector terminal_cost_p(const VectorCRef &x,
                                 const VectorCRef &p) const = 0;
  /// m_psi x n_x
  virtual Matrix terminal_constraint_x(const VectorCRef &x,
                                       const VectorCRef &p) const = 0;
  /// m_psi x m_p
  virtual Matrix terminal_constraint_p(const VectorCRef &x,
                                       const VectorCRef &p) const = 0;

  /// m_u x m_u. Default: forward difference of hamiltonian_u.
  virtual Matrix hamiltonian_uu(double t, double tau, const VectorCRef &x,
                                const VectorCRef &lambda, const VectorCRef &u,
                                const VectorCRef &mu,
                                const VectorCRef &p) const;
  /// m_c x m_u. Default: forward difference of constraint.
  virtual Matrix constraint_u(double t, double tau, const VectorCRef &x,
                              const VectorCRef &u, const VectorCRef &p) const;

  /// True when hamiltonian_uu and constraint_u are closed-form overrides.
  virtual bool has_analytic_second_derivatives() const { return false; }
};

/**
 * @brief Wraps a primitives-only model and supplies every first derivative
 * by central differences (step 1e-6) of H, phi and psi.
 */
class FiniteDifferenceModel final : public OcpModel {
public:
  explicit FiniteDifferenceModel(std::shared_ptr<const OcpPrimitives> base,
                                 double step = 1e-6);

  ModelDimensions dimensions() const override;
  double horizon_length() const override;
  Vector dynamics(double t, double tau, const VectorCRef &x,
                  const VectorCRef &u, const VectorCRef &p) const override;
  Vector constraint(double t, double tau, const VectorCRef &x,
                    const VectorCRef &u, const VectorCRef &p) const override;
  Vector terminal_constraint(const VectorCRef &x,
                             const VectorCRef &p) const override;
  double terminal_cost(const VectorCRef &x,
                       const VectorCRef &p) const override;
  double running_cost(double t, double tau, const VectorCRef &x,
                      const VectorCRef &u,
                      const VectorCRef &p) const override;
  Vector plant_dynamics(double t, const VectorCRef &x, const VectorCRef &u,
                        const VectorCRef &p) const override;
  ControlVector initial_guess(const ProblemDims &dims, double t0,
                              const VectorCRef &x0) const override;
  double max_step_fraction(const ControlVector &U,
                           const VectorCRef &dU) const override;
  std::optional<ControlBand> control_band(double t,
                                          const VectorCRef &p) const override;
  std::vector<std::string> state_names() const override;
  std::vector<std::string> control_names() const override;

  Vector hamiltonian_x(double t, double tau, const VectorCRef &x,
                       const VectorCRef &lambda, const VectorCRef &u,
                       const VectorCRef &mu,
                       const VectorCRef &p) const override;
  Vector hamiltonian_u(double t, double tau, const VectorCRef &x,
                       const VectorCRef &lambda, const VectorCRef &u,
                       const VectorCRef &mu,
                       const VectorCRef &p) const override;
  Vector hamiltonian_p(double t, double tau, const VectorCRef &x,
                       const VectorCRef &lambda, const VectorCRef &u,
                       const VectorCRef &mu,
                       const VectorCRef &p) const override;
  Vector terminal_cost_x(const VectorCRef &x,
                         const VectorCRef &p) const override;
  Vector terminal_cost_p(const VectorCRef &x,
                         const VectorCRef &p) const override;
  Matrix terminal_constraint_x(const VectorCRef &x,
                               const VectorCRef &p) const override;
  Matrix terminal_constraint_p(const VectorCRef &x,
                               const VectorCRef &p) const override;

private:
  std::shared_ptr<const OcpPrimitives> base_;
  double step_;
};

// Dimension-checked entry points. Each validates argument and result sizes
// against the model's declared dimensions and throws ContractViolation on
// mismatch.

Vector eval_dynamics(const OcpPrimitives &model, double t, double tau,
                     const VectorCRef &x, const VectorCRef &u,
                     const VectorCRef &p);

Vector eval_constraint(const OcpPrimitives &model, double t, double tau,
                       const VectorCRef &x, const VectorCRef &u,
                       const VectorCRef &p);

struct HamiltonianGradients {
  Vector x;
  Vector u;
  Vector p;
};

HamiltonianGradients
eval_hamiltonian_gradients(const OcpModel &model, double t, double tau,
                           const VectorCRef &x, const VectorCRef &lambda,
                           const VectorCRef &u, const VectorCRef &mu,
                           const VectorCRef &p);

/// Central-difference gradient of a scalar function.
template <typename Fn>
Vector central_gradient(Fn &&fn, const VectorCRef &at, double step) {
  Vector g(at.size());
  Vector probe = at;
  for (Index k = 0; k < at.size(); ++k) {
    const double orig = probe[k];
    probe[k] = orig + step;
    const double fp = fn(probe);
    probe[k] = orig - step;
    const double fm = fn(probe);
    probe[k] = orig;
    g[k] = (fp - fm) / (2.0 * step);
  }
  return g;
}

} // namespace cgmres
