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

#include "cgmres/ocp_model.hpp"

namespace cgmres {

struct MinTimeConstants {
  double A = 1.0;
  double B = 1.0;
  double x_f = 1.0;
  double y_f = 1.0;
  double c0 = 0.8;
  double c1 = 0.3;
  double omega = 20.0;
  double r_u = 0.2;
  double w_d = 0.005;
};

/**
 * @brief Minimum-time planar motion to (x_f, y_f) with a banded heading.
 *
 * State (x, y), control (u, u_d), one constraint
 *   C = (u - c_u)^2 + u_d^2 - r_u^2,  c_u = c0 + c1 sin(omega (t + tau p)),
 * terminal constraint psi = (x - x_f, y - y_f), and a single parameter
 * p = t_f. The horizon is normalized to tau in [0, 1], so the dynamics are
 * scaled by p:
 *   dx/dtau = p (A x + B) cos u,  dy/dtau = p (A x + B) sin u.
 * The slack u_d turns the band c_u - r_u <= u <= c_u + r_u into an equality;
 * the running cost L = -w_d p u_d keeps it away from zero.
 */
class MinTimeModel final : public OcpModel {
public:
  MinTimeModel() = default;
  explicit MinTimeModel(const MinTimeConstants &c) : c_(c) {}

  const MinTimeConstants &constants() const { return c_; }

  /// c_u(t, tau, p); bounded in [c0 - c1, c0 + c1].
  double band_center(double t, double tau, double p) const;

  ModelDimensions dimensions() const override { return {2, 2, 1, 2, 1}; }

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

  /// The physical ODE, without the horizon scaling by p.
  Vector plant_dynamics(double t, const VectorCRef &x, const VectorCRef &u,
                        const VectorCRef &p) const override;

  /// u_i on the band center, u_d = r_u, mu chosen so the u_d rows vanish,
  /// nu = 0, p = 1.
  ControlVector initial_guess(const ProblemDims &dims, double t0,
                              const VectorCRef &x0) const override;

  /// Fraction-to-boundary rule keeping every u_d strictly positive.
  double max_step_fraction(const ControlVector &U,
                           const VectorCRef &dU) const override;

  std::optional<ControlBand> control_band(double t,
                                          const VectorCRef &p) const override;

  std::vector<std::string> state_names() const override { return {"x", "y"}; }
  std::vector<std::string> control_names() const override {
    return {"u", "u_d"};
  }

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

  Matrix hamiltonian_uu(double t, double tau, const VectorCRef &x,
                        const VectorCRef &lambda, const VectorCRef &u,
                        const VectorCRef &mu,
                        const VectorCRef &p) const override;
  Matrix constraint_u(double t, double tau, const VectorCRef &x,
                      const VectorCRef &u, const VectorCRef &p) const override;
  bool has_analytic_second_derivatives() const override { return true; }

private:
  MinTimeConstants c_;
};

/// MinTime with only its primitives exposed; wrap in FiniteDifferenceModel.
class MinTimePrimitives final : public OcpPrimitives {
public:
  MinTimePrimitives() = default;
  explicit MinTimePrimitives(const MinTimeConstants &c) : impl_(c) {}

  ModelDimensions dimensions() const override { return impl_.dimensions(); }
  Vector dynamics(double t, double tau, const VectorCRef &x,
                  const VectorCRef &u, const VectorCRef &p) const override {
    return impl_.dynamics(t, tau, x, u, p);
  }
  Vector constraint(double t, double tau, const VectorCRef &x,
                    const VectorCRef &u, const VectorCRef &p) const override {
    return impl_.constraint(t, tau, x, u, p);
  }
  Vector terminal_constraint(const VectorCRef &x,
                             const VectorCRef &p) const override {
    return impl_.terminal_constraint(x, p);
  }
  double terminal_cost(const VectorCRef &x,
                       const VectorCRef &p) const override {
    return impl_.terminal_cost(x, p);
  }
  double running_cost(double t, double tau, const VectorCRef &x,
                      const VectorCRef &u,
                      const VectorCRef &p) const override {
    return impl_.running_cost(t, tau, x, u, p);
  }
  Vector plant_dynamics(double t, const VectorCRef &x, const VectorCRef &u,
                        const VectorCRef &p) const override {
    return impl_.plant_dynamics(t, x, u, p);
  }
  ControlVector initial_guess(const ProblemDims &dims, double t0,
                              const VectorCRef &x0) const override {
    return impl_.initial_guess(dims, t0, x0);
  }
  double max_step_fraction(const ControlVector &U,
                           const VectorCRef &dU) const override {
    return impl_.max_step_fraction(U, dU);
  }
  std::optional<ControlBand> control_band(double t,
                                          const VectorCRef &p) const override {
    return impl_.control_band(t, p);
  }
  std::vector<std::string> state_names() const override {
    return impl_.state_names();
  }
  std::vector<std::string> control_names() const override {
    return impl_.control_names();
  }

private:
  MinTimeModel impl_;
};

} // namespace cgmres
