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

#include "cgmres/min_time_model.hpp"

#include <algorithm>
#include <cmath>

namespace cgmres {

double MinTimeModel::band_center(double t, double tau, double p) const {
  return c_.c0 + c_.c1 * std::sin(c_.omega * (t + tau * p));
}

Vector MinTimeModel::dynamics(double, double, const VectorCRef &x,
                              const VectorCRef &u, const VectorCRef &p) const {
  const double speed = p[0] * (c_.A * x[0] + c_.B);
  return Vector{{speed * std::cos(u[0]), speed * std::sin(u[0])}};
}

Vector MinTimeModel::plant_dynamics(double, const VectorCRef &x,
                                    const VectorCRef &u,
                                    const VectorCRef &) const {
  const double speed = c_.A * x[0] + c_.B;
  return Vector{{speed * std::cos(u[0]), speed * std::sin(u[0])}};
}

Vector MinTimeModel::constraint(double t, double tau, const VectorCRef &,
                                const VectorCRef &u,
                                const VectorCRef &p) const {
  const double du = u[0] - band_center(t, tau, p[0]);
  return Vector::Constant(1, du * du + u[1] * u[1] - c_.r_u * c_.r_u);
}

Vector MinTimeModel::terminal_constraint(const VectorCRef &x,
                                         const VectorCRef &) const {
  return Vector{{x[0] - c_.x_f, x[1] - c_.y_f}};
}

double MinTimeModel::terminal_cost(const VectorCRef &,
                                   const VectorCRef &p) const {
  return p[0];
}

double MinTimeModel::running_cost(double, double, const VectorCRef &,
                                  const VectorCRef &u,
                                  const VectorCRef &p) const {
  return -c_.w_d * p[0] * u[1];
}

ControlVector MinTimeModel::initial_guess(const ProblemDims &dims, double t0,
                                          const VectorCRef &) const {
  ControlVector U(dims);
  const double p_guess = 1.0;
  const double dtau = horizon_length() / static_cast<double>(dims.N);
  for (Index i = 0; i < dims.N; ++i) {
    const double tau = static_cast<double>(i) * dtau;
    U.u(i)[0] = band_center(t0, tau, p_guess);
    U.u(i)[1] = c_.r_u;
    U.mu(i)[0] = c_.w_d * p_guess / (2.0 * c_.r_u);
  }
  U.nu().setZero();
  U.p()[0] = p_guess;
  return U;
}

double MinTimeModel::max_step_fraction(const ControlVector &U,
                                       const VectorCRef &dU) const {
  require_size(dU, U.size(), "max_step_fraction");
  const ProblemDims &dims = U.dims();
  double alpha = 1.0;
  auto limit = [&](double value, double change) {
    if (value > 0.0 && change < 0.0) {
      alpha = std::min(alpha, -0.95 * value / change);
    }
  };
  for (Index i = 0; i < dims.N; ++i) {
    limit(U.u(i)[1], dU[dims.u_offset(i) + 1]);
    limit(U.mu(i)[0], dU[dims.mu_offset(i)]);
  }
  return alpha;
}

std::optional<ControlBand> MinTimeModel::control_band(double t,
                                                      const VectorCRef &p) const {
  const double center = band_center(t, 0.0, p.size() > 0 ? p[0] : 0.0);
  return ControlBand{0, center - c_.r_u, center + c_.r_u};
}

Vector MinTimeModel::hamiltonian_x(double, double, const VectorCRef &,
                                   const VectorCRef &lambda,
                                   const VectorCRef &u,
                                   const VectorCRef &,
                                   const VectorCRef &p) const {
  const double along =
      std::cos(u[0]) * lambda[0] + std::sin(u[0]) * lambda[1];
  return Vector{{p[0] * c_.A * along, 0.0}};
}

Vector MinTimeModel::hamiltonian_u(double t, double tau, const VectorCRef &x,
                                   const VectorCRef &lambda,
                                   const VectorCRef &u, const VectorCRef &mu,
                                   const VectorCRef &p) const {
  const double speed = p[0] * (c_.A * x[0] + c_.B);
  const double across =
      -std::sin(u[0]) * lambda[0] + std::cos(u[0]) * lambda[1];
  const double du = u[0] - band_center(t, tau, p[0]);
  return Vector{{speed * across + 2.0 * du * mu[0],
                 2.0 * mu[0] * u[1] - c_.w_d * p[0]}};
}

Vector MinTimeModel::hamiltonian_p(double t, double tau, const VectorCRef &x,
                                   const VectorCRef &lambda,
                                   const VectorCRef &u, const VectorCRef &mu,
                                   const VectorCRef &p) const {
  const double along =
      std::cos(u[0]) * lambda[0] + std::sin(u[0]) * lambda[1];
  const double phase = c_.omega * (t + tau * p[0]);
  const double du = u[0] - band_center(t, tau, p[0]);
  // d c_u / d p = c1 cos(phase) omega tau
  const double dcu_dp = c_.c1 * std::cos(phase) * c_.omega * tau;
  return Vector::Constant(1, (c_.A * x[0] + c_.B) * along -
                                 2.0 * du * mu[0] * dcu_dp - c_.w_d * u[1]);
}

Vector MinTimeModel::terminal_cost_x(const VectorCRef &,
                                     const VectorCRef &) const {
  return Vector::Zero(2);
}

Vector MinTimeModel::terminal_cost_p(const VectorCRef &,
                                     const VectorCRef &) const {
  return Vector::Ones(1);
}

Matrix MinTimeModel::terminal_constraint_x(const VectorCRef &,
                                           const VectorCRef &) const {
  return Matrix::Identity(2, 2);
}

Matrix MinTimeModel::terminal_constraint_p(const VectorCRef &,
                                           const VectorCRef &) const {
  return Matrix::Zero(2, 1);
}

Matrix MinTimeModel::hamiltonian_uu(double, double, const VectorCRef &x,
                                    const VectorCRef &lambda,
                                    const VectorCRef &u, const VectorCRef &mu,
                                    const VectorCRef &p) const {
  const double speed = p[0] * (c_.A * x[0] + c_.B);
  const double along =
      std::cos(u[0]) * lambda[0] + std::sin(u[0]) * lambda[1];
  Matrix out = Matrix::Zero(2, 2);
  out(0, 0) = 2.0 * mu[0] - speed * along;
  out(1, 1) = 2.0 * mu[0];
  return out;
}

Matrix MinTimeModel::constraint_u(double t, double tau, const VectorCRef &,
                                  const VectorCRef &u,
                                  const VectorCRef &p) const {
  Matrix out(1, 2);
  out(0, 0) = 2.0 * (u[0] - band_center(t, tau, p[0]));
  out(0, 1) = 2.0 * u[1];
  return out;
}

} // namespace cgmres
