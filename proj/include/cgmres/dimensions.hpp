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

#include "cgmres/types.hpp"

namespace cgmres {

/// Per-stage sizes declared by a model, independent of the horizon grid.
struct ModelDimensions {
  Index n_x = 0;   // state
  Index m_u = 1;   // control per gridpoint
  Index m_c = 0;   // equality constraints per gridpoint
  Index m_psi = 0; // terminal constraints
  Index m_p = 0;   // free parameters

  bool operator==(const ModelDimensions &) const = default;
};

/**
 * Model sizes plus the horizon gridpoint count N.
 *
 * Also serves as the layout map of the stacked unknown
 *   U = [u_0 .. u_{N-1}, mu_0 .. mu_{N-1}, nu, p],
 * whose length is N (m_u + m_c) + l with border width l = m_psi + m_p.
 */
struct ProblemDims {
  ModelDimensions model;
  Index N = 1;

  ProblemDims() = default;
  ProblemDims(const ModelDimensions &dims, Index gridpoints)
      : model(dims), N(gridpoints) {
    validate();
  }

  Index n_x() const { return model.n_x; }
  Index m_u() const { return model.m_u; }
  Index m_c() const { return model.m_c; }
  Index m_psi() const { return model.m_psi; }
  Index m_p() const { return model.m_p; }

  Index stage_width() const { return model.m_u + model.m_c; }
  Index border_width() const { return model.m_psi + model.m_p; }
  Index unknowns() const { return N * stage_width() + border_width(); }

  Index u_offset(Index i) const { return i * model.m_u; }
  Index mu_offset(Index i) const { return N * model.m_u + i * model.m_c; }
  Index nu_offset() const { return N * stage_width(); }
  Index p_offset() const { return nu_offset() + model.m_psi; }
  Index border_offset() const { return nu_offset(); }

  void validate() const {
    if (model.n_x < 0 || model.m_c < 0 || model.m_psi < 0 || model.m_p < 0) {
      throw ContractViolation("ProblemDims: negative dimension");
    }
    if (model.m_u < 1) {
      throw ContractViolation("ProblemDims: m_u must be >= 1");
    }
    if (N < 1) {
      throw ContractViolation("ProblemDims: N must be >= 1");
    }
  }

  bool operator==(const ProblemDims &) const = default;
};

} // namespace cgmres
