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

#include "cgmres/dimensions.hpp"

namespace cgmres {

/// The stacked unknown U with block views following ProblemDims' layout.
class ControlVector {
public:
  ControlVector() = default;
  explicit ControlVector(const ProblemDims &dims)
      : dims_(dims), data_(Vector::Zero(dims.unknowns())) {}
  ControlVector(const ProblemDims &dims, Vector data)
      : dims_(dims), data_(std::move(data)) {
    require_size(data_, dims_.unknowns(), "ControlVector");
  }

  const ProblemDims &dims() const { return dims_; }
  Index size() const { return data_.size(); }

  const Vector &data() const { return data_; }
  Vector &data() { return data_; }

  auto u(Index i) { return data_.segment(dims_.u_offset(i), dims_.m_u()); }
  auto u(Index i) const {
    return data_.segment(dims_.u_offset(i), dims_.m_u());
  }
  auto mu(Index i) { return data_.segment(dims_.mu_offset(i), dims_.m_c()); }
  auto mu(Index i) const {
    return data_.segment(dims_.mu_offset(i), dims_.m_c());
  }
  auto nu() { return data_.segment(dims_.nu_offset(), dims_.m_psi()); }
  auto nu() const { return data_.segment(dims_.nu_offset(), dims_.m_psi()); }
  auto p() { return data_.segment(dims_.p_offset(), dims_.m_p()); }
  auto p() const { return data_.segment(dims_.p_offset(), dims_.m_p()); }

private:
  ProblemDims dims_;
  Vector data_;
};

} // namespace cgmres
