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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace cgmres {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorCRef = Eigen::Ref<const Vector>;
using MatrixCRef = Eigen::Ref<const Matrix>;

// Argument shapes disagree with the declared problem dimensions.
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A recursion or evaluation produced NaN/Inf. `index()` is the horizon
// gridpoint where it happened, or -1 when not tied to one.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string &what, Index index = -1)
      : std::runtime_error(what), index_(index) {}
  Index index() const noexcept { return index_; }

private:
  Index index_;
};

// Requires `v` to have length `expected`, otherwise throws ContractViolation.
inline void require_size(const VectorCRef &v, Index expected,
                         const char *what) {
  if (v.size() != expected) {
    throw ContractViolation(std::string(what) + ": expected length " +
                            std::to_string(expected) + ", got " +
                            std::to_string(v.size()));
  }
}

} // namespace cgmres
