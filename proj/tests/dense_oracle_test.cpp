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

#include <gtest/gtest.h>

#include <sstream>

#include "cgmres/dense_oracle.hpp"
#include "test_support.hpp"

namespace cgmres {
namespace {

using testing::benchmark_point;
using testing::Rng;

TEST(FiniteDifferenceJacobian, AffineMapIsExact) {
  Rng rng(51);
  const Matrix G = rng.matrix(9, 9);
  const Vector c = rng.vector(9);
  const ResidualFunction F = [&](const Vector &U) -> Vector {
    return G * U + c;
  };
  for (auto scheme : {DifferenceScheme::Forward, DifferenceScheme::Central}) {
    const Matrix J = finite_difference_jacobian(F, rng.vector(9), 1e-6, scheme);
    EXPECT_LE((J - G).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(DenseJacobian, ColumnCount) {
  const auto op = benchmark_point(5);
  const Matrix J = build_dense_jacobian(op.model, op.U, op.x, op.t, 1e-6);
  EXPECT_EQ(J.rows(), 18);
  EXPECT_EQ(J.cols(), 18);
}

TEST(DenseJacobian, SymmetricAtBenchmarkPoint) {
  for (Index N : {5, 10}) {
    const auto op = benchmark_point(N);
    const Matrix J = build_dense_jacobian(op.model, op.U, op.x, op.t, 1e-5,
                                          DifferenceScheme::Central);
    EXPECT_LE(symmetry_defect(J), 1e-5) << "N = " << N;
  }
}

TEST(DenseJacobian, ForwardAsymmetryShrinksWithStep) {
  const auto op = benchmark_point(10);
  const double coarse = symmetry_defect(
      build_dense_jacobian(op.model, op.U, op.x, op.t, 1e-4));
  const double fine = symmetry_defect(
      build_dense_jacobian(op.model, op.U, op.x, op.t, 1e-5));
  EXPECT_GE(coarse / fine, 5.0);
  EXPECT_LE(coarse / fine, 20.0);
}

TEST(DenseJacobian, RefusesLargeProblems) {
  const MinTimeModel model;
  const ControlVector U(ProblemDims(model.dimensions(), 700));
  EXPECT_THROW(build_dense_jacobian(model, U, Vector::Zero(2), 0.0, 1e-6),
               OracleRefusal);
}

TEST(DenseSolve, Identity) {
  Rng rng(52);
  const Vector b = rng.vector(7);
  EXPECT_EQ(dense_solve(Matrix::Identity(7, 7), b), b);
}

TEST(DenseSolve, Diagonal) {
  const Vector x = dense_solve(2.0 * Matrix::Identity(5, 5), Vector::Ones(5));
  EXPECT_EQ(x, Vector::Constant(5, 0.5));
}

TEST(DenseSolve, RecoversConstructedSolution) {
  Rng rng(53);
  const Matrix A = rng.matrix(30, 30);
  const Vector x = rng.vector(30);
  EXPECT_LE((dense_solve(A, A * x) - x).norm(), 1e-9 * x.norm());
}

TEST(DenseSolve, SmallResidualAtHighCondition) {
  Rng rng(54);
  const Matrix A = rng.conditioned(40, 1e6);
  const Vector b = rng.vector(40);
  EXPECT_LE((A * dense_solve(A, b) - b).norm(), 1e-9 * b.norm());
}

TEST(DenseSolve, SingularMatrixIsReported) {
  Matrix A = Matrix::Identity(4, 4);
  A.row(2) = A.row(1);
  EXPECT_THROW(dense_solve(A, Vector::Ones(4)), SingularMatrixError);
  EXPECT_THROW(dense_solve(Matrix::Zero(3, 3), Vector::Ones(3)),
               SingularMatrixError);
}

TEST(SymmetryDefect, Examples) {
  EXPECT_EQ(symmetry_defect(Matrix::Identity(6, 6)), 0.0);
  const Matrix A = (Matrix(2, 2) << 0, 1, 0, 0).finished();
  EXPECT_EQ(symmetry_defect(A), 1.0);
}

TEST(DenseDump, OneRowPerLine) {
  const Matrix A = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6.5).finished();
  std::ostringstream out;
  write_dense_matrix(A, out);
  EXPECT_EQ(out.str(), "1 2 3\n4 5 6.5\n");
}

} // namespace
} // namespace cgmres
