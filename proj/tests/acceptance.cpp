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

// Acceptance suite for the benchmark. Prints one PASS/FAIL line per
// criterion; with arguments, runs only the listed criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cgmres/continuation.hpp"
#include "cgmres/dense_oracle.hpp"
#include "cgmres/precond.hpp"
#include "cgmres/simulation.hpp"
#include "test_support.hpp"

namespace {

using namespace cgmres;
using testing::benchmark_point;
using testing::Rng;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *format, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunConfig benchmark_config(PrecondMode mode) {
  RunConfig cfg;
  cfg.N = 100;
  cfg.dt = 1.0 / 500.0;
  cfg.h = 1e-8;
  cfg.tol = 1e-5;
  cfg.steps = 1000;
  cfg.precond = mode;
  return cfg;
}

const SimulationOutcome &benchmark_run() {
  static const SimulationOutcome run =
      run_simulation(benchmark_config(PrecondMode::Sparse));
  return run;
}

Verdict symmetry() {
  double worst = 0.0;
  for (Index N : {5, 10, 20}) {
    const auto op = benchmark_point(N);
    const Matrix J = build_dense_jacobian(op.model, op.U, op.x, op.t, 1e-5,
                                          DifferenceScheme::Central);
    worst = std::max(worst, symmetry_defect(J));
  }
  return {worst <= 1e-5, fmt("max symmetry defect %.3e (limit 1e-5)", worst)};
}

Verdict oracle_equivalence() {
  double worst = 0.0;
  for (Index N : {5, 10, 20}) {
    const auto op = benchmark_point(N);
    const double dt = 1.0 / 500.0;
    const Vector x1 =
        propagate_state(op.model, op.x, op.U.u(0), op.t, dt, op.U.p());
    ContinuationConfig cfg;
    cfg.tol = 1e-8;
    const StepResult r = continuation_step(op.model, op.U, x1, dt, cfg);
    const Matrix J = build_dense_jacobian(op.model, op.U, x1, dt, cfg.h);
    const Vector dU = dense_solve(J, residual_b(op.model, op.U, x1, dt));
    const Vector step = r.U.data() - op.U.data();
    worst = std::max(worst, (step - dU).lpNorm<Eigen::Infinity>());
  }
  return {worst <= 1e-4,
          fmt("max |dU_gmres - dU_dense|_inf %.3e (limit 1e-4)", worst)};
}

SparsePreconditioner assemble_at(const testing::OperatingPoint &op) {
  HorizonTrajectory trajectory;
  const FdOperator A(op.model, op.U, op.x, op.t, 1e-8, &trajectory);
  return assemble_preconditioner(op.model, op.U, op.x, op.t, trajectory, A);
}

Verdict round_trip() {
  const auto op = benchmark_point(100);
  const SparsePreconditioner M = assemble_at(op);
  const FactoredPreconditioner F = factorize(M);
  Rng rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const Vector v = rng.vector(M.dims.unknowns());
    const Vector back = apply_inverse(F, M.multiply(v));
    worst = std::max(worst, (back - v).norm() / v.norm());
  }
  return {worst <= 1e-10 && !F.regularized(),
          fmt("max relative error %.3e (limit 1e-10), regularized blocks %g",
              worst, static_cast<double>(F.regularized_blocks()))};
}

Verdict approximation_order() {
  double max_entry[2], inf_norm[2];
  const Index sizes[2] = {50, 100};
  for (int k = 0; k < 2; ++k) {
    const auto op = benchmark_point(sizes[k]);
    const Matrix J = build_dense_jacobian(op.model, op.U, op.x, op.t, 1e-6,
                                          DifferenceScheme::Central);
    const Matrix D = J - assemble_at(op).materialize();
    max_entry[k] = D.cwiseAbs().maxCoeff();
    inf_norm[k] = D.cwiseAbs().rowwise().sum().maxCoeff();
  }
  const double ratio = max_entry[0] / max_entry[1];
  const double inf_ratio = inf_norm[0] / inf_norm[1];
  return {ratio >= 1.5 && ratio <= 2.5,
          fmt("max-entry ratio %.3f (%.3e / %.3e), band [1.5, 2.5]; "
              "infinity-norm ratio %.3f",
              ratio, max_entry[0], max_entry[1], inf_ratio)};
}

Verdict iteration_counts() {
  const SimulationOutcome &sparse = benchmark_run();
  if (sparse.status != ExitStatus::Success) {
    return {false, "preconditioned run failed: " + sparse.diagnostic};
  }
  const SimulationOutcome none =
      run_simulation(benchmark_config(PrecondMode::None));
  if (none.status != ExitStatus::Success) {
    return {false, "unpreconditioned run failed: " + none.diagnostic};
  }
  double total = 0.0;
  for (const auto &r : sparse.log.records) {
    total += r.gmres_iterations;
  }
  const double mean = total / static_cast<double>(sparse.log.records.size());
  const Comparison cmp = compare_logs(sparse.log, none.log);
  return {mean <= 3.0 && cmp.median_ratio >= 4.0,
          fmt("mean preconditioned iterations %.3f (limit 3); median ratio "
              "%.2f (limit >= 4), range [%.2f, %.2f]",
              mean, cmp.median_ratio, cmp.min_ratio, cmp.max_ratio)};
}

Verdict residual_tracking() {
  const SimulationOutcome &run = benchmark_run();
  if (run.status != ExitStatus::Success) {
    return {false, "run failed: " + run.diagnostic};
  }
  double worst = 0.0;
  for (const auto &r : run.log.records) {
    worst = std::max(worst, r.residual_norm);
  }
  return {worst <= 1e-3 && run.log.records.size() == 1000,
          fmt("max ||F|| %.3e over %g steps (limit 1e-3)", worst,
              static_cast<double>(run.log.records.size()))};
}

Verdict linear_scaling() {
  const Index sizes[3] = {100, 200, 400};
  std::vector<testing::OperatingPoint> points;
  for (Index N : sizes) {
    points.push_back(benchmark_point(N));
  }
  // Repetitions cycle through the sizes so that drifting machine load
  // affects all three alike; the first cycle is a warm-up.
  std::vector<double> samples[3];
  double sink = 0.0;
  for (int rep = 0; rep <= 20; ++rep) {
    for (int k = 0; k < 3; ++k) {
      const auto &op = points[static_cast<std::size_t>(k)];
      const Vector r = Vector::Ones(op.U.size());
      const auto start = Clock::now();
      const FactoredPreconditioner F = factorize(assemble_at(op));
      sink += apply_inverse(F, r)[0];
      if (rep > 0) {
        samples[k].push_back(seconds_since(start));
      }
    }
  }
  if (!std::isfinite(sink)) {
    return {false, "non-finite preconditioner output"};
  }
  double times[3];
  for (int k = 0; k < 3; ++k) {
    times[k] = median(samples[k]);
  }
  const double r1 = times[1] / times[0], r2 = times[2] / times[1];
  return {r1 <= 2.5 && r2 <= 2.5,
          fmt("median times %.3e / %.3e / %.3e s; ratios %.2f", times[0],
              times[1], times[2], r1) +
              fmt(", %.2f (limit 2.5)", r2)};
}

Verdict gmres_conformance() {
  Rng rng(88);
  double solve_err = 0.0, ortho = 0.0, ls_err = 0.0;
  for (Index m : {10, 25, 50}) {
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix A = rng.conditioned(m, 50.0);
      const Vector b = rng.vector(m);
      GmresOptions options;
      options.k_max = static_cast<int>(m);
      options.tol = 1e-13;
      options.keep_basis = true;
      const GmresReport report = gmres_solve(MatrixOperator(A), b,
                                             Vector::Zero(m), options,
                                             IdentityPreconditioner(m));
      const Vector x = dense_solve(A, b);
      solve_err = std::max(solve_err, (report.solution - x).norm() / x.norm());

      // At most m Krylov vectors can be orthonormal in R^m.
      const Index k = report.iterations;
      const Index cols = std::min<Index>(report.basis.cols(), m);
      const Matrix Vk = report.basis.leftCols(cols);
      const Matrix gram = Vk.transpose() * Vk;
      ortho = std::max(
          ortho, (gram - Matrix::Identity(cols, cols)).cwiseAbs().maxCoeff());

      // Explicit least squares on a truncated Hessenberg, where the residual
      // is still far from zero.
      const Index kk = std::max<Index>(1, k / 2);
      const Matrix H = report.hessenberg.topLeftCorner(kk + 1, kk);
      Vector rhs = Vector::Zero(kk + 1);
      rhs[0] = report.initial_residual;
      const Vector y = H.householderQr().solve(rhs);
      const double explicit_res = (H * y - rhs).norm();
      const auto est = residual_estimate(H, report.initial_residual, kk);
      ls_err = std::max(ls_err,
                        std::abs(est.residual - explicit_res) / explicit_res);
    }
  }
  return {solve_err <= 1e-8 && ortho <= 1e-8 && ls_err <= 1e-12,
          fmt("solve rel err %.3e (1e-8), orthonormality %.3e (1e-8), "
              "residual estimate rel err %.3e (1e-12)",
              solve_err, ortho, ls_err)};
}

Verdict closed_form_inverse() {
  Rng rng(99);
  double worst = 0.0;
  int checked = 0;
  while (checked < 100) {
    const double m11 = rng.uniform(-2, 2), m22 = rng.uniform(-2, 2),
                 m13 = rng.uniform(-2, 2), m23 = rng.uniform(-2, 2);
    Eigen::Matrix3d W;
    W << m11, 0, m13, 0, m22, m23, m13, m23, 0;
    if (std::abs(W.determinant()) < 1e-3) {
      continue;
    }
    const auto inv = closed_form_block_inverse(m11, m22, m13, m23);
    if (!inv) {
      return {false, "closed form reported a nonsingular block as singular"};
    }
    const Eigen::Matrix3d lu = Eigen::PartialPivLU<Eigen::Matrix3d>(W).inverse();
    worst = std::max(worst, (*inv - lu).norm() / lu.norm());
    ++checked;
  }
  return {worst <= 1e-12,
          fmt("max relative difference %.3e over 100 blocks (limit 1e-12)",
              worst)};
}

Verdict end_to_end() {
  const SimulationOutcome &run = benchmark_run();
  if (run.status != ExitStatus::Success) {
    return {false, "run failed: " + run.diagnostic};
  }
  const MinTimeModel model;
  double closest = INFINITY, excess = -INFINITY;
  for (const auto &r : run.log.records) {
    closest = std::min(closest, std::hypot(r.state[0] - 1.0, r.state[1] - 1.0));
    const auto band = model.control_band(r.t, r.parameters);
    const double u = r.control[band->component];
    excess = std::max({excess, band->lower - u, u - band->upper});
  }
  return {closest <= 0.05 && excess <= 0.02,
          fmt("closest approach to target %.4f (limit 0.05); max band "
              "excess %.3e (limit 0.02)",
              closest, excess)};
}

struct Criterion {
  std::function<Verdict()> check;
  double budget_seconds;
};

} // namespace

int main(int argc, char **argv) {
  const std::map<int, Criterion> criteria = {
      {1, {symmetry, 10.0}},
      {2, {oracle_equivalence, 10.0}},
      {3, {round_trip, 1.0}},
      {4, {approximation_order, 60.0}},
      {5, {iteration_counts, 300.0}},
      {6, {residual_tracking, 300.0}},
      {7, {linear_scaling, 60.0}},
      {8, {gmres_conformance, 60.0}},
      {9, {closed_form_inverse, 1.0}},
      {10, {end_to_end, 300.0}},
  };
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) {
    const int id = std::atoi(argv[k]);
    if (!criteria.count(id)) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[k]);
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty()) {
    for (const auto &entry : criteria) {
      selected.push_back(entry.first);
    }
  }

  int failures = 0;
  for (int id : selected) {
    const Criterion &c = criteria.at(id);
    const auto start = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(start);
    if (elapsed > c.budget_seconds) {
      v.pass = false;
      v.detail += fmt("; runtime %.2f s over budget %.0f s", elapsed,
                      c.budget_seconds);
    }
    std::printf("%s criterion %d: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id,
                v.detail.c_str(), elapsed);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
