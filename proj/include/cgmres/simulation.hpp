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

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cgmres/continuation.hpp"

namespace cgmres {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Process exit codes of the simulator.
enum class ExitStatus : int {
  Success = 0,
  Usage = 1,
  Initialization = 2,
  Numeric = 3,
};

struct RunConfig {
  std::string model = "min_time";
  Index N = 100;
  double dt = 1.0 / 500.0;
  double h = 1e-8;
  double tol = 1e-5;
  int k_max = 100;
  PrecondMode precond = PrecondMode::Sparse;
  int steps = 1000;
  std::string out_dir = ".";
  unsigned seed = 0;
  /// false writes zero timing columns (golden-file comparisons).
  bool timings = true;

  ContinuationConfig continuation() const;
  /// Throws UsageError on non-positive numerics or an unknown model.
  void validate() const;
};

/// Applies `key = value` lines (blank lines and '#' comments ignored) on top
/// of `base`. Keys: model, N, dt, h, tol, kmax, precond, steps, out, seed,
/// timings. Throws UsageError on unknown keys or bad values.
RunConfig parse_config(std::istream &in, RunConfig base = {});

PrecondMode parse_precond_mode(const std::string &text);
std::string to_string(PrecondMode mode);

/// A registered model and its default initial plant state.
struct ModelEntry {
  std::shared_ptr<const OcpModel> model;
  Vector initial_state;
};

/// "min_time" (analytic derivatives) and "min_time_fd" (finite-difference
/// adapter over the same primitives).
ModelEntry make_model(const std::string &name);
std::vector<std::string> registered_models();

struct StepRecord {
  Index step = 0;
  double t = 0.0;
  Vector state;
  Vector control;
  double residual_norm = 0.0;
  int gmres_iterations = 0;
  double precond_seconds = 0.0;
  double solve_seconds = 0.0;
  bool regularized = false;
  bool precond_fallback = false;
  /// Horizon parameters after the update (t_f for the benchmark).
  Vector parameters;
};

struct SimulationLog {
  std::vector<std::string> state_names;
  std::vector<std::string> control_names;
  std::vector<StepRecord> records;
};

struct SimulationOutcome {
  SimulationLog log;
  ExitStatus status = ExitStatus::Success;
  std::string diagnostic;
  double initial_residual = 0.0;
};

/**
 * Closed-loop run: initialize U at the model's initial state, then `steps`
 * continuation updates, each followed by an Euler step of the plant. When
 * `csv` is given, rows are written and flushed as steps complete. A step
 * whose preconditioned solve fails is retried without preconditioning.
 * Failures do not throw; they set `status` and keep the partial log.
 */
SimulationOutcome run_simulation(const RunConfig &cfg,
                                 std::ostream *csv = nullptr);

/// Header: step,t,<states>,<controls>,normF,gmres_iters,precond_seconds,
/// solve_seconds,regularized.
std::string csv_header(const SimulationLog &log);
void write_csv_row(const StepRecord &record, std::ostream &out, bool timings);
void write_csv(const SimulationLog &log, std::ostream &out,
               bool timings = true);
void write_csv(const SimulationLog &log, const std::filesystem::path &path,
               bool timings = true);
/// Parses what write_csv produced; the first `state_columns` columns after
/// `t` are states, the rest up to normF are controls. Throws UsageError on
/// malformed input.
SimulationLog read_csv(std::istream &in, Index state_columns);

/// Writes trajectory.svg, control.svg and iterations.svg into `outdir`.
void emit_plots(const SimulationLog &log, const OcpModel &model,
                const std::filesystem::path &outdir);

struct ComparisonRow {
  Index step = 0;
  int iterations_a = 0;
  int iterations_b = 0;
  double ratio = 0.0; // iterations_b / iterations_a
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
};

/// Step-wise iteration ratios over the common prefix of two logs. Steps
/// where run A used zero iterations are skipped.
Comparison compare_logs(const SimulationLog &a, const SimulationLog &b);

/// Runs both configurations and compares them. Configurations may differ
/// only in the preconditioner mode (and output directory); otherwise throws
/// UsageError.
Comparison compare_runs(const RunConfig &a, const RunConfig &b);

void write_comparison_csv(const Comparison &cmp, std::ostream &out);

} // namespace cgmres
