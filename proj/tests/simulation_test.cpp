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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cgmres/min_time_model.hpp"
#include "cgmres/simulation.hpp"

namespace cgmres {
namespace {

namespace fs = std::filesystem;

const char *kHeader = "step,t,x,y,u,u_d,normF,gmres_iters,precond_seconds,"
                      "solve_seconds,regularized";

RunConfig short_run(int steps) {
  RunConfig cfg;
  cfg.N = 40;
  cfg.steps = steps;
  cfg.timings = false;
  return cfg;
}

std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    lines.push_back(line);
  }
  return lines;
}

std::string slurp(const fs::path &path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch_dir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("cgmres_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

StepRecord record(Index step, int iterations) {
  StepRecord r;
  r.step = step;
  r.gmres_iterations = iterations;
  return r;
}

TEST(RunSimulation, ZeroStepsWritesHeaderOnly) {
  std::ostringstream csv;
  const SimulationOutcome out = run_simulation(short_run(0), &csv);
  EXPECT_EQ(out.status, ExitStatus::Success);
  EXPECT_TRUE(out.log.records.empty());
  EXPECT_EQ(csv.str(), std::string(kHeader) + "\n");
}

TEST(RunSimulation, CsvRowsHaveElevenFields) {
  std::ostringstream csv;
  const SimulationOutcome out = run_simulation(short_run(25), &csv);
  ASSERT_EQ(out.status, ExitStatus::Success) << out.diagnostic;
  const auto lines = lines_of(csv.str());
  ASSERT_EQ(lines.size(), 26u);
  EXPECT_EQ(lines[0], kHeader);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    EXPECT_EQ(std::count(lines[k].begin(), lines[k].end(), ','), 10)
        << lines[k];
  }
  EXPECT_EQ(out.log.records.front().t, 0.0);
  EXPECT_EQ(out.log.records.front().state, Vector::Zero(2));
  for (const auto &r : out.log.records) {
    EXPECT_LE(r.residual_norm, 1e-2);
    EXPECT_EQ(r.precond_seconds, 0.0);
  }
}

TEST(RunSimulation, DeterministicWithoutTimings) {
  std::ostringstream a, b;
  run_simulation(short_run(40), &a);
  run_simulation(short_run(40), &b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunSimulation, StreamedRowsMatchWriteCsv) {
  std::ostringstream streamed, written;
  const SimulationOutcome out = run_simulation(short_run(10), &streamed);
  write_csv(out.log, written, false);
  EXPECT_EQ(streamed.str(), written.str());
}

TEST(RunSimulation, InvalidConfigIsUsageStatus) {
  RunConfig cfg = short_run(5);
  cfg.tol = -1.0;
  EXPECT_EQ(run_simulation(cfg).status, ExitStatus::Usage);
  cfg = short_run(5);
  cfg.model = "pendulum";
  EXPECT_EQ(run_simulation(cfg).status, ExitStatus::Usage);
}

TEST(RunSimulation, FiniteDifferenceModelTracksAnalytic) {
  RunConfig cfg = short_run(20);
  const SimulationOutcome analytic = run_simulation(cfg);
  cfg.model = "min_time_fd";
  const SimulationOutcome fd = run_simulation(cfg);
  ASSERT_EQ(fd.status, ExitStatus::Success) << fd.diagnostic;
  const auto &last_a = analytic.log.records.back();
  const auto &last_f = fd.log.records.back();
  EXPECT_LE((last_a.state - last_f.state).norm(), 1e-6);
}

TEST(CsvIo, RoundTrip) {
  std::ostringstream csv;
  const SimulationOutcome out = run_simulation(short_run(8), &csv);
  std::istringstream in(csv.str());
  const SimulationLog back = read_csv(in, 2);
  EXPECT_EQ(back.state_names, out.log.state_names);
  EXPECT_EQ(back.control_names, out.log.control_names);
  ASSERT_EQ(back.records.size(), out.log.records.size());
  for (std::size_t k = 0; k < back.records.size(); ++k) {
    const auto &a = out.log.records[k];
    const auto &b = back.records[k];
    EXPECT_EQ(a.step, b.step);
    EXPECT_EQ(a.t, b.t);
    EXPECT_EQ(a.state, b.state);
    EXPECT_EQ(a.control, b.control);
    EXPECT_EQ(a.residual_norm, b.residual_norm);
    EXPECT_EQ(a.gmres_iterations, b.gmres_iterations);
  }
}

TEST(CsvIo, MalformedInputIsRejected) {
  std::istringstream no_header("");
  EXPECT_THROW(read_csv(no_header, 2), UsageError);
  std::istringstream short_row(std::string(kHeader) + "\n0,0,0\n");
  EXPECT_THROW(read_csv(short_row, 2), UsageError);
  std::istringstream bad_number(std::string(kHeader) +
                                "\n0,zero,0,0,0,0,0,1,0,0,0\n");
  EXPECT_THROW(read_csv(bad_number, 2), UsageError);
}

TEST(ConfigFile, ParsesKeys) {
  std::istringstream in("# benchmark\nN = 50\n\ndt=0.004\nprecond = none\n"
                        "kmax = 30\ntimings = false\nmodel = min_time_fd\n");
  const RunConfig cfg = parse_config(in);
  EXPECT_EQ(cfg.N, 50);
  EXPECT_DOUBLE_EQ(cfg.dt, 0.004);
  EXPECT_EQ(cfg.precond, PrecondMode::None);
  EXPECT_EQ(cfg.k_max, 30);
  EXPECT_FALSE(cfg.timings);
  EXPECT_EQ(cfg.model, "min_time_fd");
  EXPECT_DOUBLE_EQ(cfg.tol, 1e-5);
}

TEST(ConfigFile, RejectsUnknownKeysAndValues) {
  std::istringstream unknown("horizon = 3\n");
  EXPECT_THROW(parse_config(unknown), UsageError);
  std::istringstream bad("N = many\n");
  EXPECT_THROW(parse_config(bad), UsageError);
  EXPECT_THROW(parse_precond_mode("ilu"), UsageError);
  EXPECT_EQ(parse_precond_mode(to_string(PrecondMode::Sparse)),
            PrecondMode::Sparse);
}

TEST(Compare, IdenticalLogsGiveUnitRatio) {
  SimulationLog log;
  for (int k = 0; k < 5; ++k) {
    log.records.push_back(record(k, 3 + k));
  }
  const Comparison cmp = compare_logs(log, log);
  EXPECT_EQ(cmp.rows.size(), 5u);
  EXPECT_EQ(cmp.min_ratio, 1.0);
  EXPECT_EQ(cmp.median_ratio, 1.0);
  EXPECT_EQ(cmp.max_ratio, 1.0);
}

TEST(Compare, RatioIsBOverA) {
  SimulationLog a, b;
  a.records = {record(0, 2), record(1, 4), record(2, 0), record(3, 5)};
  b.records = {record(0, 10), record(1, 8), record(2, 7)};
  const Comparison cmp = compare_logs(a, b);
  ASSERT_EQ(cmp.rows.size(), 2u);
  EXPECT_EQ(cmp.rows[0].ratio, 5.0);
  EXPECT_EQ(cmp.rows[1].ratio, 2.0);
  EXPECT_EQ(cmp.min_ratio, 2.0);
  EXPECT_EQ(cmp.max_ratio, 5.0);
  EXPECT_EQ(cmp.median_ratio, 3.5);
}

TEST(Compare, MismatchedRunsAreRejected) {
  RunConfig a = short_run(5), b = short_run(5);
  b.N = 41;
  EXPECT_THROW(compare_runs(a, b), UsageError);
}

TEST(Compare, PreconditionerReducesIterations) {
  RunConfig sparse = short_run(10), none = short_run(10);
  none.precond = PrecondMode::None;
  const Comparison cmp = compare_runs(sparse, none);
  ASSERT_FALSE(cmp.rows.empty());
  EXPECT_GT(cmp.median_ratio, 1.0);
  std::ostringstream out;
  write_comparison_csv(cmp, out);
  EXPECT_EQ(lines_of(out.str()).front(), "step,iters_a,iters_b,ratio");
}

TEST(Plots, SingleRecordProducesWellFormedFiles) {
  const fs::path dir = scratch_dir("single");
  const SimulationOutcome out = run_simulation(short_run(1));
  emit_plots(out.log, MinTimeModel(), dir);
  for (const char *name : {"trajectory.svg", "control.svg", "iterations.svg"}) {
    const std::string text = slurp(dir / name);
    EXPECT_EQ(text.rfind("<svg ", 0), 0u) << name;
    EXPECT_NE(text.find("</svg>\n"), std::string::npos) << name;
    EXPECT_EQ(text.find("nan"), std::string::npos) << name;
  }
  fs::remove_all(dir);
}

TEST(Plots, ByteIdenticalAcrossRuns) {
  const fs::path a = scratch_dir("plots_a"), b = scratch_dir("plots_b");
  emit_plots(run_simulation(short_run(30)).log, MinTimeModel(), a);
  emit_plots(run_simulation(short_run(30)).log, MinTimeModel(), b);
  for (const char *name : {"trajectory.svg", "control.svg", "iterations.svg"}) {
    EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Plots, EmptyLogStillRenders) {
  const fs::path dir = scratch_dir("empty");
  emit_plots(SimulationLog{}, MinTimeModel(), dir);
  EXPECT_TRUE(fs::exists(dir / "control.svg"));
  fs::remove_all(dir);
}

TEST(Models, RegistryRejectsUnknownNames) {
  EXPECT_THROW(make_model("pendulum"), UsageError);
  for (const auto &name : registered_models()) {
    const ModelEntry entry = make_model(name);
    EXPECT_EQ(entry.initial_state.size(), entry.model->dimensions().n_x);
  }
}

} // namespace
} // namespace cgmres
