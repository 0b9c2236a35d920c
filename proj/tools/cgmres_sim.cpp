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

// Closed-loop C/GMRES simulator.
//
//   cgmres_sim run     [--config FILE] [--N 100] [--precond sparse|none] ...
//   cgmres_sim compare [same flags]   (sparse vs none, writes comparison.csv)

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cgmres/simulation.hpp"

namespace fs = std::filesystem;
using namespace cgmres;

namespace {

struct Overrides {
  std::string config;
  std::optional<Index> N;
  std::optional<double> dt;
  std::optional<double> h;
  std::optional<double> tol;
  std::optional<int> k_max;
  std::optional<std::string> precond;
  std::optional<int> steps;
  std::optional<std::string> out;
  std::optional<std::string> model;
  bool no_timings = false;
  bool no_plots = false;
};

void add_flags(CLI::App &cmd, Overrides &o) {
  // -h would clash with the difference-step flag --h
  cmd.set_help_flag("--help", "print this help message and exit");
  cmd.add_option("--config", o.config, "key = value configuration file");
  cmd.add_option("--N", o.N, "horizon gridpoints");
  cmd.add_option("--dt", o.dt, "sampling period");
  cmd.add_option("--h", o.h, "forward-difference step");
  cmd.add_option("--tol", o.tol, "GMRES relative tolerance");
  cmd.add_option("--kmax", o.k_max, "GMRES iteration cap");
  cmd.add_option("--precond", o.precond, "sparse or none");
  cmd.add_option("--steps", o.steps, "number of sampling steps");
  cmd.add_option("--out", o.out, "output directory");
  cmd.add_option("--model", o.model, "registered model name");
  cmd.add_flag("--no-timings", o.no_timings, "write zero timing columns");
  cmd.add_flag("--no-plots", o.no_plots, "skip SVG output");
}

RunConfig resolve(const Overrides &o) {
  RunConfig cfg;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) {
      throw UsageError("cannot open config file " + o.config);
    }
    cfg = parse_config(in, cfg);
  }
  if (o.N) cfg.N = *o.N;
  if (o.dt) cfg.dt = *o.dt;
  if (o.h) cfg.h = *o.h;
  if (o.tol) cfg.tol = *o.tol;
  if (o.k_max) cfg.k_max = *o.k_max;
  if (o.precond) cfg.precond = parse_precond_mode(*o.precond);
  if (o.steps) cfg.steps = *o.steps;
  if (o.out) cfg.out_dir = *o.out;
  if (o.model) cfg.model = *o.model;
  if (o.no_timings) cfg.timings = false;
  cfg.validate();
  return cfg;
}

void summarize(const SimulationOutcome &outcome, const RunConfig &cfg) {
  const auto &rec = outcome.log.records;
  double iters = 0.0, worst = 0.0;
  for (const auto &r : rec) {
    iters += r.gmres_iterations;
    worst = std::max(worst, r.residual_norm);
  }
  std::cout << "model " << cfg.model << ", N = " << cfg.N << ", precond "
            << to_string(cfg.precond) << ": " << rec.size() << " steps";
  if (!rec.empty()) {
    const auto &last = rec.back();
    std::cout << ", mean GMRES iterations " << iters / rec.size()
              << ", max ||F|| " << worst << ", final state ("
              << last.state.transpose() << ")";
  }
  std::cout << '\n';
}

int run_command(const Overrides &o) {
  const RunConfig cfg = resolve(o);
  fs::create_directories(cfg.out_dir);
  const fs::path csv_path = fs::path(cfg.out_dir) / "log.csv";
  std::ofstream csv(csv_path);
  if (!csv) {
    throw std::runtime_error("cannot write " + csv_path.string());
  }
  const SimulationOutcome outcome = run_simulation(cfg, &csv);
  csv.close();
  if (outcome.status != ExitStatus::Success) {
    std::cerr << "cgmres_sim: " << outcome.diagnostic << '\n';
    return static_cast<int>(outcome.status);
  }
  if (!o.no_plots && !outcome.log.records.empty()) {
    const ModelEntry entry = make_model(cfg.model);
    emit_plots(outcome.log, *entry.model, cfg.out_dir);
  }
  summarize(outcome, cfg);
  std::cout << "wrote " << csv_path.string() << '\n';
  return 0;
}

int compare_command(const Overrides &o) {
  RunConfig a = resolve(o);
  a.precond = PrecondMode::Sparse;
  RunConfig b = a;
  b.precond = PrecondMode::None;
  const Comparison cmp = compare_runs(a, b);
  fs::create_directories(a.out_dir);
  const fs::path path = fs::path(a.out_dir) / "comparison.csv";
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_comparison_csv(cmp, out);
  std::cout << "iteration ratio none/sparse over " << cmp.rows.size()
            << " steps: min " << cmp.min_ratio << ", median "
            << cmp.median_ratio << ", max " << cmp.max_ratio << '\n';
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Continuation/GMRES NMPC closed-loop simulator"};
  app.require_subcommand(1);
  Overrides run_opts, cmp_opts;
  CLI::App *run = app.add_subcommand("run", "simulate and log one run");
  add_flags(*run, run_opts);
  CLI::App *cmp =
      app.add_subcommand("compare", "iteration counts, sparse vs none");
  add_flags(*cmp, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return static_cast<int>(ExitStatus::Usage);
  }

  try {
    if (run->parsed()) {
      return run_command(run_opts);
    }
    return compare_command(cmp_opts);
  } catch (const UsageError &e) {
    std::cerr << "cgmres_sim: " << e.what() << '\n';
    return static_cast<int>(ExitStatus::Usage);
  } catch (const std::exception &e) {
    std::cerr << "cgmres_sim: " << e.what() << '\n';
    return static_cast<int>(ExitStatus::Numeric);
  }
}
