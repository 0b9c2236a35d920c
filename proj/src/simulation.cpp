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

#include "cgmres/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cgmres/min_time_model.hpp"

namespace cgmres {

namespace {

std::string shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string fixed6(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string &text, const std::string &what) {
  double value = 0.0;
  const char *begin = text.data();
  const char *end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    // from_chars rejects forms like "1/500"; accept a simple ratio.
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const double num = parse_double(trim(text.substr(0, slash)), what);
      const double den = parse_double(trim(text.substr(slash + 1)), what);
      return num / den;
    }
    throw UsageError("invalid number for " + what + ": '" + text + "'");
  }
  return value;
}

long long parse_integer(const std::string &text, const std::string &what) {
  long long value = 0;
  const char *begin = text.data();
  const char *end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw UsageError("invalid integer for " + what + ": '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string &text, const std::string &what) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "0" || text == "false" || text == "no" || text == "off") {
    return false;
  }
  throw UsageError("invalid boolean for " + what + ": '" + text + "'");
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == sep) {
    out.emplace_back();
  }
  return out;
}

double median_of(std::vector<double> values) {
  if (values.empty()) {
    return 0.0;
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

ContinuationConfig RunConfig::continuation() const {
  ContinuationConfig c;
  c.h = h;
  c.dt = dt;
  c.tol = tol;
  c.k_max = k_max;
  c.precond = precond;
  return c;
}

void RunConfig::validate() const {
  if (N < 1) {
    throw UsageError("N must be >= 1");
  }
  if (!(dt > 0.0) || !(h > 0.0) || !(tol > 0.0)) {
    throw UsageError("dt, h and tol must be positive");
  }
  if (k_max < 1) {
    throw UsageError("kmax must be >= 1");
  }
  if (steps < 0) {
    throw UsageError("steps must be >= 0");
  }
  const auto names = registered_models();
  if (std::find(names.begin(), names.end(), model) == names.end()) {
    throw UsageError("unknown model '" + model + "'");
  }
}

PrecondMode parse_precond_mode(const std::string &text) {
  if (text == "sparse") {
    return PrecondMode::Sparse;
  }
  if (text == "none") {
    return PrecondMode::None;
  }
  throw UsageError("precond must be 'sparse' or 'none', got '" + text + "'");
}

std::string to_string(PrecondMode mode) {
  return mode == PrecondMode::Sparse ? "sparse" : "none";
}

RunConfig parse_config(std::istream &in, RunConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "model") {
      cfg.model = value;
    } else if (key == "N") {
      cfg.N = static_cast<Index>(parse_integer(value, key));
    } else if (key == "dt") {
      cfg.dt = parse_double(value, key);
    } else if (key == "h") {
      cfg.h = parse_double(value, key);
    } else if (key == "tol") {
      cfg.tol = parse_double(value, key);
    } else if (key == "kmax") {
      cfg.k_max = static_cast<int>(parse_integer(value, key));
    } else if (key == "precond") {
      cfg.precond = parse_precond_mode(value);
    } else if (key == "steps") {
      cfg.steps = static_cast<int>(parse_integer(value, key));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "seed") {
      cfg.seed = static_cast<unsigned>(parse_integer(value, key));
    } else if (key == "timings") {
      cfg.timings = parse_bool(value, key);
    } else {
      throw UsageError("config line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

ModelEntry make_model(const std::string &name) {
  if (name == "min_time") {
    return {std::make_shared<MinTimeModel>(), Vector::Zero(2)};
  }
  if (name == "min_time_fd") {
    return {std::make_shared<FiniteDifferenceModel>(
                std::make_shared<MinTimePrimitives>()),
            Vector::Zero(2)};
  }
  throw UsageError("unknown model '" + name + "'");
}

std::vector<std::string> registered_models() {
  return {"min_time", "min_time_fd"};
}

SimulationOutcome run_simulation(const RunConfig &cfg, std::ostream *csv) {
  SimulationOutcome outcome;
  try {
    cfg.validate();
  } catch (const UsageError &e) {
    outcome.status = ExitStatus::Usage;
    outcome.diagnostic = e.what();
    return outcome;
  }
  const ModelEntry entry = make_model(cfg.model);
  const OcpModel &model = *entry.model;
  outcome.log.state_names = model.state_names();
  outcome.log.control_names = model.control_names();
  if (csv != nullptr) {
    *csv << csv_header(outcome.log) << '\n';
    csv->flush();
  }
  if (cfg.steps == 0) {
    return outcome;
  }

  const ContinuationConfig step_cfg = cfg.continuation();
  ControlVector U;
  try {
    InitResult init = initialize_U0(model, entry.initial_state, 0.0, cfg.N);
    outcome.initial_residual = init.residual_norm;
    U = std::move(init.U);
  } catch (const std::exception &e) {
    outcome.status = ExitStatus::Initialization;
    outcome.diagnostic = e.what();
    return outcome;
  }

  Vector x = entry.initial_state;
  for (int j = 0; j < cfg.steps; ++j) {
    const double t = static_cast<double>(j) * cfg.dt;
    StepRecord record;
    record.step = j;
    record.t = t;
    record.state = x;
    try {
      StepResult step;
      try {
        step = continuation_step(model, U, x, t, step_cfg);
      } catch (const StepError &) {
        if (step_cfg.precond == PrecondMode::None) {
          throw;
        }
        ContinuationConfig retry = step_cfg;
        retry.precond = PrecondMode::None;
        step = continuation_step(model, U, x, t, retry);
        step.precond_fallback = true;
      }
      record.control = step.u_applied;
      record.residual_norm = step.residual_norm;
      record.gmres_iterations = step.report.iterations;
      record.precond_seconds = step.precond_seconds;
      record.solve_seconds = step.solve_seconds;
      record.regularized = step.regularized;
      record.precond_fallback = step.precond_fallback;
      U = std::move(step.U);
      record.parameters = U.p();
      x = propagate_state(model, x, record.control, t, cfg.dt, U.p());
    } catch (const std::exception &e) {
      outcome.status = ExitStatus::Numeric;
      outcome.diagnostic =
          "step " + std::to_string(j) + " (t = " + shortest(t) + "): " +
          e.what();
      if (csv != nullptr) {
        csv->flush();
      }
      return outcome;
    }
    if (!cfg.timings) {
      record.precond_seconds = 0.0;
      record.solve_seconds = 0.0;
    }
    if (csv != nullptr) {
      write_csv_row(record, *csv, cfg.timings);
      csv->flush();
    }
    outcome.log.records.push_back(std::move(record));
  }
  return outcome;
}

std::string csv_header(const SimulationLog &log) {
  std::string header = "step,t";
  for (const auto &name : log.state_names) {
    header += "," + name;
  }
  for (const auto &name : log.control_names) {
    header += "," + name;
  }
  header += ",normF,gmres_iters,precond_seconds,solve_seconds,regularized";
  return header;
}

void write_csv_row(const StepRecord &r, std::ostream &out, bool timings) {
  out << r.step << ',' << shortest(r.t);
  for (Index i = 0; i < r.state.size(); ++i) {
    out << ',' << shortest(r.state[i]);
  }
  for (Index i = 0; i < r.control.size(); ++i) {
    out << ',' << shortest(r.control[i]);
  }
  out << ',' << shortest(r.residual_norm) << ',' << r.gmres_iterations << ','
      << fixed6(timings ? r.precond_seconds : 0.0) << ','
      << fixed6(timings ? r.solve_seconds : 0.0) << ','
      << (r.regularized ? 1 : 0) << '\n';
}

void write_csv(const SimulationLog &log, std::ostream &out, bool timings) {
  out << csv_header(log) << '\n';
  for (const auto &r : log.records) {
    write_csv_row(r, out, timings);
  }
}

void write_csv(const SimulationLog &log, const std::filesystem::path &path,
               bool timings) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  write_csv(log, out, timings);
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

SimulationLog read_csv(std::istream &in, Index state_columns) {
  SimulationLog log;
  std::string line;
  if (!std::getline(in, line)) {
    throw UsageError("read_csv: missing header");
  }
  const std::vector<std::string> header = split(trim(line), ',');
  const std::vector<std::string> tail = {"normF", "gmres_iters",
                                         "precond_seconds", "solve_seconds",
                                         "regularized"};
  if (header.size() < 2 + tail.size() || header[0] != "step" ||
      header[1] != "t" ||
      !std::equal(tail.begin(), tail.end(), header.end() - 5)) {
    throw UsageError("read_csv: unexpected header");
  }
  const std::size_t middle_begin = 2;
  const std::size_t middle_end = header.size() - tail.size();
  if (state_columns < 0 ||
      middle_begin + static_cast<std::size_t>(state_columns) > middle_end) {
    throw UsageError("read_csv: header has fewer state columns than expected");
  }
  const std::size_t split_at =
      middle_begin + static_cast<std::size_t>(state_columns);
  log.state_names.assign(header.begin() + middle_begin,
                         header.begin() + static_cast<long>(split_at));
  log.control_names.assign(header.begin() + static_cast<long>(split_at),
                           header.begin() + static_cast<long>(middle_end));

  const Index nx = static_cast<Index>(log.state_names.size());
  const Index nu = static_cast<Index>(log.control_names.size());
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != header.size()) {
      throw UsageError("read_csv: row has " + std::to_string(f.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    StepRecord r;
    std::size_t k = 0;
    r.step = static_cast<Index>(parse_integer(f[k++], "step"));
    r.t = parse_double(f[k++], "t");
    r.state.resize(nx);
    for (Index i = 0; i < nx; ++i) {
      r.state[i] = parse_double(f[k++], "state");
    }
    r.control.resize(nu);
    for (Index i = 0; i < nu; ++i) {
      r.control[i] = parse_double(f[k++], "control");
    }
    r.residual_norm = parse_double(f[k++], "normF");
    r.gmres_iterations = static_cast<int>(parse_integer(f[k++], "gmres_iters"));
    r.precond_seconds = parse_double(f[k++], "precond_seconds");
    r.solve_seconds = parse_double(f[k++], "solve_seconds");
    r.regularized = parse_integer(f[k++], "regularized") != 0;
    log.records.push_back(std::move(r));
  }
  return log;
}

Comparison compare_logs(const SimulationLog &a, const SimulationLog &b) {
  Comparison cmp;
  const std::size_t n = std::min(a.records.size(), b.records.size());
  std::vector<double> ratios;
  for (std::size_t k = 0; k < n; ++k) {
    const auto &ra = a.records[k];
    const auto &rb = b.records[k];
    if (ra.gmres_iterations == 0) {
      continue;
    }
    ComparisonRow row;
    row.step = ra.step;
    row.iterations_a = ra.gmres_iterations;
    row.iterations_b = rb.gmres_iterations;
    row.ratio = static_cast<double>(rb.gmres_iterations) /
                static_cast<double>(ra.gmres_iterations);
    ratios.push_back(row.ratio);
    cmp.rows.push_back(row);
  }
  if (!ratios.empty()) {
    cmp.min_ratio = *std::min_element(ratios.begin(), ratios.end());
    cmp.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    cmp.median_ratio = median_of(ratios);
  }
  return cmp;
}

Comparison compare_runs(const RunConfig &a, const RunConfig &b) {
  if (a.model != b.model || a.N != b.N || a.dt != b.dt || a.h != b.h ||
      a.tol != b.tol || a.k_max != b.k_max || a.steps != b.steps) {
    throw UsageError(
        "compare_runs: configurations may differ only in precond mode");
  }
  const SimulationOutcome ra = run_simulation(a);
  const SimulationOutcome rb = run_simulation(b);
  return compare_logs(ra.log, rb.log);
}

void write_comparison_csv(const Comparison &cmp, std::ostream &out) {
  out << "step,iters_a,iters_b,ratio\n";
  for (const auto &row : cmp.rows) {
    out << row.step << ',' << row.iterations_a << ',' << row.iterations_b
        << ',' << shortest(row.ratio) << '\n';
  }
  out << "# min_ratio," << shortest(cmp.min_ratio) << '\n';
  out << "# median_ratio," << shortest(cmp.median_ratio) << '\n';
  out << "# max_ratio," << shortest(cmp.max_ratio) << '\n';
}

} // namespace cgmres
