// Copyright 2026 The qtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep-q, oracle, validate.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qtherm/experiment.hpp"

namespace fs = std::filesystem;
using namespace qtherm;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct CommonArgs {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
};

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig c = load_config(args.config);
  for (const auto& s : args.sets) apply_override(c, s);
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  f << text;
}

void write_result(const fs::path& dir, const RunResult& result,
                  const ExperimentConfig& config, const std::string& name) {
  fs::create_directories(dir);
  emit_csv(result, dir / name);
  write_text(dir / "metadata.json", metadata_json(result.meta));
  write_text(dir / "config.ini", to_text(config));
  if (!result.params.empty()) {
    fs::create_directories(dir / "params");
    for (std::size_t i = 0; i < result.params.size(); ++i) {
      char file[48];
      std::snprintf(file, sizeof file, "trajectory_%06zu.csv", i);
      std::ofstream f(dir / "params" / file, std::ios::binary | std::ios::trunc);
      if (!f) throw Error(ErrorKind::Io, "cannot write parameter file");
      emit_params_csv(result.params[i], f);
    }
  }
}

void log_run(const RunResult& r) {
  std::fprintf(stderr,
               "%s: %zu trajectories, q = %g, omega = %.6g, regime %s, "
               "ensemble trace in [%.6g, %.6g], %zu clamp events, %.2f s\n",
               to_string(r.meta.engine), r.meta.trajectories, r.meta.q,
               r.meta.omega, to_string(r.meta.regime), r.meta.trace_min,
               r.meta.trace_max, r.meta.clamp_events, r.meta.wall_seconds);
}

/// Transpiled Hadamard-test circuits for M and V at the initial parameters.
void dump_initial_circuits(const fs::path& path, const ExperimentConfig& c) {
  const ResolvedExperiment r = resolve(c);
  std::vector<Circuit> circuits;
  Estimator est = Estimator::hadamard(std::nullopt);
  est.record_circuits(&circuits);
  const VariationalState s = initial_state(c.ansatz, c.t0);
  assemble_m(c.ansatz, s, est);
  const PauliSum h = effective_hamiltonian(r.drive, r.diss, 0.0, 0.0, c.t0,
                                           c.coupling);
  assemble_v(c.ansatz, s, h, est);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    f << "# circuit " << i << '\n';
    dump_circuit(f, circuits[i]);
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::Config ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
  cmd->add_option("--config", args.config, "Configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  if (with_out) cmd->add_option("--out", args.out, "Output directory")->required();
  cmd->add_option("--set", args.sets, "Override, section.key=value")
      ->allow_extra_args(false);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven-qubit thermalisation: oracle, QSD and VQS engines"};
  app.require_subcommand(1);

  CommonArgs run_args;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> engine;
  std::optional<std::string> backend_mode;
  std::optional<std::uint64_t> trajectories;
  bool export_params = false;
  bool dump_circuits = false;
  auto* run = app.add_subcommand("run", "Run one experiment");
  add_common(run, run_args, true);
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--engine", engine, "oracle | qsd | vqs");
  run->add_option("--backend-mode", backend_mode,
                  "analytic | hadamard-ideal | hadamard-noisy");
  run->add_option("--trajectories", trajectories, "Number of trajectories");
  run->add_flag("--export-params", export_params,
                "Write per-trajectory parameter CSVs (vqs)");
  run->add_flag("--dump-circuits", dump_circuits,
                "Write the Hadamard-test circuits at the initial point");

  CommonArgs sweep_args;
  std::vector<double> q_list;
  auto* sweep = app.add_subcommand("sweep-q", "Run one experiment per q");
  add_common(sweep, sweep_args, true);
  sweep->add_option("--q", q_list, "Comma-separated q values")->delimiter(',');

  CommonArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Integrate the master equation only");
  add_common(oracle, oracle_args, true);

  CommonArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check a configuration");
  add_common(validate, validate_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (*run) {
    return guarded([&] {
      ExperimentConfig c = load(run_args);
      if (seed) c.master_seed = *seed;
      if (engine) apply_override(c, "run.engine=" + *engine);
      if (backend_mode) apply_override(c, "vqs.backend_mode=" + *backend_mode);
      if (trajectories) c.n_traj = *trajectories;
      if (export_params) c.export_params = true;
      const RunResult r = run_experiment(c);
      log_run(r);
      write_result(run_args.out, r, c, "result.csv");
      if (dump_circuits) dump_initial_circuits(fs::path(run_args.out) / "circuits.txt", c);
      return kOk;
    });
  }
  if (*sweep) {
    return guarded([&] {
      ExperimentConfig c = load(sweep_args);
      if (!q_list.empty()) c.q_list = q_list;
      const SweepResult s = sweep_q(c);
      const fs::path dir(sweep_args.out);
      fs::create_directories(dir);
      {
        std::ofstream f(dir / "tau_q.csv", std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorKind::Io, "cannot write tau_q.csv");
        emit_tau_table(s.table, f);
      }
      CsvTable summary;
      summary.header = {"q", "tau", "omega", "mean_trace_dist", "max_trace_dist"};
      for (const RunResult& r : s.runs) {
        log_run(r);
        char name[40];
        std::snprintf(name, sizeof name, "q_%g", r.meta.q);
        ExperimentConfig cq = c;
        cq.relaxation.q = r.meta.q;
        write_result(dir / name, r, cq, "result.csv");
        double mean = 0.0;
        double max = 0.0;
        for (double d : r.trace_dist) {
          mean += d;
          max = std::max(max, d);
        }
        mean /= static_cast<double>(r.trace_dist.size());
        summary.rows.push_back({r.meta.q, r.meta.tau, r.meta.omega, mean, max});
      }
      std::ofstream f(dir / "sweep_summary.csv", std::ios::binary | std::ios::trunc);
      if (!f) throw Error(ErrorKind::Io, "cannot write sweep_summary.csv");
      write_csv(summary, f);
      return kOk;
    });
  }
  if (*oracle) {
    return guarded([&] {
      ExperimentConfig c = load(oracle_args);
      c.engine = Engine::Oracle;
      const RunResult r = run_experiment(c);
      write_result(oracle_args.out, r, c, "oracle.csv");
      return kOk;
    });
  }
  return guarded([&] {
    const ExperimentConfig c = load(validate_args);
    const auto problems = validate_config(c);
    if (problems.empty()) {
      const ResolvedExperiment r = resolve(c);
      std::cout << "ok: f = " << r.diss.f << ", tau = " << r.tau
                << ", omega = " << r.drive.omega << ", regime "
                << to_string(r.regime) << '\n';
      return kOk;
    }
    for (const auto& p : problems) std::cout << p << '\n';
    return kConfigError;
  });
}
