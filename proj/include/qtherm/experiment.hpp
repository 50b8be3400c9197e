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

// Experiment configuration, orchestration and CSV output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtherm/backend.hpp"
#include "qtherm/lindblad.hpp"
#include "qtherm/model.hpp"
#include "qtherm/relaxation.hpp"
#include "qtherm/vqs.hpp"

namespace qtherm {

enum class Engine { Oracle, Qsd, Vqs };
enum class RegimePreset { None, I, II, III };

const char* to_string(Engine e) noexcept;
const char* to_string(RegimePreset p) noexcept;

/// Everything a run needs. Optional fields are derived by resolve() when
/// absent.
struct ExperimentConfig {
  DriveSpec drive;
  std::optional<double> omega;          // overrides the regime preset
  RegimePreset regime = RegimePreset::III;

  DissipatorSpec diss;
  std::optional<double> f;              // default: Fermi factor of the bath

  BathSpec bath;
  std::optional<double> delta_eps;      // default: 2 b_dc
  std::optional<double> e_offset;       // default: delta_eps

  RelaxationSpec relaxation;

  double t0 = 0.0;
  double t1 = 15.0;
  double dt = 0.15;

  Engine engine = Engine::Qsd;
  std::size_t n_traj = 1000;
  std::uint64_t master_seed = 1;
  std::optional<double> gamma;          // default: 1 / dt
  NoiseCoupling coupling = NoiseCoupling::SqrtJ;
  unsigned workers = 0;                 // 0: all hardware threads
  bool export_params = false;

  int lme_substeps = 100;
  int qsd_substeps = 1;
  int n_theta = 32;
  int n_phi = 64;

  AnsatzSpec ansatz;
  SolverConfig solver;
  BackendMode backend_mode = BackendMode::Analytic;
  std::optional<std::uint64_t> shots;   // unset: exact (noisy default 8192)

  NoiseModel noise;

  std::vector<double> q_list{0.5, 0.75, 1.0, 1.25, 1.5};
  int beta_points = 91;
};

/// Flat `key = value` text with `[section]` headers. '#' and ';' start
/// comments. Throws ErrorKind::Config with the line number on malformed
/// input or unknown keys.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `section.key=value` override.
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Canonical text form; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& config);

/// 64-bit FNV-1a of to_text(config), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Every violated invariant as "field: constraint"; empty when valid.
std::vector<std::string> validate_config(const ExperimentConfig& config);

/// Config with all derived quantities filled in.
struct ResolvedExperiment {
  ExperimentConfig config;
  DriveSpec drive;           // omega set
  DissipatorSpec diss;       // f set
  BathSpec bath;
  TimeGrid grid;
  double beta_e = 0.0;
  double tau = 0.0;          // tau_q(beta_E)
  double gamma = 0.0;
  Regime regime = Regime::Intermediate;
};

/// Throws ErrorKind::Config listing all violations, or the tau_q domain error.
ResolvedExperiment resolve(const ExperimentConfig& config);

struct RunMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  Engine engine = Engine::Oracle;
  BackendMode backend_mode = BackendMode::Analytic;
  std::size_t trajectories = 0;
  double wall_seconds = 0.0;
  std::size_t clamp_events = 0;
  double trace_min = 1.0;  // raw ensemble trace range before normalisation
  double trace_max = 1.0;
  double q = 1.0;
  double omega = 0.0;
  double tau = 0.0;
  double beta_e = 0.0;
  double f = 0.0;
  Regime regime = Regime::Intermediate;
};

struct RunResult {
  std::vector<double> t;
  std::vector<Mat2> rho;
  std::vector<Mat2> oracle;
  std::vector<Mat2> stderr_;
  std::vector<double> coherence;
  std::vector<double> avg_coherence;
  std::vector<double> trace_dist;
  std::vector<double> stderr_rho11;
  RunMetadata meta;
  /// Per-trajectory parameter records (vqs with export_params only).
  std::vector<std::vector<VariationalState>> params;
};

/// Runs the configured engine and the oracle on the same grid. Trajectories
/// are distributed across workers and folded in index order, so the result
/// does not depend on the worker count.
RunResult run_experiment(const ExperimentConfig& config);
RunResult run_experiment(const ResolvedExperiment& resolved);

struct TauTable {
  std::vector<double> beta;
  std::vector<double> q;
  std::vector<std::vector<double>> tau;  // tau[iq][ib]
};

struct SweepResult {
  TauTable table;
  std::vector<RunResult> runs;  // one per q, with omega = 1 / tau_q(beta_E)
};

/// tau_q over beta in [0, 0.9 / E_A] for every q.
TauTable tau_table(const ExperimentConfig& config);

/// One run per q in config.q_list (regime III coupling for each q).
SweepResult sweep_q(const ExperimentConfig& config);

extern const char* const kCsvHeader;

/// Writes the result grid. Numbers use 17 significant digits.
void emit_csv(const RunResult& result, std::ostream& out);
void emit_csv(const RunResult& result, const std::filesystem::path& path);

/// A parsed CSV: header cells and numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const CsvTable& table, std::ostream& out);

/// Fixed-width scientific formatting used in every CSV.
std::string format_number(double x);

void emit_params_csv(const std::vector<VariationalState>& states,
                     std::ostream& out);
void emit_tau_table(const TauTable& table, std::ostream& out);

/// Metadata as a JSON object string.
std::string metadata_json(const RunMetadata& meta);

}  // namespace qtherm
