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

#include "qtherm/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "qtherm/metrics.hpp"
#include "qtherm/parallel.hpp"
#include "qtherm/qsd.hpp"

namespace qtherm {
namespace {

// ---------------------------------------------------------------- values

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw Error(ErrorKind::Config,
              key + ": cannot read '" + value + "' as " + expected);
}

double to_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x)) {
    bad_value(key, value, "a finite number");
  }
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a non-negative integer");
  return x;
}

int to_int(const std::string& key, const std::string& value) {
  int x = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  bad_value(key, value, "a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Pauli to_pauli(const std::string& key, const std::string& value) {
  const std::string v = lower(value);
  if (v == "x") return Pauli::X;
  if (v == "y") return Pauli::Y;
  if (v == "z") return Pauli::Z;
  bad_value(key, value, "one of X, Y, Z");
}

const char* regime_name(RegimePreset p) {
  switch (p) {
    case RegimePreset::None: return "none";
    case RegimePreset::I: return "i";
    case RegimePreset::II: return "ii";
    case RegimePreset::III: return "iii";
  }
  return "?";
}

// ---------------------------------------------------------------- key table

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::optional<std::string>(const ExperimentConfig&)>;

struct Key {
  const char* section;
  const char* name;
  Setter set;
  Getter get;
};

#define QT_DOUBLE(sec, key, field)                                              \
  Key {                                                                         \
    sec, key,                                                                   \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {   \
          c.field = to_double(k, v);                                            \
        },                                                                      \
        [](const ExperimentConfig& c) -> std::optional<std::string> {           \
          return num(c.field);                                                  \
        }                                                                       \
  }

#define QT_OPTIONAL(sec, key, field)                                            \
  Key {                                                                         \
    sec, key,                                                                   \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {   \
          c.field = to_double(k, v);                                            \
        },                                                                      \
        [](const ExperimentConfig& c) -> std::optional<std::string> {           \
          if (!c.field) return std::nullopt;                                    \
          return num(*c.field);                                                 \
        }                                                                       \
  }

#define QT_INT(sec, key, field)                                                 \
  Key {                                                                         \
    sec, key,                                                                   \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {   \
          c.field = to_int(k, v);                                               \
        },                                                                      \
        [](const ExperimentConfig& c) -> std::optional<std::string> {           \
          return std::to_string(c.field);                                       \
        }                                                                       \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"drive", "protocol",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const std::string s = lower(v);
         if (s == "oscillatory") c.drive.protocol = DriveProtocol::Oscillatory;
         else if (s == "composite") c.drive.protocol = DriveProtocol::Composite;
         else bad_value(k, v, "oscillatory or composite");
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return c.drive.protocol == DriveProtocol::Oscillatory ? "oscillatory"
                                                               : "composite";
       }},
      QT_DOUBLE("drive", "b_dc", drive.b_dc),
      QT_DOUBLE("drive", "b_ac", drive.b_ac),
      QT_DOUBLE("drive", "h1", drive.h1),
      QT_DOUBLE("drive", "h2", drive.h2),
      QT_OPTIONAL("drive", "omega", omega),
      {"drive", "ramp",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const std::string s = lower(v);
         if (s == "clamp") c.drive.ramp = RampShape::Clamp;
         else if (s == "triangular") c.drive.ramp = RampShape::Triangular;
         else bad_value(k, v, "clamp or triangular");
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return c.drive.ramp == RampShape::Clamp ? "clamp" : "triangular";
       }},
      {"regime", "preset",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const std::string s = lower(v);
         if (s == "none") c.regime = RegimePreset::None;
         else if (s == "i") c.regime = RegimePreset::I;
         else if (s == "ii") c.regime = RegimePreset::II;
         else if (s == "iii") c.regime = RegimePreset::III;
         else bad_value(k, v, "i, ii, iii or none");
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return regime_name(c.regime);
       }},
      {"dissipator", "j",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.diss.j1 = c.diss.j2 = to_double(k, v);
       },
       [](const ExperimentConfig&) -> std::optional<std::string> {
         return std::nullopt;  // written as j1, j2
       }},
      QT_DOUBLE("dissipator", "j1", diss.j1),
      QT_DOUBLE("dissipator", "j2", diss.j2),
      QT_OPTIONAL("dissipator", "f", f),
      QT_DOUBLE("bath", "t_env", bath.t_env),
      QT_OPTIONAL("bath", "delta_eps", delta_eps),
      QT_OPTIONAL("bath", "e_offset", e_offset),
      QT_DOUBLE("relaxation", "tau0", relaxation.tau0),
      QT_DOUBLE("relaxation", "e_a", relaxation.e_a),
      QT_DOUBLE("relaxation", "q", relaxation.q),
      QT_DOUBLE("grid", "t0", t0),
      QT_DOUBLE("grid", "t1", t1),
      QT_DOUBLE("grid", "dt", dt),
      {"run", "engine",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const std::string s = lower(v);
         if (s == "oracle") c.engine = Engine::Oracle;
         else if (s == "qsd") c.engine = Engine::Qsd;
         else if (s == "vqs") c.engine = Engine::Vqs;
         else bad_value(k, v, "oracle, qsd or vqs");
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return to_string(c.engine);
       }},
      {"run", "trajectories",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.n_traj = to_u64(k, v);
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return std::to_string(c.n_traj);
       }},
      {"run", "seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.master_seed = to_u64(k, v);
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return std::to_string(c.master_seed);
       }},
      QT_OPTIONAL("run", "gamma", gamma),
      {"run", "noise_coupling",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const std::string s = lower(v);
         if (s == "sqrt_j") c.coupling = NoiseCoupling::SqrtJ;
         else if (s == "half_j") c.coupling = NoiseCoupling::HalfJ;
         else bad_value(k, v, "sqrt_j or half_j");
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return c.coupling == NoiseCoupling::SqrtJ ? "sqrt_j" : "half_j";
       }},
      {"run", "workers",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.workers = static_cast<unsigned>(to_u64(k, v));
       },
       [](const ExperimentConfig&) -> std::optional<std::string> {
         return std::nullopt;  // does not change results
       }},
      {"run", "export_params",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.export_params = to_bool(k, v);
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return c.export_params ? "true" : "false";
       }},
      QT_INT("numerics", "lme_substeps", lme_substeps),
      QT_INT("numerics", "qsd_substeps", qsd_substeps),
      QT_INT("numerics", "quad_theta", n_theta),
      QT_INT("numerics", "quad_phi", n_phi),
      QT_INT("ansatz", "layers", ansatz.layers),
      {"ansatz", "generators",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.ansatz.generators.clear();
         for (const auto& item : split_list(v)) {
           c.ansatz.generators.push_back(to_pauli(k, item));
         }
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         std::string s;
         for (Pauli p : c.ansatz.generators) {
           if (!s.empty()) s += ", ";
           s += to_string(p);
         }
         return s;
       }},
      QT_INT("vqs", "substeps", solver.substeps),
      QT_DOUBLE("vqs", "lambda", solver.lambda),
      {"vqs", "backend_mode",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const std::string s = lower(v);
         if (s == "analytic") c.backend_mode = BackendMode::Analytic;
         else if (s == "hadamard-ideal") c.backend_mode = BackendMode::HadamardIdeal;
         else if (s == "hadamard-noisy") c.backend_mode = BackendMode::HadamardNoisy;
         else bad_value(k, v, "analytic, hadamard-ideal or hadamard-noisy");
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return to_string(c.backend_mode);
       }},
      {"vqs", "shots",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (lower(v) == "exact") c.shots.reset();
         else c.shots = to_u64(k, v);
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return c.shots ? std::to_string(*c.shots) : "exact";
       }},
      QT_DOUBLE("noise", "t1", noise.t1),
      QT_DOUBLE("noise", "t2", noise.t2),
      QT_DOUBLE("noise", "frequency", noise.qubit_frequency),
      QT_DOUBLE("noise", "duration_sx", noise.durations.sx),
      QT_DOUBLE("noise", "duration_x", noise.durations.x),
      QT_DOUBLE("noise", "duration_cx", noise.durations.cx),
      QT_DOUBLE("noise", "duration_measure", noise.durations.measure),
      QT_DOUBLE("noise", "duration_id", noise.durations.id),
      QT_DOUBLE("noise", "duration_rz", noise.durations.rz),
      {"noise", "readout_p1_given0",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const double p = to_double(k, v);
         for (auto& r : c.noise.readout) r.p1_given0 = p;
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return num(c.noise.readout.front().p1_given0);
       }},
      {"noise", "readout_p0_given1",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const double p = to_double(k, v);
         for (auto& r : c.noise.readout) r.p0_given1 = p;
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         return num(c.noise.readout.front().p0_given1);
       }},
      {"sweep", "q",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.q_list.clear();
         for (const auto& item : split_list(v)) c.q_list.push_back(to_double(k, item));
       },
       [](const ExperimentConfig& c) -> std::optional<std::string> {
         std::string s;
         for (double q : c.q_list) {
           if (!s.empty()) s += ", ";
           s += num(q);
         }
         return s;
       }},
      QT_INT("sweep", "beta_points", beta_points),
  };
  return table;
}

#undef QT_DOUBLE
#undef QT_OPTIONAL
#undef QT_INT

void set_key(ExperimentConfig& c, const std::string& section,
             const std::string& name, const std::string& value) {
  const std::string full = section + "." + name;
  for (const auto& k : keys()) {
    if (section == k.section && name == k.name) {
      k.set(c, full, value);
      return;
    }
  }
  throw Error(ErrorKind::Config, "unknown key '" + full + "'");
}

}  // namespace

const char* to_string(Engine e) noexcept {
  switch (e) {
    case Engine::Oracle: return "oracle";
    case Engine::Qsd: return "qsd";
    case Engine::Vqs: return "vqs";
  }
  return "?";
}

const char* to_string(RegimePreset p) noexcept { return regime_name(p); }

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto cut = line.find_first_of("#;");
    const std::string text = trim(line.substr(0, cut));
    if (text.empty()) continue;
    const auto where = "line " + std::to_string(number) + ": ";
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw Error(ErrorKind::Config, where + "unterminated section header");
      }
      section = lower(trim(text.substr(1, text.size() - 2)));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config, where + "expected 'key = value'");
    }
    if (section.empty()) {
      throw Error(ErrorKind::Config, where + "key outside of a [section]");
    }
    try {
      set_key(c, section, lower(trim(text.substr(0, eq))), trim(text.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, where + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config " + path.string());
  try {
    return parse_config(in);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.find('.');
  if (eq == std::string::npos || dot == std::string::npos) {
    throw Error(ErrorKind::Config,
                "override '" + assignment + "' is not section.key=value");
  }
  set_key(config, lower(lhs.substr(0, dot)), lower(lhs.substr(dot + 1)),
          trim(assignment.substr(eq + 1)));
}

std::string to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& k : keys()) {
    const auto value = k.get(config);
    if (!value) continue;
    if (section != k.section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << *value << '\n';
  }
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : to_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Derived {
  DriveSpec drive;
  DissipatorSpec diss;
  BathSpec bath;
  double beta_e = 0.0;
};

Derived derive_basics(const ExperimentConfig& c) {
  Derived d;
  d.drive = c.drive;
  d.bath = c.bath;
  d.bath.delta_eps = c.delta_eps.value_or(2.0 * c.drive.b_dc);
  d.bath.e_offset = c.e_offset.value_or(d.bath.delta_eps);
  d.diss = c.diss;
  if (c.f) {
    d.diss.f = *c.f;
  } else if (c.bath.t_env > 0.0) {
    d.diss.f = fermi_factor(d.bath);
  }
  d.beta_e = c.bath.t_env > 0.0 ? 1.0 / c.bath.t_env : 0.0;
  return d;
}

double preset_omega(RegimePreset preset, double tau) {
  switch (preset) {
    case RegimePreset::I: return 100.0 / tau;
    case RegimePreset::II: return 0.01 / tau;
    default: return omega_from_tau(tau);
  }
}

}  // namespace

std::vector<std::string> validate_config(const ExperimentConfig& c) {
  std::vector<std::string> out;
  auto merge = [&](std::vector<std::string> more) {
    out.insert(out.end(), more.begin(), more.end());
  };
  const Derived d = derive_basics(c);
  merge(violations(d.drive));
  merge(violations(d.bath));
  merge(violations(d.diss));
  merge(violations(c.relaxation));
  merge(violations(c.ansatz));
  merge(violations(c.noise));
  if (c.omega && !(*c.omega > 0.0)) out.push_back("drive.omega: omega > 0");
  if (!c.omega && c.regime == RegimePreset::None) {
    out.push_back("regime.preset: preset 'none' requires drive.omega");
  }
  try {
    TimeGrid(c.t0, c.t1, c.dt);
  } catch (const Error& e) {
    out.push_back(std::string("grid: ") + e.what());
  }
  if (c.n_traj < 1) out.push_back("run.trajectories: n_traj >= 1");
  if (c.gamma && !(*c.gamma > 0.0)) out.push_back("run.gamma: gamma > 0");
  if (c.lme_substeps < 1) out.push_back("numerics.lme_substeps: >= 1");
  if (c.qsd_substeps < 1) out.push_back("numerics.qsd_substeps: >= 1");
  if (c.n_theta < 2 || c.n_phi < 2) out.push_back("numerics.quad_*: >= 2 nodes");
  if (c.solver.substeps < 1) out.push_back("vqs.substeps: >= 1");
  if (!(c.solver.lambda >= 0.0)) out.push_back("vqs.lambda: lambda >= 0");
  if (c.shots && *c.shots < 1) out.push_back("vqs.shots: shots >= 1");
  if (c.q_list.empty()) out.push_back("sweep.q: nonempty");
  if (c.beta_points < 3) out.push_back("sweep.beta_points: >= 3");
  if (c.relaxation.e_a > 0.0 && c.relaxation.tau0 > 0.0 && c.bath.t_env > 0.0) {
    try {
      tau_q(c.relaxation, d.beta_e);
    } catch (const DivergenceError& e) {
      out.push_back("relaxation.q: tau_q finite at beta_E (critical beta " +
                    num(e.critical_beta()) + ")");
    }
  }
  return out;
}

ResolvedExperiment resolve(const ExperimentConfig& config) {
  const auto problems = validate_config(config);
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorKind::Config, msg);
  }
  const Derived d = derive_basics(config);
  ResolvedExperiment r;
  r.config = config;
  r.drive = d.drive;
  r.diss = d.diss;
  r.bath = d.bath;
  r.beta_e = d.beta_e;
  r.grid = TimeGrid(config.t0, config.t1, config.dt);
  r.tau = tau_q(config.relaxation, r.beta_e);
  r.drive.omega = config.omega.value_or(preset_omega(config.regime, r.tau));
  r.gamma = config.gamma.value_or(1.0 / config.dt);
  r.regime = classify_regime(r.tau, r.drive.omega);
  return r;
}

RunResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(resolve(config));
}

RunResult run_experiment(const ResolvedExperiment& r) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig& c = r.config;
  const TimeGrid& grid = r.grid;
  const Mat2 rho0 = projector(ket::zero());

  RunResult out;
  out.t = grid.times();
  out.meta.config_hash = config_hash(c);
  out.meta.seed = c.master_seed;
  out.meta.engine = c.engine;
  out.meta.backend_mode = c.backend_mode;
  out.meta.q = c.relaxation.q;
  out.meta.omega = r.drive.omega;
  out.meta.tau = r.tau;
  out.meta.beta_e = r.beta_e;
  out.meta.f = r.diss.f;
  out.meta.regime = r.regime;

  LmeOptions lme;
  lme.substeps = c.lme_substeps;
  out.oracle = integrate_lme(rho0, r.drive, r.diss, grid, lme);

  if (c.engine == Engine::Oracle) {
    out.rho = out.oracle;
    out.stderr_.assign(grid.size(), Mat2::Zero());
    out.meta.trajectories = 0;
  } else {
    EnsembleAccumulator acc(grid.size());
    const std::size_t n = c.n_traj;
    const unsigned workers = c.workers == 0 ? default_workers() : c.workers;
    const std::size_t chunk = std::max<std::size_t>(64, 4 * workers);
    auto noise_for = [&](std::size_t i) {
      return NoiseStream(StreamId{c.master_seed, i, 0, StreamPurpose::Noise},
                         r.gamma, grid.dt());
    };
    if (c.engine == Engine::Qsd) {
      QsdOptions opt;
      opt.coupling = c.coupling;
      opt.substeps = c.qsd_substeps;
      ordered_map_fold(
          n, workers, chunk,
          [&](std::size_t i) {
            NoiseStream noise = noise_for(i);
            QsdOptions o = opt;
            o.trajectory = i;
            return outer_products(evolve_trajectory_exact(
                ket::zero(), r.drive, r.diss, noise, grid, o));
          },
          [&](std::size_t, std::vector<Mat2> series) { acc.add(series); });
    } else {
      const std::optional<std::uint64_t> shots =
          c.shots ? c.shots
                  : (c.backend_mode == BackendMode::HadamardNoisy
                         ? std::optional<std::uint64_t>(8192)
                         : std::nullopt);
      ordered_map_fold(
          n, workers, chunk,
          [&](std::size_t i) {
            NoiseStream noise = noise_for(i);
            const Philox4x32 rng =
                make_stream(StreamId{c.master_seed, i, 0, StreamPurpose::Shots});
            Estimator est = Estimator::analytic();
            if (c.backend_mode == BackendMode::HadamardIdeal) {
              est = Estimator::hadamard(shots, rng);
            } else if (c.backend_mode == BackendMode::HadamardNoisy) {
              est = Estimator::noisy(c.noise, shots, rng);
            }
            VqsOptions o;
            o.solver = c.solver;
            o.coupling = c.coupling;
            o.trajectory = i;
            return run_vqs_trajectory(c.ansatz, r.drive, r.diss, noise, grid, est, o);
          },
          [&](std::size_t, VqsTrajectory traj) {
            acc.add(traj.rho);
            out.meta.clamp_events += traj.clamp_events;
            if (c.export_params) out.params.push_back(std::move(traj.states));
          });
    }
    EnsembleSeries series = acc.result(true);
    out.rho = std::move(series.rho);
    out.stderr_ = std::move(series.stderr_);
    out.meta.trajectories = n;
    out.meta.trace_min = *std::min_element(series.trace.begin(), series.trace.end());
    out.meta.trace_max = *std::max_element(series.trace.begin(), series.trace.end());
  }

  const SphereQuadrature quad = SphereQuadrature::make(c.n_theta, c.n_phi);
  const std::size_t m = grid.size();
  out.coherence.resize(m);
  out.avg_coherence.resize(m);
  out.trace_dist.resize(m);
  out.stderr_rho11.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.rho[k] = hermitize(out.rho[k]);
    out.coherence[k] = coherence(out.rho[k]);
    out.avg_coherence[k] = average_coherence(out.rho[k], quad);
    out.trace_dist[k] = trace_distance(out.rho[k], out.oracle[k]);
    out.stderr_rho11[k] = out.stderr_[k](1, 1).real();
  }
  out.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

TauTable tau_table(const ExperimentConfig& config) {
  TauTable t;
  t.q = config.q_list;
  const int n = std::max(config.beta_points, 2);
  const double beta_max = 0.9 / config.relaxation.e_a;
  for (int k = 0; k < n; ++k) t.beta.push_back(beta_max * k / (n - 1));
  for (double q : t.q) {
    RelaxationSpec r = config.relaxation;
    r.q = q;
    std::vector<double> row;
    for (double b : t.beta) row.push_back(tau_q(r, b));
    t.tau.push_back(std::move(row));
  }
  return t;
}

SweepResult sweep_q(const ExperimentConfig& config) {
  SweepResult out;
  std::vector<std::string> problems;
  for (double q : config.q_list) {
    ExperimentConfig c = config;
    c.relaxation.q = q;
    for (const auto& p : validate_config(c)) {
      problems.push_back("q = " + num(q) + ": " + p);
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid sweep:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw Error(ErrorKind::Config, msg);
  }
  out.table = tau_table(config);
  for (double q : config.q_list) {
    ExperimentConfig c = config;
    c.relaxation.q = q;
    c.omega.reset();
    c.regime = RegimePreset::III;
    out.runs.push_back(run_experiment(c));
  }
  return out;
}

// ---------------------------------------------------------------- CSV

const char* const kCsvHeader =
    "t,rho00,rho11,re_rho01,im_rho01,coherence,avg_coherence,trace_dist,stderr_rho11";

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_csv(const CsvTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_number(row[i]);
    }
    out << '\n';
  }
}

void emit_csv(const RunResult& result, std::ostream& out) {
  CsvTable table;
  table.header = split_list(kCsvHeader);
  for (std::size_t k = 0; k < result.t.size(); ++k) {
    const Mat2& r = result.rho[k];
    table.rows.push_back({result.t[k], r(0, 0).real(), r(1, 1).real(),
                          r(0, 1).real(), r(0, 1).imag(), result.coherence[k],
                          result.avg_coherence[k], result.trace_dist[k],
                          result.stderr_rho11[k]});
  }
  write_csv(table, out);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return f;
}

}  // namespace

void emit_csv(const RunResult& result, const std::filesystem::path& path) {
  std::ofstream f = open_out(path);
  emit_csv(result, f);
  if (!f) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "csv: empty input");
  {
    std::istringstream h(line);
    std::string cell;
    while (std::getline(h, cell, ',')) table.header.push_back(cell);
  }
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream r(line);
    std::string cell;
    while (std::getline(r, cell, ',')) {
      double x = 0.0;
      const char* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, x);
      if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::Io, "csv line " + std::to_string(number) +
                                       ": bad number '" + cell + "'");
      }
      row.push_back(x);
    }
    if (row.size() != table.header.size()) {
      throw Error(ErrorKind::Io, "csv line " + std::to_string(number) +
                                     ": wrong column count");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot read " + path.string());
  return read_csv(f);
}

void emit_params_csv(const std::vector<VariationalState>& states,
                     std::ostream& out) {
  CsvTable table;
  table.header = {"t", "alpha"};
  const auto k = states.empty() ? 0 : states.front().theta.size();
  for (Eigen::Index j = 0; j < k; ++j) {
    table.header.push_back("theta_" + std::to_string(j + 1));
  }
  for (const auto& s : states) {
    std::vector<double> row{s.t, s.alpha};
    for (Eigen::Index j = 0; j < s.theta.size(); ++j) row.push_back(s.theta(j));
    table.rows.push_back(std::move(row));
  }
  write_csv(table, out);
}

void emit_tau_table(const TauTable& t, std::ostream& out) {
  CsvTable table;
  table.header = {"beta"};
  for (double q : t.q) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "tau_q%g", q);
    table.header.push_back(buf);
  }
  for (std::size_t b = 0; b < t.beta.size(); ++b) {
    std::vector<double> row{t.beta[b]};
    for (const auto& col : t.tau) row.push_back(col[b]);
    table.rows.push_back(std::move(row));
  }
  write_csv(table, out);
}

std::string metadata_json(const RunMetadata& m) {
  nlohmann::ordered_json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["engine"] = to_string(m.engine);
  j["backend_mode"] = to_string(m.backend_mode);
  j["trajectories"] = m.trajectories;
  j["q"] = m.q;
  j["omega"] = m.omega;
  j["tau"] = m.tau;
  j["beta_e"] = m.beta_e;
  j["f"] = m.f;
  j["regime"] = to_string(m.regime);
  j["clamp_events"] = m.clamp_events;
  j["ensemble_trace_min"] = m.trace_min;
  j["ensemble_trace_max"] = m.trace_max;
  j["wall_seconds"] = m.wall_seconds;
  return j.dump(2) + "\n";
}

}  // namespace qtherm
