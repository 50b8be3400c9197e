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

#include "qtherm/vqs.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qtherm {
namespace {

constexpr cd kI{0.0, 1.0};

Mat2 gate(Pauli p, double theta) {
  return std::cos(theta) * Mat2::Identity() + kI * std::sin(theta) * pauli_matrix(p);
}

void check_count(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta) {
  if (theta.size() != ansatz.n_params()) {
    throw Error(ErrorKind::Dimension,
                "ansatz: " + std::to_string(theta.size()) + " angles for " +
                    std::to_string(ansatz.n_params()) + " gates");
  }
}

Circuit controlled(Pauli p) {
  Circuit c(2);
  if (p != Pauli::I) c.controlled_pauli(0, 1, p);
  return c;
}

/// Controlled form of  P_outer W^dagger P_inner W  with W uncontrolled.
Circuit sandwich(const Circuit& w, Pauli inner, Pauli outer) {
  Circuit c(2);
  if (inner == Pauli::I) {
    // W^dagger W cancels
    if (outer != Pauli::I) c.controlled_pauli(0, 1, outer);
    return c;
  }
  c.append(w, {1});
  c.controlled_pauli(0, 1, inner);
  c.append(w.inverse(), {1});
  if (outer != Pauli::I) c.controlled_pauli(0, 1, outer);
  return c;
}

constexpr std::array<Pauli, 4> kBasis{Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

}  // namespace

std::vector<std::string> violations(const AnsatzSpec& ansatz) {
  std::vector<std::string> out;
  if (ansatz.layers < 1) out.push_back("ansatz.layers: layers >= 1");
  if (ansatz.generators.empty()) out.push_back("ansatz.generators: nonempty");
  for (Pauli p : ansatz.generators) {
    if (p != Pauli::X && p != Pauli::Y && p != Pauli::Z) {
      out.push_back("ansatz.generators: each of X, Y, Z");
      break;
    }
  }
  return out;
}

VariationalState initial_state(const AnsatzSpec& ansatz, double t0) {
  return {1.0, Eigen::VectorXd::Zero(ansatz.n_params()), t0};
}

Vec2 prepare_state(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta) {
  check_count(ansatz, theta);
  Vec2 psi = ket::zero();
  for (int k = 0; k < ansatz.n_params(); ++k) {
    psi = gate(ansatz.generator(k), theta(k)) * psi;
  }
  return psi;
}

Circuit ansatz_circuit(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta,
                       int first, int last) {
  check_count(ansatz, theta);
  Circuit c(1);
  for (int k = first; k < last; ++k) {
    c.pauli_rotation(0, ansatz.generator(k), theta(k));
  }
  return c;
}

std::vector<Vec2> tangent_vectors(const AnsatzSpec& ansatz,
                                  const VariationalState& state) {
  check_count(ansatz, state.theta);
  const int n = ansatz.n_params();
  std::vector<Mat2> gates(n);
  for (int k = 0; k < n; ++k) gates[k] = gate(ansatz.generator(k), state.theta(k));
  // suffix[k] = g_{n-1} ... g_{k+1}
  std::vector<Mat2> suffix(n);
  Mat2 acc = Mat2::Identity();
  for (int k = n - 1; k >= 0; --k) {
    suffix[k] = acc;
    acc = acc * gates[k];
  }
  std::vector<Vec2> out;
  out.reserve(n + 1);
  out.push_back(acc * ket::zero());
  Vec2 phi = ket::zero();
  for (int k = 0; k < n; ++k) {
    phi = gates[k] * phi;
    out.push_back(state.alpha * suffix[k] * (kI * (pauli_matrix(ansatz.generator(k)) * phi)));
  }
  return out;
}

const char* to_string(BackendMode mode) noexcept {
  switch (mode) {
    case BackendMode::Analytic: return "analytic";
    case BackendMode::HadamardIdeal: return "hadamard-ideal";
    case BackendMode::HadamardNoisy: return "hadamard-noisy";
  }
  return "?";
}

Estimator Estimator::analytic() { return Estimator(); }

Estimator Estimator::hadamard(std::optional<std::uint64_t> shots,
                              std::optional<Philox4x32> rng) {
  Estimator e;
  e.mode_ = BackendMode::HadamardIdeal;
  e.shots_ = shots;
  e.rng_ = rng;
  return e;
}

Estimator Estimator::noisy(NoiseModel noise, std::optional<std::uint64_t> shots,
                           std::optional<Philox4x32> rng) {
  Estimator e;
  e.mode_ = BackendMode::HadamardNoisy;
  e.shots_ = shots;
  e.noise_ = std::move(noise);
  e.rng_ = rng;
  return e;
}

double Estimator::overlap(const Circuit& body, const Circuit& insertion,
                          Component component) {
  if (sink_) {
    sink_->push_back(
        transpile_to_basis(hadamard_circuit(body, insertion, component)));
  }
  return hadamard_test(body, insertion, component, shots_,
                       noise_ ? &*noise_ : nullptr, rng_ ? &*rng_ : nullptr)
      .value;
}

Eigen::MatrixXd assemble_m(const AnsatzSpec& ansatz,
                           const VariationalState& state, Estimator& est) {
  const int n = ansatz.n_params();
  Eigen::MatrixXd m(n + 1, n + 1);
  if (est.mode() == BackendMode::Analytic) {
    const auto t = tangent_vectors(ansatz, state);
    for (int i = 0; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        m(i, j) = m(j, i) = t[i].dot(t[j]).real();
      }
    }
    return m;
  }
  check_count(ansatz, state.theta);
  const double a = state.alpha;
  m(0, 0) = 1.0;
  for (int i = 0; i < n; ++i) {
    const Circuit body = ansatz_circuit(ansatz, state.theta, 0, i + 1);
    const Pauli pi = ansatz.generator(i);
    // Re <psi|d_i Psi> = -alpha Im <phi_i|P_i|phi_i>
    m(0, i + 1) = m(i + 1, 0) =
        -a * est.overlap(body, controlled(pi), Component::Imag);
    m(i + 1, i + 1) = a * a;
    for (int j = i + 1; j < n; ++j) {
      const Circuit w = ansatz_circuit(ansatz, state.theta, i + 1, j + 1);
      m(i + 1, j + 1) = m(j + 1, i + 1) =
          a * a * est.overlap(body, sandwich(w, ansatz.generator(j), pi),
                              Component::Real);
    }
  }
  return m;
}

Eigen::VectorXd assemble_v(const AnsatzSpec& ansatz,
                           const VariationalState& state,
                           std::span<const PauliTerm> h_eff, Estimator& est) {
  const int n = ansatz.n_params();
  Eigen::VectorXd v(n + 1);
  if (est.mode() == BackendMode::Analytic) {
    const auto t = tangent_vectors(ansatz, state);
    const Vec2 h_psi = to_matrix(h_eff) * (state.alpha * t[0]);
    for (int i = 0; i <= n; ++i) v(i) = t[i].dot(h_psi).imag();
    return v;
  }
  check_count(ansatz, state.theta);
  const auto c = pauli_coefficients(h_eff);
  const double a = state.alpha;

  // V_alpha = alpha sum_k Im(c_k) <psi|P_k|psi>
  const Circuit full = ansatz_circuit(ansatz, state.theta, 0, n);
  double va = c[0].imag();
  for (int k = 1; k < 4; ++k) {
    if (c[k].imag() == 0.0) continue;
    va += c[k].imag() * est.overlap(full, controlled(kBasis[k]), Component::Real);
  }
  v(0) = a * va;

  // V_j = -alpha^2 sum_k Re(c_k o_k),  o_k = <phi_j|P_j R^dagger P_k R|phi_j>
  for (int j = 0; j < n; ++j) {
    const Circuit body = ansatz_circuit(ansatz, state.theta, 0, j + 1);
    const Circuit r = ansatz_circuit(ansatz, state.theta, j + 1, n);
    const Pauli pj = ansatz.generator(j);
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (c[k] == 0.0) continue;
      const Circuit ins = sandwich(r, kBasis[k], pj);
      if (c[k].real() != 0.0) {
        sum += c[k].real() * est.overlap(body, ins, Component::Real);
      }
      if (c[k].imag() != 0.0) {
        sum -= c[k].imag() * est.overlap(body, ins, Component::Imag);
      }
    }
    v(j + 1) = -a * a * sum;
  }
  return v;
}

Eigen::VectorXd solve_mclachlan(const Eigen::MatrixXd& m,
                                const Eigen::VectorXd& v, double lambda) {
  if (!m.allFinite() || !v.allFinite()) {
    throw SolverError(std::numeric_limits<double>::infinity(),
                      "mclachlan: non-finite entries in M or V");
  }
  const Eigen::MatrixXd a =
      m + lambda * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd x = ldlt.solve(v);
    if (x.allFinite()) return x;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd x = cod.solve(v);
  if (x.allFinite()) return x;
  const double rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
  const double cond =
      rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  throw SolverError(cond, "mclachlan: linear system could not be solved "
                          "(condition estimate " + std::to_string(cond) + ")");
}

namespace {

Eigen::VectorXd pack(const VariationalState& s) {
  Eigen::VectorXd x(s.theta.size() + 1);
  x(0) = s.alpha;
  x.tail(s.theta.size()) = s.theta;
  return x;
}

VariationalState unpack(const Eigen::VectorXd& x, double t) {
  return {x(0), x.tail(x.size() - 1), t};
}

}  // namespace

VariationalState mclachlan_step(const AnsatzSpec& ansatz,
                                const VariationalState& state,
                                const DriveSpec& drive,
                                const DissipatorSpec& diss, cd z1, cd z2,
                                double dt, const SolverConfig& solver,
                                Estimator& est, NoiseCoupling coupling) {
  if (solver.substeps < 1) {
    throw Error(ErrorKind::Config, "vqs: substeps must be >= 1");
  }
  auto rate = [&](const Eigen::VectorXd& x, double t) {
    const VariationalState s = unpack(x, t);
    const PauliSum h = effective_hamiltonian(drive, diss, z1, z2, t, coupling);
    return solve_mclachlan(assemble_m(ansatz, s, est), assemble_v(ansatz, s, h, est),
                           solver.lambda);
  };
  const double h = dt / solver.substeps;
  Eigen::VectorXd x = pack(state);
  double t = state.t;
  for (int s = 0; s < solver.substeps; ++s) {
    const Eigen::VectorXd k1 = rate(x, t);
    const Eigen::VectorXd k2 = rate(x + 0.5 * h * k1, t + 0.5 * h);
    const Eigen::VectorXd k3 = rate(x + 0.5 * h * k2, t + 0.5 * h);
    const Eigen::VectorXd k4 = rate(x + h * k3, t + h);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = state.t + (s + 1) * h;
  }
  return unpack(x, state.t + dt);
}

Mat2 reconstruct_density(const Mat2& rho_theta, double alpha, double f,
                         bool* clamped) {
  const double a2 = alpha * alpha;
  const double raw = a2 * a2;
  const double kept = std::clamp(raw, 0.0, 1.0);
  if (clamped) *clamped = raw != kept;
  const double p = 1.0 - kept;
  Mat2 out;
  const double r11 = rho_theta(1, 1).real() * kept + p * f;
  const cd r01 = rho_theta(0, 1) * std::min(a2, 1.0);
  out << 1.0 - r11, r01, std::conj(r01), r11;
  return out;
}

VqsTrajectory run_vqs_trajectory(const AnsatzSpec& ansatz,
                                 const DriveSpec& drive,
                                 const DissipatorSpec& diss, NoiseStream& noise,
                                 const TimeGrid& grid, Estimator& est,
                                 const VqsOptions& options) {
  VqsTrajectory out;
  out.rho.reserve(grid.size());
  out.states.reserve(grid.size());
  VariationalState state = initial_state(ansatz, grid.at(0));
  auto record = [&] {
    const Vec2 psi = prepare_state(ansatz, state.theta);
    bool clamped = false;
    out.rho.push_back(reconstruct_density(projector(psi), state.alpha, diss.f, &clamped));
    if (clamped) ++out.clamp_events;
    out.states.push_back(state);
  };
  record();
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    try {
      state = mclachlan_step(ansatz, state, drive, diss, noise.z1(), noise.z2(),
                             grid.dt(), options.solver, est, options.coupling);
    } catch (const SolverError& e) {
      throw SolverError(e.condition_estimate(),
                        "trajectory " + std::to_string(options.trajectory) + ": " +
                            e.what());
    }
    noise.advance();
    state.t = grid.at(k + 1);
    if (!std::isfinite(state.alpha) || !state.theta.allFinite()) {
      throw TrajectoryError(options.trajectory,
                            "vqs: trajectory " + std::to_string(options.trajectory) +
                                " diverged at t = " + std::to_string(state.t));
    }
    record();
  }
  return out;
}

}  // namespace qtherm
