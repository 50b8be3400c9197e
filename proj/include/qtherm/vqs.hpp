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

// Variational simulation of a linear QSD trajectory with a layered
// Pauli-rotation ansatz |Psi> = alpha U(theta)|0>, evolved by McLachlan's
// principle.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qtherm/backend.hpp"
#include "qtherm/lindblad.hpp"
#include "qtherm/model.hpp"
#include "qtherm/qsd.hpp"

namespace qtherm {

/// `layers` repetitions of the generator list; gate k is exp(i theta_k P_k).
struct AnsatzSpec {
  int layers = 3;
  std::vector<Pauli> generators{Pauli::Z, Pauli::X, Pauli::Z};

  int n_params() const noexcept {
    return layers * static_cast<int>(generators.size());
  }
  Pauli generator(int k) const { return generators.at(k % generators.size()); }
};

std::vector<std::string> violations(const AnsatzSpec& ansatz);

struct VariationalState {
  double alpha = 1.0;
  Eigen::VectorXd theta;
  double t = 0.0;
};

/// alpha = 1, theta = 0: the circuit prepares |0>.
VariationalState initial_state(const AnsatzSpec& ansatz, double t0 = 0.0);

/// U(theta)|0>. Throws ErrorKind::Dimension on a parameter count mismatch.
Vec2 prepare_state(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta);

/// Circuit for gates [first, last) of the ansatz on one qubit.
Circuit ansatz_circuit(const AnsatzSpec& ansatz, const Eigen::VectorXd& theta,
                       int first, int last);

/// [d/d alpha, d/d theta_1, ...] of alpha U(theta)|0>, exact.
std::vector<Vec2> tangent_vectors(const AnsatzSpec& ansatz,
                                  const VariationalState& state);

enum class BackendMode { Analytic, HadamardIdeal, HadamardNoisy };

const char* to_string(BackendMode mode) noexcept;

/// How M and V are obtained. Hadamard modes build one Hadamard-test circuit
/// per overlap; `shots` unset means exact expectations.
class Estimator {
 public:
  static Estimator analytic();
  static Estimator hadamard(std::optional<std::uint64_t> shots,
                            std::optional<Philox4x32> rng = std::nullopt);
  static Estimator noisy(NoiseModel noise, std::optional<std::uint64_t> shots,
                         std::optional<Philox4x32> rng = std::nullopt);

  BackendMode mode() const noexcept { return mode_; }
  std::optional<std::uint64_t> shots() const noexcept { return shots_; }

  /// Re or Im <psi|U|psi>, body and insertion as in hadamard_test.
  double overlap(const Circuit& body, const Circuit& insertion,
                 Component component);

  /// When set, every Hadamard-test circuit run is appended (transpiled).
  void record_circuits(std::vector<Circuit>* sink) noexcept { sink_ = sink; }

 private:
  BackendMode mode_ = BackendMode::Analytic;
  std::optional<std::uint64_t> shots_;
  std::optional<NoiseModel> noise_;
  std::optional<Philox4x32> rng_;
  std::vector<Circuit>* sink_ = nullptr;
};

/// M_ij = Re <d_i Psi | d_j Psi>, size 1 + n_params.
Eigen::MatrixXd assemble_m(const AnsatzSpec& ansatz,
                           const VariationalState& state, Estimator& est);

/// V_j = Im <d_j Psi | H_eff | Psi>, size 1 + n_params.
Eigen::VectorXd assemble_v(const AnsatzSpec& ansatz,
                           const VariationalState& state,
                           std::span<const PauliTerm> h_eff, Estimator& est);

struct SolverConfig {
  double lambda = 1e-6;  // Tikhonov shift added to M
  int substeps = 4;      // RK4 steps per call
};

/// Solves (M + lambda I) x = V by LDLT, falling back to a least-squares
/// solve. Throws SolverError when neither gives a finite answer.
Eigen::VectorXd solve_mclachlan(const Eigen::MatrixXd& m,
                                const Eigen::VectorXd& v, double lambda);

/// Advances (alpha, theta) over dt with RK4. The drive is evaluated at every
/// stage time; z1, z2 are held fixed over the call.
VariationalState mclachlan_step(const AnsatzSpec& ansatz,
                                const VariationalState& state,
                                const DriveSpec& drive,
                                const DissipatorSpec& diss, cd z1, cd z2,
                                double dt, const SolverConfig& solver,
                                Estimator& est,
                                NoiseCoupling coupling = NoiseCoupling::SqrtJ);

/// Thermal reconstruction from the circuit state and alpha, with
/// p = 1 - clamp(alpha^4, 0, 1):
///   rho11 = rho11(theta) alpha^4 + p f,  rho00 = 1 - rho11,
///   rho01 = rho01(theta) alpha^2.
/// `clamped` is set when alpha^4 fell outside [0, 1].
Mat2 reconstruct_density(const Mat2& rho_theta, double alpha, double f,
                         bool* clamped = nullptr);

struct VqsTrajectory {
  std::vector<Mat2> rho;
  std::vector<VariationalState> states;
  std::size_t clamp_events = 0;
};

struct VqsOptions {
  SolverConfig solver;
  NoiseCoupling coupling = NoiseCoupling::SqrtJ;
  std::size_t trajectory = 0;  // reported in errors
};

/// One trajectory on the grid, starting from alpha = 1, theta = 0. The noise
/// stream is advanced once per grid step.
VqsTrajectory run_vqs_trajectory(const AnsatzSpec& ansatz,
                                 const DriveSpec& drive,
                                 const DissipatorSpec& diss, NoiseStream& noise,
                                 const TimeGrid& grid, Estimator& est,
                                 const VqsOptions& options = {});

}  // namespace qtherm
