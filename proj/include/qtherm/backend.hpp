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

// One- and two-qubit circuit execution: ideal statevector and noisy density
// matrix, transpilation to the device basis, and the Hadamard test.
//
// Qubit 0 is the most significant bit of a basis index (first kron factor).
// In Hadamard-test circuits qubit 0 is the ancilla and qubit 1 the system.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qtherm/core.hpp"
#include "qtherm/model.hpp"
#include "qtherm/rng.hpp"

namespace qtherm {

enum class GateKind {
  // device basis
  CX,
  Delay,
  Id,
  Measure,
  Reset,
  RZ,
  SX,
  X,
  // abstractions removed by transpile_to_basis
  H,
  S,
  Sdg,
  Z,
  PauliRotation,   // exp(i angle P) on one qubit
  ControlledPauli, // control qubits[0], target qubits[1]
};

const char* to_string(GateKind kind) noexcept;
bool is_basis_gate(GateKind kind) noexcept;

struct GateOp {
  GateKind kind = GateKind::Id;
  std::vector<int> qubits;
  double angle = 0.0;           // RZ, PauliRotation
  Pauli pauli = Pauli::I;       // PauliRotation, ControlledPauli (I, X, Y, Z)
  double duration = -1.0;       // seconds; negative means the model default
};

class Circuit {
 public:
  explicit Circuit(int n_qubits = 1);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  bool empty() const noexcept { return ops_.empty(); }

  /// Appends after checking arity, qubit range and finite angles.
  Circuit& add(GateOp op);

  Circuit& x(int q) { return add({GateKind::X, {q}}); }
  Circuit& sx(int q) { return add({GateKind::SX, {q}}); }
  Circuit& id(int q) { return add({GateKind::Id, {q}}); }
  Circuit& h(int q) { return add({GateKind::H, {q}}); }
  Circuit& s(int q) { return add({GateKind::S, {q}}); }
  Circuit& sdg(int q) { return add({GateKind::Sdg, {q}}); }
  Circuit& z(int q) { return add({GateKind::Z, {q}}); }
  Circuit& rz(int q, double lambda) { return add({GateKind::RZ, {q}, lambda}); }
  Circuit& cx(int c, int t) { return add({GateKind::CX, {c, t}}); }
  Circuit& measure(int q) { return add({GateKind::Measure, {q}}); }
  Circuit& reset(int q) { return add({GateKind::Reset, {q}}); }
  Circuit& delay(int q, double seconds) {
    return add({GateKind::Delay, {q}, 0.0, Pauli::I, seconds});
  }
  Circuit& pauli_rotation(int q, Pauli p, double theta) {
    return add({GateKind::PauliRotation, {q}, theta, p});
  }
  Circuit& controlled_pauli(int c, int t, Pauli p) {
    return add({GateKind::ControlledPauli, {c, t}, 0.0, p});
  }

  /// Appends `other`'s ops with every qubit index q mapped to map[q].
  Circuit& append(const Circuit& other, const std::vector<int>& map);
  Circuit& append(const Circuit& other);

  /// Inverse of a unitary circuit. Throws ErrorKind::Circuit on measure/reset.
  Circuit inverse() const;

 private:
  int n_qubits_;
  std::vector<GateOp> ops_;
};

/// Unitary of one op embedded in the 2^n-dimensional space.
ComplexMatrix op_unitary(const GateOp& op, int n_qubits);

/// Product of all op unitaries. Throws ErrorKind::Circuit on measure/reset.
ComplexMatrix circuit_unitary(const Circuit& circuit);

/// max |a - e^{i phase} b| <= tol for the best global phase.
bool equal_up_to_global_phase(const ComplexMatrix& a, const ComplexMatrix& b,
                              double tol);

/// Exact statevector evolution. Delay and id act as identity; measure and
/// reset throw ErrorKind::Circuit.
ComplexVector apply_circuit_ideal(const Circuit& circuit,
                                  const ComplexVector& psi);

/// Rewrites every op into {cx, delay, id, measure, reset, rz, sx, x}.
Circuit transpile_to_basis(const Circuit& circuit);

struct GateDurations {
  double sx = 35.5e-9;
  double x = 35.5e-9;
  double cx = 300e-9;
  double measure = 1000e-9;
  double id = 35.5e-9;
  double rz = 0.0;
  double reset = 0.0;
};

struct ReadoutError {
  double p1_given0 = 0.02;
  double p0_given1 = 0.02;
};

/// Device noise: thermal relaxation after each noisy op for its duration and
/// a classical confusion matrix on readout.
struct NoiseModel {
  double t1 = 0.00015774397097652505;   // s
  double t2 = 0.00010861203881817735;   // s
  double qubit_frequency = 5227644738.696302;  // Hz, metadata only
  GateDurations durations;
  std::set<GateKind> noisy_ops{GateKind::SX, GateKind::Id, GateKind::X,
                               GateKind::CX, GateKind::Measure};
  std::vector<ReadoutError> readout{ReadoutError{}, ReadoutError{}};

  /// op.duration when set, otherwise the default for its kind.
  double duration_of(const GateOp& op) const;
};

std::vector<std::string> violations(const NoiseModel& noise);

/// Amplitude damping with gamma = 1 - e^{-d/T1} followed by pure dephasing so
/// that coherences scale by e^{-d/T2} overall. Throws ErrorKind::Domain for
/// d < 0 or T2 > 2 T1.
KrausSet<double> thermal_relaxation_kraus(double t1, double t2, double duration);

/// Applies a single-qubit channel to qubit q of an n-qubit density matrix.
ComplexMatrix apply_channel(const KrausSet<double>& channel,
                            const ComplexMatrix& rho, int q, int n_qubits);

/// Probability of reading 1 on qubit q before readout error.
double probability_one(const ComplexMatrix& rho, int q, int n_qubits);

struct NoisyRun {
  ComplexMatrix rho;
  std::vector<int> bits;  // one per measure op, after the confusion flip
};

/// Density-matrix execution of a transpiled circuit. Measure relaxes the
/// qubit for the measure duration, samples the outcome, collapses rho and
/// then flips the recorded bit with the readout probabilities. Throws
/// ErrorKind::Circuit on non-basis ops.
NoisyRun apply_circuit_noisy(const Circuit& circuit, const ComplexMatrix& rho,
                             const NoiseModel& noise, Philox4x32& rng);

enum class Component { Real, Imag };

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Estimates Re or Im <psi|U|psi> where |psi> = body|0> on one qubit and
/// `insertion` is the controlled form of U on two qubits (qubit 0 control).
/// shots = nullopt means the exact expectation of the ancilla Z. With a noise
/// model the circuit is transpiled and run as channels, then relaxation
/// during readout and the confusion matrix are applied before sampling.
/// Throws ErrorKind::Config for shots < 1.
Estimate hadamard_test(const Circuit& body, const Circuit& insertion,
                       Component component, std::optional<std::uint64_t> shots,
                       const NoiseModel* noise, Philox4x32* rng);

/// The full Hadamard-test circuit (two qubits, ending in measure(0)).
Circuit hadamard_circuit(const Circuit& body, const Circuit& insertion,
                         Component component);

/// One op per line: `kind q0[,q1] [angle] [duration]`.
void dump_circuit(std::ostream& os, const Circuit& circuit);
std::string dump_circuit(const Circuit& circuit);

}  // namespace qtherm
