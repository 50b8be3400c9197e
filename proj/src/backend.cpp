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

#include "qtherm/backend.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace qtherm {
namespace {

constexpr cd kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

int arity(GateKind kind) {
  return kind == GateKind::CX || kind == GateKind::ControlledPauli ? 2 : 1;
}

bool is_unitary(GateKind kind) {
  return kind != GateKind::Measure && kind != GateKind::Reset;
}

Mat2 single_qubit_matrix(const GateOp& op) {
  Mat2 m;
  switch (op.kind) {
    case GateKind::X: return pauli::x();
    case GateKind::Z: return pauli::z();
    case GateKind::Id:
    case GateKind::Delay: return Mat2::Identity();
    case GateKind::SX:
      m << cd(0.5, 0.5), cd(0.5, -0.5), cd(0.5, -0.5), cd(0.5, 0.5);
      return m;
    case GateKind::H:
      m << 1.0, 1.0, 1.0, -1.0;
      return m / std::sqrt(2.0);
    case GateKind::S:
      m << 1.0, 0.0, 0.0, kI;
      return m;
    case GateKind::Sdg:
      m << 1.0, 0.0, 0.0, -kI;
      return m;
    case GateKind::RZ:
      m << std::polar(1.0, -0.5 * op.angle), 0.0, 0.0,
          std::polar(1.0, 0.5 * op.angle);
      return m;
    case GateKind::PauliRotation:
      return std::cos(op.angle) * Mat2::Identity() +
             kI * std::sin(op.angle) * pauli_matrix(op.pauli);
    default:
      break;
  }
  throw Error(ErrorKind::Circuit,
              std::string("no single-qubit matrix for ") + to_string(op.kind));
}

ComplexMatrix embed(const Mat2& g, int q, int n_qubits) {
  if (n_qubits == 1) return g;
  return q == 0 ? kron(g, Mat2::Identity()) : kron(Mat2::Identity(), g);
}

ComplexMatrix controlled(const Mat2& u, int control, int target) {
  const Mat2 p0 = projector(ket::zero());
  const Mat2 p1 = projector(ket::one());
  if (control == 0 && target == 1) return kron(p0, Mat2::Identity()) + kron(p1, u);
  return kron(Mat2::Identity(), p0) + kron(u, p1);
}

GateOp make(GateKind kind, int q, double angle = 0.0) {
  return {kind, {q}, angle};
}

void transpile_op(const GateOp& op, Circuit& out) {
  const int q = op.qubits.front();
  switch (op.kind) {
    case GateKind::H:
      out.rz(q, kPi / 2).sx(q).rz(q, kPi / 2);
      return;
    case GateKind::S: out.rz(q, kPi / 2); return;
    case GateKind::Sdg: out.rz(q, -kPi / 2); return;
    case GateKind::Z: out.rz(q, kPi); return;
    case GateKind::PauliRotation:
      // exp(i t Z) = rz(-2t); X and Y by basis change.
      switch (op.pauli) {
        case Pauli::I: return;  // global phase
        case Pauli::Z: out.rz(q, -2.0 * op.angle); return;
        case Pauli::X:
          transpile_op(make(GateKind::H, q), out);
          out.rz(q, -2.0 * op.angle);
          transpile_op(make(GateKind::H, q), out);
          return;
        case Pauli::Y:
          out.rz(q, -kPi / 2);
          transpile_op({GateKind::PauliRotation, {q}, op.angle, Pauli::X}, out);
          out.rz(q, kPi / 2);
          return;
        default: break;
      }
      break;
    case GateKind::ControlledPauli: {
      const int c = op.qubits[0];
      const int t = op.qubits[1];
      switch (op.pauli) {
        case Pauli::I: return;
        case Pauli::X: out.cx(c, t); return;
        case Pauli::Z:
          transpile_op(make(GateKind::H, t), out);
          out.cx(c, t);
          transpile_op(make(GateKind::H, t), out);
          return;
        case Pauli::Y:
          out.rz(t, -kPi / 2).cx(c, t).rz(t, kPi / 2);
          return;
        default: break;
      }
      break;
    }
    default:
      out.add(op);
      return;
  }
  throw Error(ErrorKind::Circuit, "transpile: unsupported Pauli label");
}

}  // namespace

const char* to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::CX: return "cx";
    case GateKind::Delay: return "delay";
    case GateKind::Id: return "id";
    case GateKind::Measure: return "measure";
    case GateKind::Reset: return "reset";
    case GateKind::RZ: return "rz";
    case GateKind::SX: return "sx";
    case GateKind::X: return "x";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::Z: return "z";
    case GateKind::PauliRotation: return "exp";
    case GateKind::ControlledPauli: return "cp";
  }
  return "?";
}

bool is_basis_gate(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::CX:
    case GateKind::Delay:
    case GateKind::Id:
    case GateKind::Measure:
    case GateKind::Reset:
    case GateKind::RZ:
    case GateKind::SX:
    case GateKind::X:
      return true;
    default:
      return false;
  }
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits != 1 && n_qubits != 2) {
    throw Error(ErrorKind::Circuit, "circuit: only 1 or 2 qubits are supported");
  }
}

Circuit& Circuit::add(GateOp op) {
  const int k = arity(op.kind);
  if (static_cast<int>(op.qubits.size()) != k) {
    throw Error(ErrorKind::Circuit, std::string(to_string(op.kind)) +
                                        ": expected " + std::to_string(k) +
                                        " qubit(s)");
  }
  for (int q : op.qubits) {
    if (q < 0 || q >= n_qubits_) {
      throw Error(ErrorKind::Circuit, std::string(to_string(op.kind)) +
                                          ": qubit " + std::to_string(q) +
                                          " out of range");
    }
  }
  if (k == 2 && op.qubits[0] == op.qubits[1]) {
    throw Error(ErrorKind::Circuit, "two-qubit gate on a single qubit");
  }
  if (!std::isfinite(op.angle)) {
    throw Error(ErrorKind::Circuit, "gate angle is not finite");
  }
  if ((op.kind == GateKind::PauliRotation || op.kind == GateKind::ControlledPauli) &&
      (op.pauli == Pauli::Plus || op.pauli == Pauli::Minus)) {
    throw Error(ErrorKind::Circuit, "rotation generators must be I, X, Y or Z");
  }
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::append(const Circuit& other, const std::vector<int>& map) {
  for (GateOp op : other.ops()) {
    for (int& q : op.qubits) q = map.at(q);
    add(std::move(op));
  }
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  std::vector<int> map(other.n_qubits());
  for (int q = 0; q < other.n_qubits(); ++q) map[q] = q;
  return append(other, map);
}

Circuit Circuit::inverse() const {
  Circuit out(n_qubits_);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    GateOp op = *it;
    switch (op.kind) {
      case GateKind::Measure:
      case GateKind::Reset:
        throw Error(ErrorKind::Circuit, "inverse: circuit is not unitary");
      case GateKind::RZ:
      case GateKind::PauliRotation:
        op.angle = -op.angle;
        break;
      case GateKind::S: op.kind = GateKind::Sdg; break;
      case GateKind::Sdg: op.kind = GateKind::S; break;
      case GateKind::SX:  // sx^dagger = x sx
        out.add(op);
        op.kind = GateKind::X;
        break;
      default:
        break;
    }
    out.add(std::move(op));
  }
  return out;
}

ComplexMatrix op_unitary(const GateOp& op, int n_qubits) {
  if (!is_unitary(op.kind)) {
    throw Error(ErrorKind::Circuit,
                std::string(to_string(op.kind)) + " is not unitary");
  }
  if (op.kind == GateKind::CX) {
    return controlled(pauli::x(), op.qubits[0], op.qubits[1]);
  }
  if (op.kind == GateKind::ControlledPauli) {
    return controlled(pauli_matrix(op.pauli), op.qubits[0], op.qubits[1]);
  }
  return embed(single_qubit_matrix(op), op.qubits[0], n_qubits);
}

ComplexMatrix circuit_unitary(const Circuit& circuit) {
  const int dim = 1 << circuit.n_qubits();
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& op : circuit.ops()) u = op_unitary(op, circuit.n_qubits()) * u;
  return u;
}

bool equal_up_to_global_phase(const ComplexMatrix& a, const ComplexMatrix& b,
                              double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) == 0.0) return a.cwiseAbs().maxCoeff() <= tol;
  const cd ratio = a(r, c) / b(r, c);
  const cd phase = ratio / std::abs(ratio);
  return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

ComplexVector apply_circuit_ideal(const Circuit& circuit,
                                  const ComplexVector& psi) {
  const int dim = 1 << circuit.n_qubits();
  if (psi.size() != dim) {
    throw Error(ErrorKind::Dimension, "apply_circuit_ideal: state has dimension " +
                                          std::to_string(psi.size()) +
                                          ", circuit needs " + std::to_string(dim));
  }
  ComplexVector out = psi;
  for (const auto& op : circuit.ops()) {
    if (!is_unitary(op.kind)) {
      throw Error(ErrorKind::Circuit, std::string("apply_circuit_ideal: ") +
                                          to_string(op.kind) + " is not unitary");
    }
    out = op_unitary(op, circuit.n_qubits()) * out;
  }
  return out;
}

Circuit transpile_to_basis(const Circuit& circuit) {
  Circuit out(circuit.n_qubits());
  for (const auto& op : circuit.ops()) transpile_op(op, out);
  return out;
}

double NoiseModel::duration_of(const GateOp& op) const {
  if (op.duration >= 0.0) return op.duration;
  switch (op.kind) {
    case GateKind::SX: return durations.sx;
    case GateKind::X: return durations.x;
    case GateKind::CX: return durations.cx;
    case GateKind::Measure: return durations.measure;
    case GateKind::Id: return durations.id;
    case GateKind::RZ: return durations.rz;
    case GateKind::Reset: return durations.reset;
    default: return 0.0;
  }
}

std::vector<std::string> violations(const NoiseModel& noise) {
  std::vector<std::string> out;
  if (!(noise.t1 > 0.0)) out.push_back("noise.t1: T1 > 0");
  if (!(noise.t2 > 0.0)) out.push_back("noise.t2: T2 > 0");
  if (noise.t2 > 2.0 * noise.t1) out.push_back("noise.t2: T2 <= 2 T1");
  const GateDurations& d = noise.durations;
  for (double v : {d.sx, d.x, d.cx, d.measure, d.id, d.rz, d.reset}) {
    if (!(v >= 0.0)) {
      out.push_back("noise.duration_*: durations >= 0");
      break;
    }
  }
  for (std::size_t q = 0; q < noise.readout.size(); ++q) {
    const auto& r = noise.readout[q];
    for (double p : {r.p1_given0, r.p0_given1}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        out.push_back("noise.readout_q" + std::to_string(q) +
                      ": probabilities in [0, 1]");
        break;
      }
    }
  }
  return out;
}

KrausSet<double> thermal_relaxation_kraus(double t1, double t2,
                                          double duration) {
  if (!(duration >= 0.0)) {
    throw Error(ErrorKind::Domain, "thermal relaxation: duration must be >= 0");
  }
  if (!(t1 > 0.0) || !(t2 > 0.0) || t2 > 2.0 * t1) {
    throw Error(ErrorKind::Domain,
                "thermal relaxation: need T1, T2 > 0 and T2 <= 2 T1");
  }
  const double keep = std::exp(-duration / t1);  // 1 - gamma
  // Amplitude damping scales coherences by sqrt(keep); dephasing supplies the
  // rest of e^{-d/T2}.
  const double lambda = std::exp(-duration * (1.0 / t2 - 0.5 / t1));
  Mat2 a0 = Mat2::Zero();
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(keep);
  Mat2 a1 = Mat2::Zero();
  a1(0, 1) = std::sqrt(-std::expm1(-duration / t1));
  const double w0 = std::sqrt(0.5 * (1.0 + lambda));
  const double w1 = std::sqrt(0.5 * (1.0 - lambda));
  KrausSet<double> k;
  for (const Mat2& a : {a0, a1}) {
    k.ops.push_back(w0 * a);
    if (w1 > 0.0) k.ops.push_back(w1 * (a * pauli::z()));
  }
  return k;
}

ComplexMatrix apply_channel(const KrausSet<double>& channel,
                            const ComplexMatrix& rho, int q, int n_qubits) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : channel.ops) {
    const ComplexMatrix e = embed(k, q, n_qubits);
    out.noalias() += e * rho * e.adjoint();
  }
  return out;
}

double probability_one(const ComplexMatrix& rho, int q, int n_qubits) {
  double p = 0.0;
  const int shift = n_qubits - 1 - q;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if ((i >> shift) & 1) p += rho(i, i).real();
  }
  return std::clamp(p, 0.0, 1.0);
}

namespace {

void relax(ComplexMatrix& rho, const GateOp& op, const NoiseModel& noise,
           int n_qubits) {
  if (!noise.noisy_ops.count(op.kind) && op.kind != GateKind::Delay) return;
  const double d = noise.duration_of(op);
  if (d <= 0.0) return;
  const auto channel = thermal_relaxation_kraus(noise.t1, noise.t2, d);
  for (int q : op.qubits) rho = apply_channel(channel, rho, q, n_qubits);
}

const ReadoutError& readout_for(const NoiseModel& noise, int q) {
  static const ReadoutError kPerfect{0.0, 0.0};
  return q < static_cast<int>(noise.readout.size()) ? noise.readout[q] : kPerfect;
}

}  // namespace

NoisyRun apply_circuit_noisy(const Circuit& circuit, const ComplexMatrix& rho,
                             const NoiseModel& noise, Philox4x32& rng) {
  const int n = circuit.n_qubits();
  const int dim = 1 << n;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorKind::Dimension, "apply_circuit_noisy: density matrix shape");
  }
  NoisyRun run{rho, {}};
  for (const auto& op : circuit.ops()) {
    if (!is_basis_gate(op.kind)) {
      throw Error(ErrorKind::Circuit, std::string("apply_circuit_noisy: ") +
                                          to_string(op.kind) +
                                          " is not a basis gate");
    }
    const int q = op.qubits.front();
    if (op.kind == GateKind::Measure) {
      relax(run.rho, op, noise, n);
      const int outcome = uniform01(rng) < probability_one(run.rho, q, n) ? 1 : 0;
      const Mat2 proj = projector(outcome ? ket::one() : ket::zero());
      const ComplexMatrix e = embed(proj, q, n);
      run.rho = e * run.rho * e;
      run.rho /= run.rho.trace().real();
      const ReadoutError& r = readout_for(noise, q);
      const double flip = outcome ? r.p0_given1 : r.p1_given0;
      run.bits.push_back(uniform01(rng) < flip ? 1 - outcome : outcome);
      continue;
    }
    if (op.kind == GateKind::Reset) {
      KrausSet<double> to_zero;
      to_zero.ops = {projector(ket::zero()), pauli::lowering()};
      run.rho = apply_channel(to_zero, run.rho, q, n);
    } else {
      const ComplexMatrix u = op_unitary(op, n);
      run.rho = u * run.rho * u.adjoint();
    }
    relax(run.rho, op, noise, n);
  }
  run.rho = hermitize(run.rho);
  return run;
}

Circuit hadamard_circuit(const Circuit& body, const Circuit& insertion,
                         Component component) {
  if (body.n_qubits() != 1 || insertion.n_qubits() != 2) {
    throw Error(ErrorKind::Circuit,
                "hadamard_test: body must act on 1 qubit, insertion on 2");
  }
  Circuit c(2);
  c.append(body, {1});
  c.h(0);
  c.append(insertion);
  if (component == Component::Imag) c.sdg(0);
  c.h(0);
  c.measure(0);
  return c;
}

Estimate hadamard_test(const Circuit& body, const Circuit& insertion,
                       Component component, std::optional<std::uint64_t> shots,
                       const NoiseModel* noise, Philox4x32* rng) {
  if (shots && *shots < 1) {
    throw Error(ErrorKind::Config, "hadamard_test: shots must be >= 1");
  }
  if (shots && rng == nullptr) {
    throw Error(ErrorKind::Config, "hadamard_test: finite shots need an RNG");
  }
  Circuit full = hadamard_circuit(body, insertion, component);
  Circuit unitary_part(2);
  for (std::size_t k = 0; k + 1 < full.ops().size(); ++k) unitary_part.add(full.ops()[k]);

  double p1 = 0.0;
  if (noise == nullptr) {
    ComplexVector psi = ComplexVector::Zero(4);
    psi(0) = 1.0;
    psi = apply_circuit_ideal(unitary_part, psi);
    p1 = std::clamp(std::norm(psi(2)) + std::norm(psi(3)), 0.0, 1.0);
  } else {
    ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
    rho(0, 0) = 1.0;
    Philox4x32 unused(0, 0);
    rho = apply_circuit_noisy(transpile_to_basis(unitary_part), rho, *noise,
                              rng ? *rng : unused)
              .rho;
    relax(rho, full.ops().back(), *noise, 2);
    const double p_true = probability_one(rho, 0, 2);
    const ReadoutError& r = readout_for(*noise, 0);
    p1 = p_true * (1.0 - r.p0_given1) + (1.0 - p_true) * r.p1_given0;
  }
  if (!shots) return {1.0 - 2.0 * p1, 0.0};
  std::binomial_distribution<std::uint64_t> draw(*shots, p1);
  const double n = static_cast<double>(*shots);
  const double p_hat = static_cast<double>(draw(*rng)) / n;
  return {1.0 - 2.0 * p_hat, 2.0 * std::sqrt(p_hat * (1.0 - p_hat) / n)};
}

void dump_circuit(std::ostream& os, const Circuit& circuit) {
  char buf[64];
  for (const auto& op : circuit.ops()) {
    os << to_string(op.kind);
    if (op.kind == GateKind::PauliRotation || op.kind == GateKind::ControlledPauli) {
      os << '_' << static_cast<char>(std::tolower(to_string(op.pauli)[0]));
    }
    os << ' ' << op.qubits[0];
    if (op.qubits.size() > 1) os << ',' << op.qubits[1];
    if (op.kind == GateKind::RZ || op.kind == GateKind::PauliRotation) {
      std::snprintf(buf, sizeof buf, " %.17g", op.angle);
      os << buf;
    }
    if (op.duration >= 0.0) {
      std::snprintf(buf, sizeof buf, " %.17g", op.duration);
      os << buf;
    }
    os << '\n';
  }
}

std::string dump_circuit(const Circuit& circuit) {
  std::ostringstream os;
  dump_circuit(os, circuit);
  return os.str();
}

}  // namespace qtherm
