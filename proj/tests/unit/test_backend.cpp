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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qtherm/backend.hpp"

namespace qtherm {
namespace {

constexpr double kPi = std::numbers::pi;

ComplexVector basis(int dim, int k) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return v;
}

ComplexMatrix dm(const ComplexVector& v) { return v * v.adjoint(); }

double fidelity(const ComplexVector& a, const ComplexVector& b) {
  return std::norm(a.dot(b));
}

TEST(Circuit, Validation) {
  Circuit c(1);
  EXPECT_THROW(c.cx(0, 1), Error);
  EXPECT_THROW(c.x(1), Error);
  EXPECT_THROW(c.rz(0, std::nan("")), Error);
  EXPECT_THROW(c.pauli_rotation(0, Pauli::Plus, 0.1), Error);
  EXPECT_THROW(Circuit(3), Error);
  Circuit two(2);
  EXPECT_THROW(two.cx(1, 1), Error);
}

TEST(Ideal, SpecExamples) {
  Circuit x(1);
  x.x(0);
  EXPECT_LT((apply_circuit_ideal(x, basis(2, 0)) - basis(2, 1)).norm(), 1e-15);

  Circuit sx2(1);
  sx2.sx(0).sx(0);
  EXPECT_NEAR(fidelity(apply_circuit_ideal(sx2, basis(2, 0)), basis(2, 1)), 1.0, 1e-12);
  EXPECT_TRUE(equal_up_to_global_phase(circuit_unitary(sx2), pauli::x(), 1e-12));

  Circuit cx(2);
  cx.cx(0, 1);
  EXPECT_LT((apply_circuit_ideal(cx, basis(4, 2)) - basis(4, 3)).norm(), 1e-15);

  Circuit m(1);
  m.measure(0);
  EXPECT_THROW(apply_circuit_ideal(m, basis(2, 0)), Error);
  EXPECT_THROW(apply_circuit_ideal(x, basis(4, 0)), Error);
}

TEST(Ideal, PauliRotationIsExponential) {
  Circuit c(1);
  c.pauli_rotation(0, Pauli::X, kPi / 2);
  const ComplexVector out = apply_circuit_ideal(c, basis(2, 0));
  EXPECT_NEAR(std::abs(out(1) - cd(0, 1)), 0.0, 1e-15);
}

TEST(Inverse, UndoesCircuit) {
  Circuit c(2);
  c.h(0).sx(1).rz(1, 0.3).cx(0, 1).s(0).pauli_rotation(1, Pauli::Y, 0.7).controlled_pauli(1, 0, Pauli::Y).x(1);
  const ComplexMatrix u = circuit_unitary(c) * circuit_unitary(c.inverse());
  EXPECT_TRUE(equal_up_to_global_phase(u, ComplexMatrix::Identity(4, 4), 1e-12));
}

TEST(Transpile, SpecExamples) {
  Circuit h(1);
  h.h(0);
  Circuit expect(1);
  expect.rz(0, kPi / 2).sx(0).rz(0, kPi / 2);
  EXPECT_TRUE(equal_up_to_global_phase(circuit_unitary(h), circuit_unitary(expect), 1e-12));

  Circuit x(1);
  x.x(0);
  const Circuit tx = transpile_to_basis(x);
  ASSERT_EQ(tx.ops().size(), 1u);
  EXPECT_EQ(tx.ops()[0].kind, GateKind::X);
}

TEST(Transpile, EquivalenceAndBasisOnly) {
  std::vector<Circuit> cases;
  for (Pauli p : {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z}) {
    Circuit a(2);
    a.controlled_pauli(0, 1, p);
    cases.push_back(a);
    Circuit b(2);
    b.controlled_pauli(1, 0, p);
    cases.push_back(b);
    Circuit r(1);
    r.pauli_rotation(0, p, 0.37);
    cases.push_back(r);
  }
  Circuit misc(2);
  misc.h(0).s(1).sdg(0).z(1).cx(1, 0).delay(0, 1e-6).id(1).rz(0, -1.1);
  cases.push_back(misc);
  for (const auto& c : cases) {
    const Circuit t = transpile_to_basis(c);
    for (const auto& op : t.ops()) EXPECT_TRUE(is_basis_gate(op.kind)) << to_string(op.kind);
    EXPECT_TRUE(equal_up_to_global_phase(circuit_unitary(c), circuit_unitary(t), 1e-10))
        << dump_circuit(c);
  }
}

TEST(ThermalRelaxation, SpecExamples) {
  const double t1 = 1e-4;
  const double t2 = 0.8e-4;
  const auto zero = thermal_relaxation_kraus(t1, t2, 0.0);
  EXPECT_TRUE(zero.is_complete());
  const Mat2 rho = projector(ket::plus());
  EXPECT_LT((zero.apply(rho) - rho).cwiseAbs().maxCoeff(), 1e-15);

  const auto half_life = thermal_relaxation_kraus(t1, t2, t1 * std::log(2.0));
  EXPECT_NEAR(half_life.apply(projector(ket::one()))(1, 1).real(), 0.5, 1e-12);
  const auto dephase = thermal_relaxation_kraus(t1, t2, t2 * std::log(2.0));
  EXPECT_NEAR(std::abs(dephase.apply(rho)(0, 1)), 0.25, 1e-12);
  EXPECT_THROW(thermal_relaxation_kraus(1e-4, 2.5e-4, 1e-6), Error);
  EXPECT_THROW(thermal_relaxation_kraus(1e-4, 1e-4, -1.0), Error);
}

TEST(ThermalRelaxation, CompleteAndPositive) {
  const NoiseModel nm;
  auto rng = make_stream({8, 0, 0, StreamPurpose::Test});
  for (double d : {0.0, 35.5e-9, 300e-9, 1e-6, 1e-4, 1e-2}) {
    const auto k = thermal_relaxation_kraus(nm.t1, nm.t2, d);
    EXPECT_LE(k.completeness_error(), 1e-12);
    for (int n = 0; n < 20; ++n) {
      const Vec2 v = Vec2(complex_normal(rng), complex_normal(rng)).normalized();
      const Mat2 out = k.apply(projector(v));
      EXPECT_NEAR(out.trace().real(), 1.0, 1e-12);
      EXPECT_GE(herm_eigvals(out).minCoeff(), -1e-10);
    }
  }
}

TEST(Noisy, EmptyCircuitAndRelaxation) {
  const NoiseModel nm;
  auto rng = make_stream({1, 0, 0, StreamPurpose::Shots});
  ComplexMatrix rho = dm(Vec2(ket::plus()));
  EXPECT_LT((apply_circuit_noisy(Circuit(1), rho, nm, rng).rho - rho).cwiseAbs().maxCoeff(), 1e-15);

  Circuit c(1);
  c.x(0).delay(0, 50 * nm.t1);
  const auto run = apply_circuit_noisy(c, dm(Vec2(ket::zero())), nm, rng);
  EXPECT_NEAR(run.rho(0, 0).real(), 1.0, 1e-3);

  Circuit h(1);
  h.h(0);
  EXPECT_THROW(apply_circuit_noisy(h, rho, nm, rng), Error);
}

TEST(Noisy, ReadoutConfusionStatistics) {
  NoiseModel nm;
  nm.noisy_ops.clear();  // isolate the classical flip
  Circuit c(1);
  c.measure(0);
  auto rng = make_stream({2, 0, 0, StreamPurpose::Shots});
  const int shots = 100000;
  int ones = 0;
  const ComplexMatrix rho = dm(Vec2(ket::zero()));
  for (int k = 0; k < shots; ++k) ones += apply_circuit_noisy(c, rho, nm, rng).bits.at(0);
  const double p = 0.02;
  EXPECT_NEAR(static_cast<double>(ones) / shots, p, 3 * std::sqrt(p * (1 - p) / shots));
}

TEST(Noisy, MeasureCollapses) {
  NoiseModel nm;
  nm.readout = {ReadoutError{0, 0}, ReadoutError{0, 0}};
  Circuit c(1);
  c.measure(0);
  auto rng = make_stream({3, 0, 0, StreamPurpose::Shots});
  const auto run = apply_circuit_noisy(c, dm(Vec2(ket::plus())), nm, rng);
  const int b = run.bits.at(0);
  EXPECT_NEAR(run.rho(b, b).real(), 1.0, 1e-12);
}

TEST(Hadamard, SpecExamples) {
  Circuit empty(1);
  Circuit cz(2);
  cz.controlled_pauli(0, 1, Pauli::Z);
  Circuit cxi(2);
  cxi.controlled_pauli(0, 1, Pauli::X);
  Circuit plus(1);
  plus.h(0);
  EXPECT_NEAR(hadamard_test(empty, cz, Component::Real, std::nullopt, nullptr, nullptr).value, 1.0, 1e-15);
  EXPECT_NEAR(hadamard_test(empty, cxi, Component::Real, std::nullopt, nullptr, nullptr).value, 0.0, 1e-15);
  EXPECT_NEAR(hadamard_test(plus, cxi, Component::Real, std::nullopt, nullptr, nullptr).value, 1.0, 1e-15);
  EXPECT_THROW(hadamard_test(empty, cz, Component::Real, 0, nullptr, nullptr), Error);
  auto rng = make_stream({1, 0, 0, StreamPurpose::Shots});
  EXPECT_THROW(hadamard_test(empty, cz, Component::Real, 100, nullptr, nullptr), Error);
  EXPECT_NO_THROW(hadamard_test(empty, cz, Component::Real, 100, nullptr, &rng));
}

TEST(Hadamard, ExactMatchesOverlap) {
  auto rng = make_stream({6, 0, 0, StreamPurpose::Test});
  const Pauli ps[] = {Pauli::X, Pauli::Y, Pauli::Z};
  for (int k = 0; k < 50; ++k) {
    Circuit body(1);
    body.pauli_rotation(0, Pauli::X, 3 * uniform01(rng)).pauli_rotation(0, Pauli::Z, 3 * uniform01(rng));
    Circuit ins(2);
    ins.controlled_pauli(0, 1, ps[k % 3]).pauli_rotation(1, ps[(k + 1) % 3], uniform01(rng))
        .controlled_pauli(0, 1, ps[(k + 2) % 3]);
    const ComplexVector psi = apply_circuit_ideal(body, basis(2, 0));
    // <psi| U0^dagger U1 |psi> with U_a the system block for ancilla state a.
    const ComplexMatrix full = circuit_unitary(ins);
    const ComplexMatrix u0 = full.block(0, 0, 2, 2);
    const ComplexMatrix u1 = full.block(2, 2, 2, 2);
    const cd expect = psi.dot(u0.adjoint() * u1 * psi);
    EXPECT_NEAR(hadamard_test(body, ins, Component::Real, std::nullopt, nullptr, nullptr).value,
                expect.real(), 1e-12);
    EXPECT_NEAR(hadamard_test(body, ins, Component::Imag, std::nullopt, nullptr, nullptr).value,
                expect.imag(), 1e-12);
  }
}

TEST(Hadamard, FiniteShotsAndNoiseAreBounded) {
  Circuit body(1);
  body.h(0);
  Circuit ins(2);
  ins.controlled_pauli(0, 1, Pauli::X);
  auto rng = make_stream({4, 0, 0, StreamPurpose::Shots});
  const auto est = hadamard_test(body, ins, Component::Real, 8192, nullptr, &rng);
  EXPECT_NEAR(est.value, 1.0, 1e-12);
  const NoiseModel nm;
  const auto noisy = hadamard_test(body, ins, Component::Real, std::nullopt, &nm, &rng);
  EXPECT_LT(noisy.value, 1.0);
  EXPECT_GT(noisy.value, 0.8);
  Circuit body2(1);
  body2.pauli_rotation(0, Pauli::X, 0.4);
  int inside = 0;
  const double exact = hadamard_test(body2, ins, Component::Imag, std::nullopt, nullptr, nullptr).value;
  for (int k = 0; k < 400; ++k) {
    const auto e = hadamard_test(body2, ins, Component::Imag, 4096, nullptr, &rng);
    const double p = (1 - exact) / 2;
    inside += std::abs(e.value - exact) <= 4 * 2 * std::sqrt(p * (1 - p) / 4096);
  }
  EXPECT_GE(inside, 396);
}

TEST(Dump, Format) {
  Circuit c(2);
  c.rz(1, 0.5).sx(0).cx(0, 1).measure(0).delay(1, 2e-7).pauli_rotation(0, Pauli::Z, 0.25).controlled_pauli(0, 1, Pauli::Y);
  EXPECT_EQ(dump_circuit(c),
            "rz 1 0.5\nsx 0\ncx 0,1\nmeasure 0\ndelay 1 1.9999999999999999e-07\nexp_z 0 0.25\ncp_y 0,1\n");
}

TEST(NoiseModelValidation, Constraints) {
  NoiseModel nm;
  EXPECT_TRUE(violations(nm).empty());
  nm.t2 = 3 * nm.t1;
  EXPECT_FALSE(violations(nm).empty());
  nm = NoiseModel{};
  nm.readout[0].p1_given0 = 1.5;
  EXPECT_FALSE(violations(nm).empty());
}

}  // namespace
}  // namespace qtherm
