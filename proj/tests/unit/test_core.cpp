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

#include "qtherm/core.hpp"
#include "qtherm/rng.hpp"

namespace qtherm {
namespace {

TEST(Core, PauliAlgebra) {
  const Mat2 x = pauli::x();
  const Mat2 y = pauli::y();
  const Mat2 z = pauli::z();
  const cd i(0, 1);
  EXPECT_LT((x * y - i * z).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((pauli::lowering() - 0.5 * (x + i * y)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((pauli::raising() * pauli::lowering() -
             projector(ket::one()))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(Core, MatMulChecksDynamicShapes) {
  ComplexMatrix a(2, 3);
  ComplexMatrix b(2, 2);
  EXPECT_THROW(mat_mul(a, b), Error);
  try {
    mat_mul(a, b);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Dimension);
  }
}

TEST(Core, KronOrdersFirstFactorMostSignificant) {
  const Mat4 k = kron(pauli::x(), Mat2::Identity().eval());
  Vec4 e1 = Vec4::Zero();
  e1(1) = 1.0;  // |0>|1>
  Vec4 e3 = Vec4::Zero();
  e3(3) = 1.0;  // |1>|1>
  EXPECT_LT((k * e1 - e3).norm(), 1e-15);
}

TEST(Core, HermEigvalsClosedFormAndSolverAgree) {
  Mat2 h;
  h << 0.3, cd(0.1, -0.2), cd(0.1, 0.2), -0.7;
  const auto ev = herm_eigvals(h);
  EXPECT_NEAR(ev(0) + ev(1), -0.4, 1e-14);
  EXPECT_NEAR(ev(0) * ev(1), (h.determinant()).real(), 1e-14);
  EXPECT_LE(ev(0), ev(1));

  Mat4 g = kron(h, pauli::z()) + kron(Mat2::Identity().eval(), pauli::x());
  const auto ev4 = herm_eigvals(g);
  EXPECT_NEAR(ev4.sum(), g.trace().real(), 1e-13);
  for (int k = 1; k < 4; ++k) EXPECT_LE(ev4(k - 1), ev4(k));
}

TEST(Core, HermEigvalsRejectsNonHermitian) {
  Mat2 a = Mat2::Zero();
  a(0, 1) = 1.0;
  EXPECT_THROW(herm_eigvals(a), Error);
}

TEST(Core, EigvalsOfLongDoubleMatrix) {
  Matrix2<long double> h = pauli::x<long double>();
  const auto ev = herm_eigvals(h);
  EXPECT_NEAR(static_cast<double>(ev(0)), -1.0, 1e-18);
  EXPECT_NEAR(static_cast<double>(ev(1)), 1.0, 1e-18);
}

TEST(Core, PartialTraceOfProductState) {
  const Mat2 a = projector(ket::plus());
  const Mat2 b = projector(ket::one());
  const Mat4 rho = kron(a, b);
  EXPECT_LT((partial_trace(rho, Subsystem::First) - a).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((partial_trace(rho, Subsystem::Second) - b).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(partial_trace(Mat4(2.0 * rho), Subsystem::First), Error);
}

TEST(Core, DensityMatrixValidity) {
  EXPECT_TRUE(is_density_matrix(projector(ket::plus()), 1e-12));
  Mat2 bad = Mat2::Identity();
  EXPECT_FALSE(is_density_matrix(bad, 1e-12));  // trace 2
  bad << 1.2, 0.0, 0.0, -0.2;
  EXPECT_FALSE(is_density_matrix(bad, 1e-12));  // negative eigenvalue
}

TEST(Core, KrausCompletenessAndApply) {
  const double g = 0.3;
  KrausSet<double> ad;
  Mat2 k0 = Mat2::Zero();
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1 - g);
  ad.ops = {k0, std::sqrt(g) * pauli::lowering()};
  EXPECT_TRUE(ad.is_complete());
  const Mat2 out = ad.apply(projector(ket::one()));
  EXPECT_NEAR(out(1, 1).real(), 1 - g, 1e-15);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-15);
}

TEST(Rng, PhiloxKnownAnswer) {
  // Random123 known-answer vector for philox4x32-10, all-ones input.
  const auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                        {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Rng, SubstreamsAreReproducibleAndDistinct) {
  auto a = make_stream({7, 3, 1, StreamPurpose::Noise});
  auto b = make_stream({7, 3, 1, StreamPurpose::Noise});
  auto c = make_stream({7, 3, 0, StreamPurpose::Noise});
  bool differs = false;
  for (int k = 0; k < 16; ++k) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs |= x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, ComplexNormalMoments) {
  auto rng = make_stream({11, 0, 0, StreamPurpose::Test});
  const int n = 100000;
  cd mean = 0.0;
  double power = 0.0;
  cd pseudo = 0.0;
  for (int k = 0; k < n; ++k) {
    const cd u = complex_normal(rng);
    mean += u;
    power += std::norm(u);
    pseudo += u * u;
  }
  mean /= n;
  power /= n;
  pseudo /= n;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(n));
  EXPECT_NEAR(power, 1.0, 4.0 / std::sqrt(n));
  EXPECT_LT(std::abs(pseudo), 4.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace qtherm
