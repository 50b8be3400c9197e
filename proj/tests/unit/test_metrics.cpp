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

#include "qtherm/metrics.hpp"
#include "qtherm/rng.hpp"

namespace qtherm {
namespace {

constexpr double kPi = std::numbers::pi;

Mat2 random_density(Philox4x32& rng) {
  Vec2 a(complex_normal(rng), complex_normal(rng));
  Vec2 b(complex_normal(rng), complex_normal(rng));
  const double w = uniform01(rng);
  return w * projector(a.normalized()) + (1 - w) * projector(b.normalized());
}

TEST(Quadrature, WeightsAndNodes) {
  const auto q = SphereQuadrature::make();
  EXPECT_NEAR(q.total_weight(), 4 * kPi, 1e-10);
  EXPECT_EQ(q.theta.size(), 32u);
  EXPECT_EQ(q.phi.size(), 64u);
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(5, x, w);
  double integral = 0.0;  // x^8 on [-1, 1]
  for (std::size_t i = 0; i < x.size(); ++i) integral += w[i] * std::pow(x[i], 8);
  EXPECT_NEAR(integral, 2.0 / 9.0, 1e-14);
  EXPECT_THROW(SphereQuadrature::make(1, 8), Error);
}

TEST(TraceDistance, SpecValues) {
  const Mat2 zero = projector(ket::zero());
  EXPECT_NEAR(trace_distance(zero, zero), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(zero, 0.5 * Mat2::Identity()), 0.5, 1e-15);
  EXPECT_NEAR(trace_distance(projector(ket::plus()), projector(ket::minus())), 1.0, 1e-15);
  EXPECT_THROW(trace_distance(Mat2::Identity(), zero), Error);
}

TEST(TraceDistance, MetricOnRandomTriples) {
  auto rng = make_stream({2, 0, 0, StreamPurpose::Test});
  for (int k = 0; k < 300; ++k) {
    const Mat2 a = random_density(rng);
    const Mat2 b = random_density(rng);
    const Mat2 c = random_density(rng);
    EXPECT_EQ(trace_distance(a, b), trace_distance(b, a));
    EXPECT_LE(trace_distance(a, c), trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    EXPECT_LE(trace_distance(a, b), 1.0 + 1e-12);
  }
}

TEST(Coherence, SpecValues) {
  EXPECT_EQ(coherence(Mat2(Eigen::Vector2cd(0.3, 0.7).asDiagonal())), 0.0);
  EXPECT_NEAR(coherence(projector(ket::plus())), 1.0, 1e-15);
  for (double phi : {0.0, 1.0, 2.5}) {
    Mat2 rho = 0.5 * Mat2::Identity();
    rho(0, 1) = 0.2 * std::polar(1.0, phi);
    rho(1, 0) = std::conj(rho(0, 1));
    EXPECT_NEAR(coherence(rho), 0.4, 1e-15);
  }
}

TEST(RotatedCoherence, SpecValues) {
  const Mat2 plus = projector(ket::plus());
  EXPECT_NEAR(rotated_coherence(plus, 0.0, 1.3), coherence(plus), 1e-15);
  for (double th : {0.2, 1.0, 2.0, 3.0}) {
    EXPECT_NEAR(rotated_coherence(0.5 * Mat2::Identity(), th, 0.7), 0.0, 1e-15);
    EXPECT_NEAR(rotated_coherence(projector(ket::zero()), th, 4.0), std::sin(th), 1e-14);
  }
  const Mat2 u = basis_rotation(0.9, 2.2);
  EXPECT_LT((u * u.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(AverageCoherence, SpecValues) {
  EXPECT_NEAR(average_coherence(0.5 * Mat2::Identity()), 0.0, 1e-15);
  EXPECT_NEAR(average_coherence(projector(ket::zero())), kPi / 4, 1e-6);
  EXPECT_NEAR(average_coherence(projector(ket::plus())), kPi / 4, 1e-6);
}

TEST(AverageCoherence, BoundsPhaseInvarianceAndConvergence) {
  auto rng = make_stream({4, 0, 0, StreamPurpose::Test});
  const auto fine = SphereQuadrature::make(64, 128);
  for (int k = 0; k < 50; ++k) {
    const Mat2 rho = random_density(rng);
    const double c = average_coherence(rho);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
    Mat2 turned = rho;
    const cd phase = std::polar(1.0, 2 * kPi * uniform01(rng));
    turned(0, 1) *= phase;
    turned(1, 0) *= std::conj(phase);
    EXPECT_NEAR(average_coherence(turned), c, 1e-8);
    EXPECT_NEAR(average_coherence(rho, fine), c, 1e-8);
  }
}

}  // namespace
}  // namespace qtherm
