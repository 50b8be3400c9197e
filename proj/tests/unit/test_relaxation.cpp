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

#include "qtherm/model.hpp"
#include "qtherm/relaxation.hpp"

namespace qtherm {
namespace {

TEST(Arrhenius, SpecValues) {
  EXPECT_DOUBLE_EQ(tau_arrhenius({1, 1, 1}, 0.0), 1.0);
  EXPECT_NEAR(tau_arrhenius({1, 1, 1}, 1.0), 2.7182818, 1e-7);
  EXPECT_NEAR(tau_arrhenius({1, 2, 1}, 0.5), std::numbers::e, 1e-15);
}

TEST(TauQ, SpecValues) {
  EXPECT_NEAR(tau_q({1, 1, 1.5}, 1.0), 2.25, 1e-14);
  EXPECT_NEAR(tau_q({1, 1, 0.5}, 1.0), 4.0, 1e-14);
  for (double beta : {0.0, 0.3, 0.9}) {
    const double a = tau_arrhenius({1, 1, 1}, beta);
    EXPECT_NEAR(tau_q({1, 1, 1.0 + 5e-10}, beta), a, 1e-9 * a);
    EXPECT_NEAR(tau_q({1, 1, 1.0 - 5e-10}, beta), a, 1e-9 * a);
  }
}

TEST(TauQ, ContinuousAcrossArrheniusWindow) {
  for (int k = 0; k <= 20; ++k) {
    const double beta = 0.05 * k;
    const double t1 = tau_q({1, 1, 1}, beta);
    EXPECT_LT(std::abs(tau_q({1, 1, 1 + 1e-6}, beta) - t1) / t1, 1e-4);
    EXPECT_LT(std::abs(tau_q({1, 1, 1 - 1e-6}, beta) - t1) / t1, 1e-4);
  }
}

TEST(TauQ, InfiniteTemperatureAndMonotone) {
  for (double q : {0.5, 0.75, 1.0, 1.25, 1.5, 3.0}) {
    EXPECT_DOUBLE_EQ(tau_q({1.7, 1, q}, 0.0), 1.7);
    double last = 0.0;
    for (int k = 0; k <= 90; ++k) {
      const double t = tau_q({1, 1, q}, 0.01 * k);
      EXPECT_GT(t, last);
      last = t;
    }
  }
}

TEST(TauQ, CurvatureSignFollowsQ) {
  for (double q : {0.5, 0.75, 1.25, 1.5}) {
    for (int k = 1; k < 90; ++k) {
      const double b = 0.01 * k;
      const double d2 = std::log(tau_q({1, 1, q}, b + 0.01)) -
                        2 * std::log(tau_q({1, 1, q}, b)) +
                        std::log(tau_q({1, 1, q}, b - 0.01));
      if (q > 1) EXPECT_LT(d2, 0.0) << q;
      else EXPECT_GT(d2, 0.0) << q;
    }
  }
}

TEST(TauQ, DivergenceCarriesCriticalBeta) {
  try {
    tau_q({1, 1, 0.5}, 2.5);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_DOUBLE_EQ(e.critical_beta(), 2.0);
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  EXPECT_THROW(tau_q({1, 1, 1}, -0.1), Error);
}

TEST(BetaFromPopulations, SpecValues) {
  Mat2 rho = 0.5 * Mat2::Identity();
  EXPECT_DOUBLE_EQ(beta_from_populations(rho, 1.0), 0.0);
  rho(0, 0) = 0.8;
  rho(1, 1) = 0.2;
  EXPECT_NEAR(beta_from_populations(rho, 1.0), 1.3862944, 1e-7);

  const BathSpec bath{10.0, 4.0, 4.0};
  const double f = fermi_factor(bath);
  rho(0, 0) = 1 - f;
  rho(1, 1) = f;
  EXPECT_NEAR(beta_from_populations(rho, bath.e_offset), 1.0 / bath.t_env, 1e-14);

  rho(1, 1) = 0.0;
  EXPECT_THROW(beta_from_populations(rho, 1.0), Error);
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(1.0, 100.0), Regime::DcLimit);
  EXPECT_EQ(classify_regime(1.0, 0.01), Regime::FastField);
  EXPECT_EQ(classify_regime(1.0, 1.0), Regime::Intermediate);
  EXPECT_EQ(classify_regime(2.0, 2.0, {5.0, 0.5}), Regime::Intermediate);
  EXPECT_STREQ(to_string(Regime::DcLimit), "dc_limit");
  EXPECT_THROW(classify_regime(0.0, 1.0), Error);
}

TEST(Regime, OmegaFromTau) {
  EXPECT_DOUBLE_EQ(omega_from_tau(1.0), 1.0);
  EXPECT_NEAR(omega_from_tau(2.25), 0.4444, 1e-4);
  EXPECT_DOUBLE_EQ(omega_from_tau(4.0), 0.25);
}

}  // namespace
}  // namespace qtherm
