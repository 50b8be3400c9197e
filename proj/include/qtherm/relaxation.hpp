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

// Relaxation-time laws for thermally activated response.
//
// tau(beta) = tau0 exp(E_A beta) is the Arrhenius law. The nonadditive
// generalisation tau_q = tau0 [1 + (q-1) E_A beta]^{1/(q-1)} is a q-exponential:
// q > 1 bends ln(tau) down (sub-Arrhenius, concave), q < 1 bends it up
// (super-Arrhenius, convex) and diverges at beta = 1 / ((1-q) E_A).

#pragma once

#include "qtherm/core.hpp"

namespace qtherm {

struct RelaxationSpec {
  double tau0 = 1.0;  // attempt time, the tau at infinite temperature
  double e_a = 1.0;   // activation energy
  double q = 1.0;     // nonadditivity
};

/// |q - 1| below which tau_q switches to the exponential form.
inline constexpr double kArrheniusLimitWindow = 1e-9;

double tau_arrhenius(const RelaxationSpec& spec, double beta);

/// Throws DivergenceError (carrying the critical beta) when q < 1 and
/// beta >= 1 / ((1-q) E_A).
double tau_q(const RelaxationSpec& spec, double beta);

/// Inverse temperature read off the two populations,
/// beta = ln(rho00 / rho11) / delta_eps.
double beta_from_populations(const Mat2& rho, double delta_eps);

enum class Regime {
  DcLimit,       // tau >> 1/omega
  FastField,     // tau << 1/omega
  Intermediate,  // tau ~ 1/omega
};

const char* to_string(Regime r) noexcept;

struct RegimeThresholds {
  double dc_limit = 10.0;    // omega tau at or above which the dc limit holds
  double fast_field = 0.1;   // omega tau at or below which the field is fast
};

Regime classify_regime(double tau, double omega,
                       const RegimeThresholds& thresholds = {});

/// Drive frequency matched to a relaxation time, omega = 1 / tau.
double omega_from_tau(double tau);

std::vector<std::string> violations(const RelaxationSpec& spec);

}  // namespace qtherm
