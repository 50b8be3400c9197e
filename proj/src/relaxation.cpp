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

#include "qtherm/relaxation.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace qtherm {

double tau_arrhenius(const RelaxationSpec& spec, double beta) {
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::Domain, "tau_arrhenius: beta must be non-negative");
  }
  return spec.tau0 * std::exp(spec.e_a * beta);
}

double tau_q(const RelaxationSpec& spec, double beta) {
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::Domain, "tau_q: beta must be non-negative");
  }
  const double dq = spec.q - 1.0;
  if (std::abs(dq) < kArrheniusLimitWindow) return tau_arrhenius(spec, beta);
  const double base = 1.0 + dq * spec.e_a * beta;
  if (!(base > 0.0)) {
    const double critical = 1.0 / ((1.0 - spec.q) * spec.e_a);
    std::ostringstream msg;
    msg.precision(17);
    msg << "tau_q: relaxation time diverges for q = " << spec.q
        << " at beta >= " << critical << " (requested beta = " << beta << ")";
    throw DivergenceError(critical, msg.str());
  }
  // exp(log1p(x)/dq) keeps accuracy as q approaches 1 from outside the window
  return spec.tau0 * std::exp(std::log1p(dq * spec.e_a * beta) / dq);
}

double beta_from_populations(const Mat2& rho, double delta_eps) {
  const double p0 = rho(0, 0).real();
  const double p1 = rho(1, 1).real();
  if (!(p0 > 0.0 && p1 > 0.0)) {
    throw Error(ErrorKind::Domain,
                "beta_from_populations: temperature undefined for a vanishing "
                "population");
  }
  if (!(delta_eps > 0.0)) {
    throw Error(ErrorKind::Domain, "beta_from_populations: delta_eps must be positive");
  }
  return std::log(p0 / p1) / delta_eps;
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::DcLimit: return "dc_limit";
    case Regime::FastField: return "fast_field";
    case Regime::Intermediate: return "intermediate";
  }
  return "unknown";
}

Regime classify_regime(double tau, double omega,
                       const RegimeThresholds& thresholds) {
  if (!(tau > 0.0 && omega > 0.0)) {
    throw Error(ErrorKind::Domain, "classify_regime: tau and omega must be positive");
  }
  const double product = omega * tau;
  if (product >= thresholds.dc_limit) return Regime::DcLimit;
  if (product <= thresholds.fast_field) return Regime::FastField;
  return Regime::Intermediate;
}

double omega_from_tau(double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::Domain, "omega_from_tau: tau must be positive");
  }
  return 1.0 / tau;
}

std::vector<std::string> violations(const RelaxationSpec& spec) {
  std::vector<std::string> out;
  if (!(spec.tau0 > 0.0)) out.emplace_back("relaxation.tau0: tau0 > 0");
  if (!(spec.e_a > 0.0)) out.emplace_back("relaxation.e_a: E_A > 0");
  if (!std::isfinite(spec.q)) out.emplace_back("relaxation.q: q finite");
  return out;
}

}  // namespace qtherm
