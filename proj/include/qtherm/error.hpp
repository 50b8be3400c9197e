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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtherm {

enum class ErrorKind {
  Dimension,     // incompatible or unsupported matrix shapes
  InvalidState,  // not a density matrix / not normalized / not Hermitian
  Domain,        // argument outside the mathematical domain of a law
  Unstable,      // integrator or trajectory blew up
  Solver,        // linear solve failed even after regularization
  Circuit,       // malformed or non-transpiled circuit
  Config,        // configuration parse/validation failure
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// tau_q evaluated past the super-Arrhenius divergence.
class DivergenceError : public Error {
 public:
  DivergenceError(double critical_beta, const std::string& what)
      : Error(ErrorKind::Domain, what), critical_beta_(critical_beta) {}

  double critical_beta() const noexcept { return critical_beta_; }

 private:
  double critical_beta_;
};

/// A stochastic trajectory whose norm left the representable range.
class TrajectoryError : public Error {
 public:
  TrajectoryError(std::size_t trajectory, const std::string& what)
      : Error(ErrorKind::Unstable, what), trajectory_(trajectory) {}

  std::size_t trajectory() const noexcept { return trajectory_; }

 private:
  std::size_t trajectory_;
};

/// McLachlan system could not be solved; carries a condition estimate.
class SolverError : public Error {
 public:
  SolverError(double condition_estimate, const std::string& what)
      : Error(ErrorKind::Solver, what), condition_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace qtherm
