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

// Physical model of a driven qubit in contact with a finite-temperature bath.
//
// Units: hbar = k_B = g mu_B = 1. Field amplitudes are plain coefficients of
// the Pauli operators. Basis: |0> is the reference ("ground") level, |1> the
// excited level; sigma_- = |0><1| and (I - sigma_z)/2 = |1><1|.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qtherm/core.hpp"

namespace qtherm {

enum class Pauli { I, X, Y, Z, Plus, Minus };

const char* to_string(Pauli p) noexcept;
Mat2 pauli_matrix(Pauli p);

struct PauliTerm {
  cd coefficient;
  Pauli pauli = Pauli::I;
};

using PauliSum = std::vector<PauliTerm>;

/// Sum of coefficient * operator.
Mat2 to_matrix(std::span<const PauliTerm> terms);

/// Coefficients on the Hermitian basis {I, X, Y, Z}; sigma_+/- are expanded as
/// (X -/+ iY)/2.
std::array<cd, 4> pauli_coefficients(std::span<const PauliTerm> terms);

/// Generalized amplitude damping rates. Channel 1 (sigma_-) has weight
/// J1 (1 - f), channel 2 (sigma_+) has weight J2 f.
struct DissipatorSpec {
  double j1 = 1.0;
  double j2 = 1.0;
  double f = 0.0;  // bath occupation, [0, 0.5]

  /// Single coupling constant when both channels share it.
  static DissipatorSpec uniform(double j, double f) { return {j, j, f}; }
};

enum class DriveProtocol { Oscillatory, Composite };

/// How the composite ramp parameter s is derived from omega t.
enum class RampShape {
  Clamp,       // s = clamp(omega t, 0, 1)
  Triangular,  // s bounces 0 -> 1 -> 0 with period 2 / omega
};

struct DriveSpec {
  DriveProtocol protocol = DriveProtocol::Oscillatory;
  double b_dc = 2.0;  // sigma_z amplitude
  double b_ac = 0.5;  // sigma_x amplitude (oscillatory)
  double h1 = 1.0;    // composite field at s = 0
  double h2 = 3.0;    // composite field at s = 1
  double omega = 1.0;
  RampShape ramp = RampShape::Clamp;
};

struct BathSpec {
  double t_env = 10.0;      // environment temperature
  double delta_eps = 4.0;   // qubit gap, 2 b_dc by convention
  double e_offset = 4.0;    // E - E_F inside the Fermi factor
};

/// How the OU noise enters the effective Hamiltonian.
enum class NoiseCoupling {
  // -i H_eff carries + sqrt(J_k) z_k^* L_k: an unravelling whose trajectory
  // average obeys the master equation.
  SqrtJ,
  // Literal form with the noise inside -(iJ/2){...}: -i H_eff carries
  // -(J_k/2) z_k^* L_k.
  HalfJ,
};

/// Fermi-Dirac occupation 1 / (1 + exp(E_offset / T_env)).
///
/// Throws ErrorKind::Domain for T_env <= 0. Occupations above 1/2 (negative
/// offsets) are returned as computed; callers validating a bath reject them.
double fermi_factor(const BathSpec& bath);

/// Transverse drive amplitude at time t.
double drive_field(const DriveSpec& drive, double t);

/// Composite ramp parameter s in [0, 1] at time t.
double ramp_parameter(const DriveSpec& drive, double t);

/// H(t) = b_dc Z + drive_field(t) X.
PauliSum hamiltonian_at(const DriveSpec& drive, double t);

/// Non-Hermitian generator of a linear quantum-state-diffusion trajectory,
///   H_eff = H(t) - (i/2)[J1 (1-f) |1><1| + J2 f |0><0|] + noise,
/// with the noise term fixed by `coupling` and the current samples z1, z2.
PauliSum effective_hamiltonian(const DriveSpec& drive,
                               const DissipatorSpec& diss, cd z1, cd z2,
                               double t,
                               NoiseCoupling coupling = NoiseCoupling::SqrtJ);

/// Matrix form of effective_hamiltonian, for the propagators.
Mat2 effective_hamiltonian_matrix(const DriveSpec& drive,
                                  const DissipatorSpec& diss, cd z1, cd z2,
                                  double t,
                                  NoiseCoupling coupling = NoiseCoupling::SqrtJ);

/// Lindblad generator: -i[H(t), rho] + L(rho), with L the generalized
/// amplitude-damping dissipator. Validates rho first.
Mat2 lindblad_rhs(const Mat2& rho, const DriveSpec& drive,
                  const DissipatorSpec& diss, double t,
                  const Tolerances& tol = {});

namespace detail {

/// lindblad_rhs without input validation, for integrator stages.
Mat2 lindblad_rhs_unchecked(const Mat2& rho, const Mat2& hamiltonian,
                            const DissipatorSpec& diss);

}  // namespace detail

/// Human-readable list of violated invariants; empty when valid.
std::vector<std::string> violations(const DissipatorSpec& diss);
std::vector<std::string> violations(const DriveSpec& drive);
std::vector<std::string> violations(const BathSpec& bath);

}  // namespace qtherm
