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

#include "qtherm/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtherm {
namespace {

constexpr cd kI{0.0, 1.0};

void append_dissipation(PauliSum& terms, const DissipatorSpec& diss, cd z1,
                        cd z2, NoiseCoupling coupling) {
  const double down = diss.j1 * (1.0 - diss.f);
  const double up = diss.j2 * diss.f;
  // -(i/2)[down |1><1| + up |0><0|] with |1><1| = (I - Z)/2, |0><0| = (I + Z)/2
  terms.push_back({-0.25 * kI * (down + up), Pauli::I});
  terms.push_back({-0.25 * kI * (up - down), Pauli::Z});

  cd c_minus;
  cd c_plus;
  if (coupling == NoiseCoupling::SqrtJ) {
    c_minus = kI * std::sqrt(diss.j1) * std::conj(z1) * std::sqrt(1.0 - diss.f);
    c_plus = kI * std::sqrt(diss.j2) * std::conj(z2) * std::sqrt(diss.f);
  } else {
    c_minus = -0.5 * kI * diss.j1 * std::conj(z1) * std::sqrt(1.0 - diss.f);
    c_plus = -0.5 * kI * diss.j2 * std::conj(z2) * std::sqrt(diss.f);
  }
  if (c_minus != 0.0) terms.push_back({c_minus, Pauli::Minus});
  if (c_plus != 0.0) terms.push_back({c_plus, Pauli::Plus});
}

}  // namespace

const char* to_string(Pauli p) noexcept {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
    case Pauli::Plus: return "+";
    case Pauli::Minus: return "-";
  }
  return "?";
}

Mat2 pauli_matrix(Pauli p) {
  switch (p) {
    case Pauli::I: return pauli::identity();
    case Pauli::X: return pauli::x();
    case Pauli::Y: return pauli::y();
    case Pauli::Z: return pauli::z();
    case Pauli::Plus: return pauli::raising();
    case Pauli::Minus: return pauli::lowering();
  }
  throw Error(ErrorKind::Domain, "pauli_matrix: invalid label");
}

Mat2 to_matrix(std::span<const PauliTerm> terms) {
  Mat2 out = Mat2::Zero();
  for (const auto& term : terms) out += term.coefficient * pauli_matrix(term.pauli);
  return out;
}

std::array<cd, 4> pauli_coefficients(std::span<const PauliTerm> terms) {
  std::array<cd, 4> c{};  // I, X, Y, Z
  for (const auto& term : terms) {
    switch (term.pauli) {
      case Pauli::I: c[0] += term.coefficient; break;
      case Pauli::X: c[1] += term.coefficient; break;
      case Pauli::Y: c[2] += term.coefficient; break;
      case Pauli::Z: c[3] += term.coefficient; break;
      case Pauli::Plus:  // (X - iY) / 2
        c[1] += 0.5 * term.coefficient;
        c[2] += -0.5 * kI * term.coefficient;
        break;
      case Pauli::Minus:  // (X + iY) / 2
        c[1] += 0.5 * term.coefficient;
        c[2] += 0.5 * kI * term.coefficient;
        break;
    }
  }
  return c;
}

double fermi_factor(const BathSpec& bath) {
  if (!(bath.t_env > 0.0)) {
    throw Error(ErrorKind::Domain, "fermi_factor: T_env must be positive");
  }
  const double x = bath.e_offset / bath.t_env;
  // 1 / (1 + e^x) without overflow for large |x|
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double ramp_parameter(const DriveSpec& drive, double t) {
  const double wt = drive.omega * t;
  if (drive.ramp == RampShape::Clamp) return std::clamp(wt, 0.0, 1.0);
  if (wt <= 0.0) return 0.0;
  const double phase = std::fmod(wt, 2.0);
  return 1.0 - std::abs(phase - 1.0);
}

double drive_field(const DriveSpec& drive, double t) {
  if (drive.protocol == DriveProtocol::Oscillatory) {
    return drive.b_ac * std::cos(drive.omega * t);
  }
  const double s = ramp_parameter(drive, t);
  return std::sqrt(drive.h2 * drive.h2 * s + drive.h1 * drive.h1 * (1.0 - s));
}

PauliSum hamiltonian_at(const DriveSpec& drive, double t) {
  return {{drive.b_dc, Pauli::Z}, {drive_field(drive, t), Pauli::X}};
}

PauliSum effective_hamiltonian(const DriveSpec& drive,
                               const DissipatorSpec& diss, cd z1, cd z2,
                               double t, NoiseCoupling coupling) {
  PauliSum terms = hamiltonian_at(drive, t);
  if (diss.j1 != 0.0 || diss.j2 != 0.0) {
    append_dissipation(terms, diss, z1, z2, coupling);
  }
  return terms;
}

Mat2 effective_hamiltonian_matrix(const DriveSpec& drive,
                                  const DissipatorSpec& diss, cd z1, cd z2,
                                  double t, NoiseCoupling coupling) {
  return to_matrix(effective_hamiltonian(drive, diss, z1, z2, t, coupling));
}

namespace detail {

Mat2 lindblad_rhs_unchecked(const Mat2& rho, const Mat2& hamiltonian,
                            const DissipatorSpec& diss) {
  Mat2 out = -kI * (hamiltonian * rho - rho * hamiltonian);
  const double down = diss.j1 * (1.0 - diss.f);
  const double up = diss.j2 * diss.f;
  // Written out entrywise: sigma_- rho sigma_+ = rho11 |0><0|,
  // {sigma_+ sigma_-, rho} = {|1><1|, rho}, and the mirror for sigma_+.
  const cd r00 = rho(0, 0);
  const cd r11 = rho(1, 1);
  out(0, 0) += down * r11 - up * r00;
  out(1, 1) += up * r00 - down * r11;
  out(0, 1) -= 0.5 * (down + up) * rho(0, 1);
  out(1, 0) -= 0.5 * (down + up) * rho(1, 0);
  return out;
}

}  // namespace detail

Mat2 lindblad_rhs(const Mat2& rho, const DriveSpec& drive,
                  const DissipatorSpec& diss, double t, const Tolerances& tol) {
  if (!rho.allFinite() || !is_hermitian(rho, tol.hermitian) ||
      std::abs(rho.trace() - 1.0) > tol.trace) {
    throw Error(ErrorKind::InvalidState,
                "lindblad_rhs: rho must be Hermitian with unit trace");
  }
  return detail::lindblad_rhs_unchecked(
      rho, to_matrix(hamiltonian_at(drive, t)), diss);
}

std::vector<std::string> violations(const DissipatorSpec& diss) {
  std::vector<std::string> out;
  if (!(diss.j1 >= 0.0)) out.emplace_back("dissipator.j1: J1 >= 0");
  if (!(diss.j2 >= 0.0)) out.emplace_back("dissipator.j2: J2 >= 0");
  if (!(diss.f >= 0.0 && diss.f <= 0.5)) {
    out.emplace_back("dissipator.f: f in [0, 0.5]");
  }
  return out;
}

std::vector<std::string> violations(const DriveSpec& drive) {
  std::vector<std::string> out;
  if (!(drive.omega > 0.0)) out.emplace_back("drive.omega: omega > 0");
  if (drive.protocol == DriveProtocol::Oscillatory) {
    if (!(drive.b_dc >= drive.b_ac)) {
      out.emplace_back("drive.b_ac: B_DC >= B_AC");
    }
  } else {
    if (!(drive.b_dc >= std::max(drive.h1, drive.h2))) {
      out.emplace_back("drive.h1/h2: B_DC >= max(h1, h2)");
    }
    if (!(drive.h1 >= 0.0 && drive.h2 >= 0.0)) {
      out.emplace_back("drive.h1/h2: h1, h2 >= 0");
    }
  }
  return out;
}

std::vector<std::string> violations(const BathSpec& bath) {
  std::vector<std::string> out;
  if (!(bath.t_env > 0.0)) out.emplace_back("bath.t_env: T_env > 0");
  if (!(bath.delta_eps > 0.0)) out.emplace_back("bath.delta_eps: delta_eps > 0");
  return out;
}

}  // namespace qtherm
