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

#include "qtherm/lindblad.hpp"

#include <cmath>
#include <sstream>

namespace qtherm {

TimeGrid::TimeGrid(double t0, double t1, double dt) : t0_(t0), t1_(t1), dt_(dt) {
  if (!(t1 > t0) || !(dt > 0.0) || !(dt <= (t1 - t0) * (1.0 + 1e-12))) {
    throw Error(ErrorKind::Config,
                "grid: require t1 > t0 and 0 < dt <= t1 - t0");
  }
  const double ratio = (t1 - t0) / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * ratio) {
    throw Error(ErrorKind::Config, "grid: dt must divide t1 - t0");
  }
  n_steps_ = static_cast<std::size_t>(n);
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = at(k);
  return out;
}

std::vector<Mat2> integrate_lme(const Mat2& rho0, const DriveSpec& drive,
                                const DissipatorSpec& diss,
                                const TimeGrid& grid,
                                const LmeOptions& options) {
  if (!is_density_matrix(rho0, 1e-9)) {
    throw Error(ErrorKind::InvalidState,
                "integrate_lme: rho0 is not a valid density matrix");
  }
  if (options.substeps < 1) {
    throw Error(ErrorKind::Config, "integrate_lme: substeps must be >= 1");
  }
  auto rhs = [&](const Mat2& rho, double t) {
    return detail::lindblad_rhs_unchecked(rho, to_matrix(hamiltonian_at(drive, t)),
                                          diss);
  };

  std::vector<Mat2> out;
  out.reserve(grid.size());
  Mat2 rho = hermitize(rho0);
  out.push_back(rho);
  const double h = grid.dt() / options.substeps;
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    const double start = grid.at(k);
    for (int s = 0; s < options.substeps; ++s) {
      const double t = start + s * h;
      const Mat2 k1 = rhs(rho, t);
      const Mat2 k2 = rhs(rho + 0.5 * h * k1, t + 0.5 * h);
      const Mat2 k3 = rhs(rho + 0.5 * h * k2, t + 0.5 * h);
      const Mat2 k4 = rhs(rho + h * k3, t + h);
      rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    rho = hermitize(rho);
    const double drift = std::abs(rho.trace().real() - 1.0);
    if (!rho.allFinite() || drift > options.instability_above ||
        rho.cwiseAbs().maxCoeff() > 1.0 + 1e-6) {
      std::ostringstream msg;
      msg << "integrate_lme: unstable at t = " << grid.at(k + 1)
          << " (trace drift " << drift << "); use a smaller dt or more substeps";
      throw Error(ErrorKind::Unstable, msg.str());
    }
    if (drift > options.renormalize_above) rho /= rho.trace().real();
    out.push_back(rho);
  }
  return out;
}

Mat2 analytic_gad(const Mat2& rho0, double j, double f, double t) {
  const double survive = std::exp(-j * t);  // 1 - p
  const double p = -std::expm1(-j * t);
  const double r11 = rho0(1, 1).real() * survive + p * f;
  const cd r01 = rho0(0, 1) * std::sqrt(survive);
  Mat2 out;
  out << 1.0 - r11, r01, std::conj(r01), r11;
  return out;
}

Mat2 steady_state(const DissipatorSpec& diss) {
  const double down = diss.j1 * (1.0 - diss.f);
  const double up = diss.j2 * diss.f;
  if (!(down + up > 0.0)) {
    throw Error(ErrorKind::Domain,
                "steady_state: no unique steady state without coupling");
  }
  const double p1 = up / (down + up);
  Mat2 out = Mat2::Zero();
  out(0, 0) = 1.0 - p1;
  out(1, 1) = p1;
  return out;
}

}  // namespace qtherm
