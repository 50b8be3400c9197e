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

// Reference evolution of the qubit density matrix.

#pragma once

#include <cstddef>
#include <vector>

#include "qtherm/model.hpp"

namespace qtherm {

/// Uniform grid t_k = t0 + k dt, k = 0..n_steps, with t_{n_steps} = t1.
class TimeGrid {
 public:
  TimeGrid() = default;
  /// Throws ErrorKind::Config unless t1 > t0, 0 < dt <= t1 - t0 and dt
  /// divides the interval (to 1e-9 relative).
  TimeGrid(double t0, double t1, double dt);

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  double dt() const noexcept { return dt_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return n_steps_ + 1; }
  double at(std::size_t k) const noexcept {
    return k == n_steps_ ? t1_ : t0_ + static_cast<double>(k) * dt_;
  }
  std::vector<double> times() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t0_ = 0.0;
  double t1_ = 1.0;
  double dt_ = 1.0;
  std::size_t n_steps_ = 1;
};

struct LmeOptions {
  /// RK4 steps per grid interval; the integrator step is dt / substeps.
  int substeps = 100;
  /// Renormalise the trace when it drifts by more than this.
  double renormalize_above = 1e-9;
  /// Abort when the trace drifts by more than this in one interval.
  double instability_above = 1e-6;
};

/// Classical RK4 integration of the master equation, sampled on the grid.
/// Each sample is re-Hermitised. Throws ErrorKind::InvalidState for an
/// invalid rho0 and ErrorKind::Unstable when the step is too large.
std::vector<Mat2> integrate_lme(const Mat2& rho0, const DriveSpec& drive,
                                const DissipatorSpec& diss,
                                const TimeGrid& grid,
                                const LmeOptions& options = {});

/// Closed-form evolution under the dissipator alone (no Hamiltonian):
/// decay probability p = 1 - exp(-J t),
///   rho11(t) = rho11(0) (1 - p) + p f,  rho01(t) = rho01(0) sqrt(1 - p).
Mat2 analytic_gad(const Mat2& rho0, double j, double f, double t);

/// Fixed point of the dissipator, diag(1 - f, f) for J1 = J2. Throws
/// ErrorKind::Domain when both couplings vanish.
Mat2 steady_state(const DissipatorSpec& diss);

}  // namespace qtherm
