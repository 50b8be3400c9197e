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

// Linear quantum-state-diffusion trajectories driven by Ornstein-Uhlenbeck
// noise, and their ensemble average.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qtherm/lindblad.hpp"
#include "qtherm/model.hpp"
#include "qtherm/rng.hpp"

namespace qtherm {

/// Exact OU update over dt:
///   z' = z e^{-gamma dt} + sqrt(gamma/2 (1 - e^{-2 gamma dt})) u,
/// with u ~ CN(0, 1). Keeps E|z|^2 = gamma/2 stationary.
cd ou_step(cd z, double gamma, double dt, cd u);

/// Two independent complex OU processes (one per dissipation channel),
/// sampled on a fixed step. Each channel owns its own substream of the
/// master seed, so a trajectory's noise depends only on its StreamId.
class NoiseStream {
 public:
  /// z(0) ~ CN(0, gamma/2). `id.channel` is ignored; channels 0 and 1 are used.
  NoiseStream(const StreamId& id, double gamma, double dt);

  /// z identically zero: the noise-free non-Hermitian evolution.
  static NoiseStream silent(double dt = 1.0);

  cd z1() const noexcept { return z_[0]; }
  cd z2() const noexcept { return z_[1]; }
  double gamma() const noexcept { return gamma_; }
  double dt() const noexcept { return dt_; }

  /// Move both processes forward by one step.
  void advance();

 private:
  NoiseStream(double gamma, double dt);

  double gamma_;
  double dt_;
  bool silent_;
  std::array<Philox4x32, 2> rng_;
  std::array<cd, 2> z_{};
};

struct TrajectoryState {
  Vec2 psi;  // unnormalised
  double t = 0.0;
  double squared_norm = 1.0;
};

struct QsdOptions {
  NoiseCoupling coupling = NoiseCoupling::SqrtJ;
  int substeps = 1;              // RK4 steps per grid interval
  std::size_t trajectory = 0;    // reported in errors
  double norm_limit = 1e6;       // squared norm treated as overflow
};

/// Integrates d psi/dt = -i H_eff(t) psi with RK4. The drive is evaluated at
/// every stage time; the noise is held at its grid-step value and advanced
/// once per interval. The norm is not restored (linear unravelling).
/// Throws TrajectoryError when the squared norm exceeds options.norm_limit.
std::vector<TrajectoryState> evolve_trajectory_exact(
    const Vec2& psi0, const DriveSpec& drive, const DissipatorSpec& diss,
    NoiseStream& noise, const TimeGrid& grid, const QsdOptions& options = {});

/// Mean of a set of density-matrix series with entrywise standard errors.
struct EnsembleSeries {
  std::vector<Mat2> rho;
  /// Standard error of the mean per entry, real and imaginary parts stored
  /// in the real and imaginary parts of each element.
  std::vector<Mat2> stderr_;
  /// Trace of the raw mean at each time; the normalisation divisor.
  std::vector<double> trace;
  std::size_t count = 0;
};

/// Streaming mean/variance (Welford) of Mat2 series. Adding in a fixed order
/// gives bit-identical results regardless of where the series came from.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(std::size_t n_times);

  /// Throws ErrorKind::Dimension if the series length differs.
  void add(std::span<const Mat2> series);

  std::size_t count() const noexcept { return count_; }
  std::size_t n_times() const noexcept { return mean_.size(); }

  /// With `normalize`, each mean (and its standard error) is divided by its
  /// real trace.
  EnsembleSeries result(bool normalize) const;

 private:
  std::vector<Mat2> mean_;
  std::vector<Eigen::Matrix2d> m2_re_;
  std::vector<Eigen::Matrix2d> m2_im_;
  std::size_t count_ = 0;
};

/// |psi><psi| averaged over trajectories in index order.
EnsembleSeries ensemble_average(
    std::span<const std::vector<TrajectoryState>> trajectories,
    bool normalize = true);

/// Outer products of one trajectory, the per-trajectory contribution to the
/// ensemble.
std::vector<Mat2> outer_products(std::span<const TrajectoryState> trajectory);

}  // namespace qtherm
