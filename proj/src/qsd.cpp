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

#include "qtherm/qsd.hpp"

#include <cmath>
#include <string>

namespace qtherm {

cd ou_step(cd z, double gamma, double dt, cd u) {
  const double decay = std::exp(-gamma * dt);
  const double spread = std::sqrt(0.5 * gamma * -std::expm1(-2.0 * gamma * dt));
  return z * decay + spread * u;
}

namespace {

StreamId channel_id(StreamId id, std::uint8_t channel) {
  id.channel = channel;
  id.purpose = StreamPurpose::Noise;
  return id;
}

}  // namespace

NoiseStream::NoiseStream(double gamma, double dt)
    : gamma_(gamma),
      dt_(dt),
      silent_(true),
      rng_{Philox4x32(0, 0), Philox4x32(0, 0)} {}

NoiseStream::NoiseStream(const StreamId& id, double gamma, double dt)
    : gamma_(gamma),
      dt_(dt),
      silent_(false),
      rng_{make_stream(channel_id(id, 0)), make_stream(channel_id(id, 1))} {
  if (!(gamma > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::Config, "noise: gamma and dt must be positive");
  }
  const double sd = std::sqrt(0.5 * gamma);
  for (int k = 0; k < 2; ++k) z_[k] = sd * complex_normal(rng_[k]);
}

NoiseStream NoiseStream::silent(double dt) { return NoiseStream(0.0, dt); }

void NoiseStream::advance() {
  if (silent_) return;
  for (int k = 0; k < 2; ++k) {
    z_[k] = ou_step(z_[k], gamma_, dt_, complex_normal(rng_[k]));
  }
}

std::vector<TrajectoryState> evolve_trajectory_exact(
    const Vec2& psi0, const DriveSpec& drive, const DissipatorSpec& diss,
    NoiseStream& noise, const TimeGrid& grid, const QsdOptions& options) {
  if (!psi0.allFinite() || std::abs(psi0.squaredNorm() - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidState, "qsd: initial state is not normalised");
  }
  if (options.substeps < 1) {
    throw Error(ErrorKind::Config, "qsd: substeps must be >= 1");
  }
  const cd minus_i(0.0, -1.0);
  const double h = grid.dt() / options.substeps;

  std::vector<TrajectoryState> out;
  out.reserve(grid.size());
  Vec2 psi = psi0;
  out.push_back({psi, grid.at(0), psi.squaredNorm()});
  for (std::size_t k = 0; k < grid.n_steps(); ++k) {
    const cd z1 = noise.z1();
    const cd z2 = noise.z2();
    auto generator = [&](double t) {
      return (minus_i * effective_hamiltonian_matrix(drive, diss, z1, z2, t,
                                                     options.coupling))
          .eval();
    };
    double t = grid.at(k);
    for (int s = 0; s < options.substeps; ++s) {
      const Mat2 a0 = generator(t);
      const Mat2 a1 = generator(t + 0.5 * h);
      const Mat2 a2 = generator(t + h);
      const Vec2 k1 = a0 * psi;
      const Vec2 k2 = a1 * (psi + 0.5 * h * k1);
      const Vec2 k3 = a1 * (psi + 0.5 * h * k2);
      const Vec2 k4 = a2 * (psi + h * k3);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    noise.advance();
    const double norm2 = psi.squaredNorm();
    if (!std::isfinite(norm2) || norm2 > options.norm_limit) {
      throw TrajectoryError(
          options.trajectory,
          "qsd: trajectory " + std::to_string(options.trajectory) +
              " overflowed at t = " + std::to_string(grid.at(k + 1)));
    }
    out.push_back({psi, grid.at(k + 1), norm2});
  }
  return out;
}

EnsembleAccumulator::EnsembleAccumulator(std::size_t n_times)
    : mean_(n_times, Mat2::Zero()),
      m2_re_(n_times, Eigen::Matrix2d::Zero()),
      m2_im_(n_times, Eigen::Matrix2d::Zero()) {}

void EnsembleAccumulator::add(std::span<const Mat2> series) {
  if (series.size() != mean_.size()) {
    throw Error(ErrorKind::Dimension,
                "ensemble: series of length " + std::to_string(series.size()) +
                    ", expected " + std::to_string(mean_.size()));
  }
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Mat2 delta = series[k] - mean_[k];
    mean_[k] += delta / n;
    const Mat2 delta_after = series[k] - mean_[k];
    m2_re_[k].array() += delta.real().array() * delta_after.real().array();
    m2_im_[k].array() += delta.imag().array() * delta_after.imag().array();
  }
}

EnsembleSeries EnsembleAccumulator::result(bool normalize) const {
  EnsembleSeries out;
  out.count = count_;
  out.rho = mean_;
  out.stderr_.assign(mean_.size(), Mat2::Zero());
  out.trace.resize(mean_.size());
  const double n = static_cast<double>(count_);
  for (std::size_t k = 0; k < mean_.size(); ++k) {
    if (count_ > 1) {
      const double scale = 1.0 / ((n - 1.0) * n);
      out.stderr_[k].real() = (m2_re_[k] * scale).cwiseSqrt();
      out.stderr_[k].imag() = (m2_im_[k] * scale).cwiseSqrt();
    }
    out.trace[k] = mean_[k].trace().real();
    if (normalize && out.trace[k] != 0.0) {
      out.rho[k] /= out.trace[k];
      out.stderr_[k] /= out.trace[k];
    }
  }
  return out;
}

std::vector<Mat2> outer_products(std::span<const TrajectoryState> trajectory) {
  std::vector<Mat2> out;
  out.reserve(trajectory.size());
  for (const auto& s : trajectory) out.push_back(projector(s.psi));
  return out;
}

EnsembleSeries ensemble_average(
    std::span<const std::vector<TrajectoryState>> trajectories,
    bool normalize) {
  if (trajectories.empty()) {
    throw Error(ErrorKind::Config, "ensemble: no trajectories");
  }
  EnsembleAccumulator acc(trajectories.front().size());
  for (const auto& traj : trajectories) acc.add(outer_products(traj));
  return acc.result(normalize);
}

}  // namespace qtherm
