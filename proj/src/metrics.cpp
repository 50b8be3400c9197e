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

#include "qtherm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qtherm {

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  // Symmetric Jacobi matrix of the Legendre recurrence; nodes are its
  // eigenvalues and weights 2 v_0^2 from the normalised eigenvectors.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Solver, "gauss_legendre: eigensolver failed");
  }
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    weights[k] = 2.0 * v0 * v0;
  }
}

SphereQuadrature SphereQuadrature::make(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) {
    throw Error(ErrorKind::Config, "quadrature: need at least 2 nodes per axis");
  }
  SphereQuadrature q;
  q.n_theta = n_theta;
  q.n_phi = n_phi;
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(n_theta, x, w);
  const double half_pi = 0.5 * std::numbers::pi;
  q.theta.resize(n_theta);
  q.theta_weight.resize(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    q.theta[k] = half_pi * (x[k] + 1.0);
    q.theta_weight[k] = half_pi * w[k] * std::sin(q.theta[k]);
  }
  q.phi.resize(n_phi);
  q.phi_weight = 2.0 * std::numbers::pi / n_phi;
  for (int k = 0; k < n_phi; ++k) q.phi[k] = k * q.phi_weight;
  return q;
}

double SphereQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : theta_weight) s += w;
  return s * phi_weight * n_phi;
}

double trace_distance(const Mat2& rho, const Mat2& sigma,
                      const Tolerances& tol) {
  if (!is_density_matrix(rho, tol.trace) || !is_density_matrix(sigma, tol.trace)) {
    throw Error(ErrorKind::InvalidState, "trace_distance: invalid density matrix");
  }
  const auto ev = herm_eigvals(hermitize(rho - sigma), tol.hermitian);
  return 0.5 * ev.cwiseAbs().sum();
}

double coherence(const Mat2& rho) {
  return std::abs(rho(0, 1)) + std::abs(rho(1, 0));
}

Mat2 basis_rotation(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const cd e = std::polar(1.0, phi);
  Mat2 u;
  u << c, -e * s, std::conj(e) * s, c;
  return u;
}

double rotated_coherence(const Mat2& rho, double theta, double phi) {
  const Mat2 u = basis_rotation(theta, phi);
  return coherence(u * rho * u.adjoint());
}

double average_coherence(const Mat2& rho, const SphereQuadrature& quad) {
  // The rotated coherence is |r x m| for Bloch vector r and measurement axis
  // m(theta, phi) = (-sin t cos p, sin t sin p, cos t). It has conical kinks
  // at m = +-r, so the nodes are laid out in a frame whose pole is r: the
  // surface measure is rotation invariant and the kinks land on the poles.
  const Eigen::Vector3d r(2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
                          (rho(0, 0) - rho(1, 1)).real());
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
  if (r.norm() > 1e-300) {
    const Eigen::Vector3d e3 = r.normalized();
    const Eigen::Vector3d seed = std::abs(e3.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                                        : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d e1 = (seed - seed.dot(e3) * e3).normalized();
    frame.col(0) = e1;
    frame.col(1) = e3.cross(e1);
    frame.col(2) = e3;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < quad.theta.size(); ++i) {
    const double st = std::sin(quad.theta[i]);
    const double ct = std::cos(quad.theta[i]);
    double ring = 0.0;
    for (double phi : quad.phi) {
      const Eigen::Vector3d m =
          frame * Eigen::Vector3d(st * std::cos(phi), st * std::sin(phi), ct);
      const double theta_lab = std::acos(std::clamp(m.z(), -1.0, 1.0));
      const double phi_lab = std::atan2(m.y(), -m.x());
      ring += rotated_coherence(rho, theta_lab, phi_lab);
    }
    acc += quad.theta_weight[i] * ring;
  }
  return acc * quad.phi_weight / (4.0 * std::numbers::pi);
}

double average_coherence(const Mat2& rho) {
  static const SphereQuadrature quad = SphereQuadrature::make();
  return average_coherence(rho, quad);
}

}  // namespace qtherm
