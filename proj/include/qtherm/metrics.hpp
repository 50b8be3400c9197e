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

// Distances and coherence measures for single-qubit states.

#pragma once

#include <vector>

#include "qtherm/core.hpp"

namespace qtherm {

/// Product rule for integrals over the unit sphere,
///   sum_k w_k g(theta_k, phi_k) ~ int_0^{2 pi} int_0^pi g sin(theta) dtheta dphi.
/// Gauss-Legendre in theta on [0, pi] with sin(theta) folded into the weights,
/// uniform trapezoid (periodic) in phi.
struct SphereQuadrature {
  int n_theta = 32;
  int n_phi = 64;
  std::vector<double> theta;
  std::vector<double> theta_weight;  // includes sin(theta)
  std::vector<double> phi;
  double phi_weight = 0.0;

  /// Throws ErrorKind::Config for fewer than 2 nodes in either direction.
  static SphereQuadrature make(int n_theta = 32, int n_phi = 64);

  /// Sum of all weights; 4 pi up to rounding.
  double total_weight() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// (1/2) sum |eig(rho - sigma)|. Validates both inputs.
double trace_distance(const Mat2& rho, const Mat2& sigma,
                      const Tolerances& tol = {});

/// l1 coherence: sum of |rho_ij| over i != j.
double coherence(const Mat2& rho);

/// [[cos(theta/2), -e^{i phi} sin(theta/2)],
///  [e^{-i phi} sin(theta/2), cos(theta/2)]]
Mat2 basis_rotation(double theta, double phi);

/// coherence(U rho U^dagger) for U = basis_rotation(theta, phi).
double rotated_coherence(const Mat2& rho, double theta, double phi);

/// Sphere average (1/4 pi) int rotated_coherence sin(theta) dtheta dphi.
double average_coherence(const Mat2& rho, const SphereQuadrature& quad);
double average_coherence(const Mat2& rho);

}  // namespace qtherm
