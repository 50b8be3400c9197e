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

// Dense complex linear algebra for one qubit (2x2) and qubit pairs (4x4).
//
// Everything here is header-only and templated on the real scalar type so the
// same routines serve the double-precision engines and long double checks in
// tests. Fixed-size Eigen types are used throughout; dynamic matrices are
// accepted where noted and shape-checked at runtime.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qtherm/error.hpp"

namespace qtherm {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar, int N>
using SquareMatrix = Eigen::Matrix<Complex<Scalar>, N, N>;

template <typename Scalar>
using Matrix2 = SquareMatrix<Scalar, 2>;

template <typename Scalar>
using Matrix4 = SquareMatrix<Scalar, 4>;

template <typename Scalar, int N>
using StateVector = Eigen::Matrix<Complex<Scalar>, N, 1>;

using cd = std::complex<double>;
using Mat2 = Matrix2<double>;
using Mat4 = Matrix4<double>;
using Vec2 = StateVector<double, 2>;
using Vec4 = StateVector<double, 4>;

// Runtime-shaped counterparts, used where the dimension is data (circuits).
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Numerical tolerances shared by the validity checks. The defaults are the
/// module constants; configuration files may override them.
struct Tolerances {
  double hermitian = 1e-10;  // |A - A^dagger| for eigen-solver input
  double trace = 1e-9;       // |Tr rho - 1| for density-matrix input
  double eigen = 1e-12;      // convergence target of the 4x4 eigensolver
};

namespace pauli {

template <typename Scalar = double>
Matrix2<Scalar> identity() {
  return Matrix2<Scalar>::Identity();
}

template <typename Scalar = double>
Matrix2<Scalar> x() {
  Matrix2<Scalar> m;
  m << Scalar(0), Scalar(1), Scalar(1), Scalar(0);
  return m;
}

template <typename Scalar = double>
Matrix2<Scalar> y() {
  const Complex<Scalar> i(0, 1);
  Matrix2<Scalar> m;
  m << Scalar(0), -i, i, Scalar(0);
  return m;
}

template <typename Scalar = double>
Matrix2<Scalar> z() {
  Matrix2<Scalar> m;
  m << Scalar(1), Scalar(0), Scalar(0), Scalar(-1);
  return m;
}

/// sigma_- = |0><1|: moves the excited level |1> down to |0>.
template <typename Scalar = double>
Matrix2<Scalar> lowering() {
  Matrix2<Scalar> m = Matrix2<Scalar>::Zero();
  m(0, 1) = Scalar(1);
  return m;
}

/// sigma_+ = |1><0|.
template <typename Scalar = double>
Matrix2<Scalar> raising() {
  Matrix2<Scalar> m = Matrix2<Scalar>::Zero();
  m(1, 0) = Scalar(1);
  return m;
}

}  // namespace pauli

namespace ket {

template <typename Scalar = double>
StateVector<Scalar, 2> zero() {
  return StateVector<Scalar, 2>(Scalar(1), Scalar(0));
}

template <typename Scalar = double>
StateVector<Scalar, 2> one() {
  return StateVector<Scalar, 2>(Scalar(0), Scalar(1));
}

template <typename Scalar = double>
StateVector<Scalar, 2> plus() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return StateVector<Scalar, 2>(r, r);
}

template <typename Scalar = double>
StateVector<Scalar, 2> minus() {
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  return StateVector<Scalar, 2>(r, -r);
}

}  // namespace ket

/// |psi><psi| for any column vector expression.
template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& psi) {
  return (psi * psi.adjoint()).eval();
}

/// Checked matrix product. Fixed-size operands are checked at compile time by
/// Eigen; dynamic ones are checked here.
template <typename DerivedA, typename DerivedB>
auto mat_mul(const Eigen::MatrixBase<DerivedA>& a,
             const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::Dimension,
                "mat_mul: " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " times " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return (a * b).eval();
}

template <typename Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint().eval();
}

/// (A + A^dagger) / 2.
template <typename Derived>
auto hermitize(const Eigen::MatrixBase<Derived>& a) {
  return ((a + a.adjoint()) * typename Derived::RealScalar(0.5)).eval();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_error(
    const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a,
                  typename Derived::RealScalar tol) {
  return a.rows() == a.cols() && hermiticity_error(a) <= tol;
}

/// Tensor product of two single-qubit operators; the first factor indexes the
/// most significant bit of the 4x4 result.
template <typename DerivedA, typename DerivedB>
Matrix4<typename DerivedA::RealScalar> kron(
    const Eigen::MatrixBase<DerivedA>& a,
    const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw Error(ErrorKind::Dimension, "kron: only 2x2 factors are supported");
  }
  Matrix4<typename DerivedA::RealScalar> out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

/// Eigenvalues of a Hermitian 2x2 or 4x4 matrix in ascending order.
///
/// The 2x2 case is closed form. The 4x4 case is handed to Eigen's
/// self-adjoint solver (Householder tridiagonalisation followed by implicit
/// symmetric QR), which converges to machine precision.
template <typename Derived>
auto herm_eigvals(const Eigen::MatrixBase<Derived>& h,
                  typename Derived::RealScalar tol =
                      typename Derived::RealScalar(1e-10)) {
  using Real = typename Derived::RealScalar;
  using Result = Eigen::Matrix<Real, Derived::RowsAtCompileTime, 1>;
  if (h.rows() != h.cols() || (h.rows() != 2 && h.rows() != 4)) {
    throw Error(ErrorKind::Dimension,
                "herm_eigvals: expected a 2x2 or 4x4 matrix");
  }
  const Real err = hermiticity_error(h);
  if (!(err <= tol)) {
    throw Error(ErrorKind::InvalidState,
                "herm_eigvals: matrix is not Hermitian (deviation " +
                    std::to_string(static_cast<double>(err)) + ")");
  }
  Result out;
  out.resize(h.rows());
  if (h.rows() == 2) {
    const Real a = std::real(h(0, 0));
    const Real d = std::real(h(1, 1));
    const Real mean = (a + d) / Real(2);
    const Real half_gap = std::hypot((a - d) / Real(2), std::abs(h(0, 1)));
    out(0) = mean - half_gap;
    out(1) = mean + half_gap;
    return out;
  }
  using Dense = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                              Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Dense> solver(Dense(hermitize(h)),
                                              Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Solver, "herm_eigvals: eigensolver did not converge");
  }
  for (Eigen::Index i = 0; i < h.rows(); ++i) out(i) = solver.eigenvalues()(i);
  return out;
}

enum class Subsystem { First = 0, Second = 1 };

/// Reduce a two-qubit density matrix onto one factor.
template <typename Derived>
Matrix2<typename Derived::RealScalar> partial_trace(
    const Eigen::MatrixBase<Derived>& rho, Subsystem keep,
    typename Derived::RealScalar trace_tol =
        typename Derived::RealScalar(1e-9)) {
  using Real = typename Derived::RealScalar;
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw Error(ErrorKind::Dimension, "partial_trace: expected a 4x4 matrix");
  }
  if (!(std::abs(rho.trace() - Complex<Real>(1)) <= trace_tol)) {
    throw Error(ErrorKind::InvalidState, "partial_trace: trace is not 1");
  }
  Matrix2<Real> out = Matrix2<Real>::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        out(i, j) += keep == Subsystem::First ? rho(2 * i + k, 2 * j + k)
                                              : rho(2 * k + i, 2 * k + j);
      }
    }
  }
  return out;
}

/// Hermitian, unit trace and positive semidefinite within `tol`.
template <typename Derived>
bool is_density_matrix(const Eigen::MatrixBase<Derived>& rho,
                       typename Derived::RealScalar tol) {
  using Real = typename Derived::RealScalar;
  if (!rho.allFinite() || !is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace() - Complex<Real>(1)) > tol) return false;
  return herm_eigvals(rho, tol).minCoeff() >= -tol;
}

/// Single-qubit quantum channel in Kraus form.
template <typename Scalar>
struct KrausSet {
  std::vector<Matrix2<Scalar>> ops;

  /// max |sum K^dagger K - I|.
  Scalar completeness_error() const {
    Matrix2<Scalar> acc = Matrix2<Scalar>::Zero();
    for (const auto& k : ops) acc += k.adjoint() * k;
    return (acc - Matrix2<Scalar>::Identity()).cwiseAbs().maxCoeff();
  }

  bool is_complete(Scalar tol = Scalar(1e-12)) const {
    return !ops.empty() && completeness_error() <= tol;
  }

  Matrix2<Scalar> apply(const Matrix2<Scalar>& rho) const {
    Matrix2<Scalar> out = Matrix2<Scalar>::Zero();
    for (const auto& k : ops) out.noalias() += k * rho * k.adjoint();
    return out;
  }
};

}  // namespace qtherm
