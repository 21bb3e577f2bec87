#pragma once

// Dense small-matrix kernels. Everything here is templated on the Eigen
// expression type so the kernels accept blocks, maps and products directly
// and work for any real scalar Eigen's SVD supports.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "glift/error.hpp"

namespace glift {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* who) {
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, std::string(who) + ": non-finite entry");
}

template <typename Derived>
DenseVector<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.size() == 0) return DenseVector<Scalar>();
  return Eigen::JacobiSVD<DenseMatrix<Scalar>>(a.eval()).singularValues();
}

}  // namespace detail

/// Numerical-rank threshold: max(rows, cols) * eps * sigma_max.
template <typename Scalar>
Scalar rank_tolerance(Eigen::Index rows, Eigen::Index cols, Scalar sigma_max) {
  return static_cast<Scalar>(std::max(rows, cols)) * std::numeric_limits<Scalar>::epsilon() *
         sigma_max;
}

/// Largest singular value (operator 2-norm).
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  detail::require_finite(a, "spectral_norm");
  const auto sv = detail::singular_values(a);
  return sv.size() == 0 ? typename Derived::Scalar(0) : sv(0);
}

/// Smallest of the min(rows, cols) singular values.
template <typename Derived>
typename Derived::Scalar smallest_singular_value(const Eigen::MatrixBase<Derived>& a) {
  detail::require_finite(a, "smallest_singular_value");
  const auto sv = detail::singular_values(a);
  return sv.size() == 0 ? typename Derived::Scalar(0) : sv(sv.size() - 1);
}

/// Moore-Penrose left inverse S = V diag(1/sigma) U^T of a full-column-rank
/// l x n matrix (l >= n), so that S * J = I_n. Among all left inverses this
/// one has minimal operator norm, 1/sigma_min.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> left_inverse(const Eigen::MatrixBase<Derived>& jac) {
  using Scalar = typename Derived::Scalar;
  detail::require_finite(jac, "left_inverse");
  const Eigen::Index l = jac.rows();
  const Eigen::Index n = jac.cols();
  if (l < n) {
    throw Error(ErrorKind::DimensionMismatch,
                "left_inverse needs rows >= cols, got " + std::to_string(l) + "x" +
                    std::to_string(n));
  }
  if (n == 0) return DenseMatrix<Scalar>(0, l);

  Eigen::JacobiSVD<DenseMatrix<Scalar>> svd(jac.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const Scalar sigma_min = sigma(n - 1);
  if (!(sigma_min > rank_tolerance(l, n, sigma(0)))) {
    throw Error(ErrorKind::RankDeficient, "left_inverse: sigma_min = " + std::to_string(double(sigma_min)),
                double(sigma_min));
  }
  return svd.matrixV() * sigma.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

/// Solves A x = b for square A, rejecting numerically singular A.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> solve_square(const Eigen::MatrixBase<DerivedA>& a,
                                                    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_finite(a, "solve_square");
  detail::require_finite(b, "solve_square");
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "solve_square: incompatible shapes");
  }
  if (a.rows() == 0) return DenseMatrix<Scalar>(0, b.cols());
  const auto sv = detail::singular_values(a);
  const Scalar sigma_min = sv(sv.size() - 1);
  if (!(sigma_min > rank_tolerance(a.rows(), a.cols(), sv(0)))) {
    throw Error(ErrorKind::RankDeficient, "solve_square: sigma_min = " + std::to_string(double(sigma_min)),
                double(sigma_min));
  }
  return a.eval().colPivHouseholderQr().solve(b.eval());
}

/// B * A^{-1} for square A, computed as (A^T \ B^T)^T.
template <typename DerivedB, typename DerivedA>
DenseMatrix<typename DerivedA::Scalar> right_solve(const Eigen::MatrixBase<DerivedB>& b,
                                                   const Eigen::MatrixBase<DerivedA>& a) {
  if (b.cols() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right_solve: incompatible shapes");
  return solve_square(a.transpose(), b.transpose()).transpose();
}

}  // namespace glift
