#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symrig/errors.hpp"

namespace symrig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values below the returned threshold count as zero. With tol <= 0
/// the default policy max(rows, cols) * machine epsilon * sigma_max applies;
/// a positive tol overrides the relative factor, keeping the sigma_max scale.
inline double singular_value_threshold(double sigma_max, Eigen::Index rows,
                                       Eigen::Index cols, double tol) {
  if (sigma_max <= 0.0) return 0.0;
  const double rel =
      tol > 0.0 ? tol
                : static_cast<double>(std::max(rows, cols)) *
                      std::numeric_limits<double>::epsilon();
  return rel * sigma_max;
}

namespace detail {

inline Eigen::JacobiSVD<Matrix> full_svd(const Matrix& a) {
  return Eigen::JacobiSVD<Matrix>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

inline int svd_rank(const Eigen::JacobiSVD<Matrix>& svd, Eigen::Index rows,
                    Eigen::Index cols, double tol) {
  if (svd.singularValues().size() == 0) return 0;
  const double thresh =
      singular_value_threshold(svd.singularValues()(0), rows, cols, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++r;
  return r;
}

} // namespace detail

inline int numeric_rank(const Matrix& a, double tol = 0.0) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const auto svd = detail::full_svd(a);
  return detail::svd_rank(svd, a.rows(), a.cols(), tol);
}

/// Orthonormal basis of the right null space, as matrix columns. An empty
/// kernel gives a matrix with zero columns.
inline Matrix kernel_basis(const Matrix& a, double tol = 0.0) {
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  if (a.cols() == 0) return Matrix(0, 0);
  const auto svd = detail::full_svd(a);
  const int r = detail::svd_rank(svd, a.rows(), a.cols(), tol);
  return svd.matrixV().rightCols(a.cols() - r);
}

/// Orthonormal basis of the left null space (kernel of the transpose).
inline Matrix left_kernel_basis(const Matrix& a, double tol = 0.0) {
  if (a.cols() == 0) return Matrix::Identity(a.rows(), a.rows());
  if (a.rows() == 0) return Matrix(0, 0);
  const auto svd = detail::full_svd(a);
  const int r = detail::svd_rank(svd, a.rows(), a.cols(), tol);
  return svd.matrixU().rightCols(a.rows() - r);
}

/// Minimum-norm least-squares solution of A x = b via the thresholded
/// pseudoinverse.
inline Vector min_norm_least_squares(const Matrix& a, const Vector& b,
                                     double tol = 0.0) {
  if (a.rows() != b.size())
    throw validation_error("right-hand side length does not match matrix rows");
  if (a.cols() == 0) return Vector(0);
  if (a.rows() == 0) return Vector::Zero(a.cols());
  const auto svd = detail::full_svd(a);
  const int r = detail::svd_rank(svd, a.rows(), a.cols(), tol);
  Vector x = Vector::Zero(a.cols());
  for (int i = 0; i < r; ++i) {
    const double coef = svd.matrixU().col(i).dot(b) / svd.singularValues()(i);
    x += coef * svd.matrixV().col(i);
  }
  return x;
}

/// Orthonormal basis of the column space by modified Gram-Schmidt with
/// column pivoting. The pivot is the remaining column of largest norm, ties
/// broken by lowest index, which makes the basis deterministic for a given
/// input matrix.
inline Matrix orthonormal_column_basis(const Matrix& a, double tol = 0.0) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Matrix(a.rows(), 0);

  Matrix work = a;
  double max_initial = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    max_initial = std::max(max_initial, work.col(j).norm());
  if (max_initial == 0.0) return Matrix(a.rows(), 0);
  // Column norms play the role of singular values for the drop decision.
  const double thresh =
      singular_value_threshold(max_initial, a.rows(), n, tol);

  Matrix q(a.rows(), std::min<Eigen::Index>(a.rows(), n));
  Eigen::Index k = 0;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (k < q.cols()) {
    Eigen::Index best = -1;
    double best_norm = thresh;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double norm = work.col(j).norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = j;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    Vector u = work.col(best) / work.col(best).norm();
    q.col(k) = u;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!used[static_cast<std::size_t>(j)])
        work.col(j) -= u.dot(work.col(j)) * u;
    ++k;
  }
  return q.leftCols(k);
}

/// Orthogonal projector onto the column span of an orthonormal basis.
inline Matrix span_projector(const Matrix& orthonormal_cols) {
  return orthonormal_cols * orthonormal_cols.transpose();
}

} // namespace symrig
