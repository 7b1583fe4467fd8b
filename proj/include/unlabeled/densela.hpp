#pragma once

// Dense linear-algebra kernel used by every other module.
//
// Least squares, rank and null space all come from one column-pivoted
// complete orthogonal decomposition, so rank + nullity == cols holds by
// construction. A pivot counts as zero when |r_ii| <= rank_tol * |r_00|.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "unlabeled/error.hpp"

namespace unlabeled {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

struct LsqResult {
  Vec solution;          // minimum-norm minimizer of ||m * solution - b||
  double residual_norm;  // ||m * solution - b||_2
  Index rank;
};

/// 1e-10 * max(rows, cols).
inline double default_rank_tol(const Mat& m) {
  return 1e-10 * static_cast<double>(std::max(m.rows(), m.cols()));
}

inline void require_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

inline void require_nonempty(const Mat& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1)
    throw DimensionError(std::string(what) + " must have at least one row and one column");
}

namespace detail {

inline Eigen::CompleteOrthogonalDecomposition<Mat> cod(const Mat& m, double rank_tol) {
  if (!(rank_tol > 0.0)) throw PreconditionError("rank_tol must be positive");
  Eigen::CompleteOrthogonalDecomposition<Mat> d(m.rows(), m.cols());
  d.setThreshold(rank_tol);
  d.compute(m);
  return d;
}

}  // namespace detail

inline LsqResult lstsq(const Mat& m, const Vec& b, double rank_tol) {
  require_nonempty(m, "lstsq matrix");
  if (b.size() != m.rows())
    throw DimensionError("lstsq: right-hand side has length " + std::to_string(b.size()) +
                         ", matrix has " + std::to_string(m.rows()) + " rows");
  require_finite(m, "lstsq matrix");
  require_finite(b, "lstsq right-hand side");

  const auto d = detail::cod(m, rank_tol);
  LsqResult out;
  out.rank = d.rank();
  out.solution = out.rank == 0 ? Vec::Zero(m.cols()) : Vec(d.solve(b));
  out.residual_norm = (m * out.solution - b).norm();
  return out;
}

inline LsqResult lstsq(const Mat& m, const Vec& b) { return lstsq(m, b, default_rank_tol(m)); }

inline Index rank(const Mat& m, double rank_tol) {
  require_nonempty(m, "rank matrix");
  require_finite(m, "rank matrix");
  return detail::cod(m, rank_tol).rank();
}

inline Index rank(const Mat& m) { return rank(m, default_rank_tol(m)); }

/// Orthonormal basis of the numerical null space; empty at full column rank.
inline std::vector<Vec> nullspace(const Mat& m, double rank_tol) {
  require_nonempty(m, "nullspace matrix");
  require_finite(m, "nullspace matrix");

  const auto d = detail::cod(m, rank_tol);
  const Index r = d.rank();
  const Index n = m.cols();
  std::vector<Vec> basis;
  if (r == n) return basis;
  if (r == 0) {
    for (Index j = 0; j < n; ++j) basis.push_back(Vec::Unit(n, j));
    return basis;
  }
  // m * P = Q * [T11 0; 0 0] * Z, so the trailing columns of P * Z^T span the kernel.
  const Mat z = d.matrixZ();
  const Mat kernel = d.colsPermutation() * z.transpose().rightCols(n - r);
  for (Index j = 0; j < kernel.cols(); ++j) basis.emplace_back(kernel.col(j));
  return basis;
}

inline std::vector<Vec> nullspace(const Mat& m) { return nullspace(m, default_rank_tol(m)); }

/// Determinant by LU with partial pivoting.
inline double det(const Mat& m) {
  require_nonempty(m, "det matrix");
  if (m.rows() != m.cols())
    throw DimensionError("det: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", not square");
  require_finite(m, "det matrix");
  return Eigen::PartialPivLU<Mat>(m).determinant();
}

/// Orthonormal basis (as columns) of the numerical column span.
inline Mat column_basis(const Mat& m, double rank_tol) {
  require_nonempty(m, "column_basis matrix");
  require_finite(m, "column_basis matrix");
  Eigen::ColPivHouseholderQR<Mat> qr(m.rows(), m.cols());
  qr.setThreshold(rank_tol);
  qr.compute(m);
  const Index r = qr.rank();
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), r);
  return q;
}

inline Mat hcat(const Mat& left, const Mat& right) {
  if (left.rows() != right.rows())
    throw DimensionError("hcat: row counts differ (" + std::to_string(left.rows()) + " vs " +
                         std::to_string(right.rows()) + ")");
  Mat out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

}  // namespace unlabeled
