#pragma once

// Ambiguous pairs for under-sampled systems (N < 2K): a permutation P and
// signals x != x_hat with B x = P B x_hat, so no decoder can tell them apart.
//
// Both constructions use the single-cycle permutation (row i of P B is row
// i + 1 mod N of B) on the leading K' columns of B and pad x, x_hat with
// zeros up to length K:
//
//   even N, K' = N/2 + 1:  G = [B', P B'] minus its columns K'-1 and 2K'-1 is
//       square; solving G~ z = -g2 (g2 = column 2K'-1 of G) gives
//       z = (-x_lead; x_hat_lead) with x_{K'-1} = 0 and x_hat_{K'-1} = 1.
//   odd N,  K' = (N+1)/2:  G~ = G minus its last column g, t = G~^{-1} g,
//       x = t[0, K'), x_hat = (-t[K', 2K'-1), 1); then x_{K'-1} - x_hat_{K'-1} = t_{K'-1} - 1.
//       The pair is divided by |t_{K'-1} - 1| so that coordinate gap is exactly 1.
//
// Indices here are 0-based throughout.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"
#include "unlabeled/model.hpp"

namespace unlabeled {

struct AmbiguousPair {
  Vec x;
  Vec x_hat;
  Selection pi;
  double residual = 0.0;    // ||B x - P B x_hat||
  double separation = 0.0;  // ||x - x_hat||_inf
  std::size_t base_k = 0;   // K', number of leading columns used
  double delta = 1.0;       // raw gap before normalisation (odd case), 1 for even N
};

inline Selection single_cycle_permutation(std::size_t n) {
  if (n < 2) throw PreconditionError("single-cycle permutation needs n >= 2");
  std::vector<std::size_t> picks(n);
  for (std::size_t i = 0; i < n; ++i) picks[i] = (i + 1) % n;
  return Selection(n, std::move(picks));
}

/// Square system of the odd construction for an N x K' matrix with N = 2K' - 1.
struct OddSystem {
  Mat g_tilde;  // [B, P B] without its last column
  Vec g;        // last column of [B, P B]
};

inline OddSystem odd_system(const Mat& b) {
  require_nonempty(b, "matrix");
  const Index n = b.rows();
  const Index k = b.cols();
  if (n != 2 * k - 1)
    throw PreconditionError("odd_system needs N = 2K - 1 (N = " + std::to_string(n) +
                            ", K = " + std::to_string(k) + ")");
  const Mat pb = apply_selection(single_cycle_permutation(static_cast<std::size_t>(n)), b);
  OddSystem s;
  s.g_tilde = hcat(b, pb.leftCols(k - 1));
  s.g = pb.col(k - 1);
  return s;
}

namespace detail {

inline void require_underdetermined(const Mat& b) {
  require_nonempty(b, "matrix");
  require_finite(b, "matrix");
  if (b.cols() < 2) throw PreconditionError("ambiguous pairs need K >= 2");
  if (b.rows() < 2) throw PreconditionError("ambiguous pairs need N >= 2");
  if (b.rows() >= 2 * b.cols())
    throw PreconditionError("ambiguous pairs need N < 2K (N = " + std::to_string(b.rows()) +
                            ", K = " + std::to_string(b.cols()) + ")");
}

inline Vec solve_square(const Mat& m, const Vec& rhs) {
  Eigen::PartialPivLU<Mat> lu(m);
  if (!(lu.rcond() > 1e-12)) throw DegenerateInstance("degenerate instance: singular G~");
  Vec sol = lu.solve(rhs);
  if (!sol.allFinite()) throw DegenerateInstance("degenerate instance: non-finite solution");
  return sol;
}

inline AmbiguousPair finish_pair(const Mat& b, Vec x, Vec x_hat, std::size_t base_k, double delta) {
  const auto n = static_cast<std::size_t>(b.rows());
  AmbiguousPair p{std::move(x), std::move(x_hat), single_cycle_permutation(n), 0.0, 0.0, base_k,
                  delta};
  const Vec lhs = b * p.x;
  p.residual = (lhs - apply_selection(p.pi, b) * p.x_hat).norm();
  p.separation = (p.x - p.x_hat).lpNorm<Eigen::Infinity>();
  if (!(p.residual <= 1e-8 * (1.0 + lhs.norm())))
    throw DegenerateInstance("degenerate instance: residual " + std::to_string(p.residual) +
                             " after construction");
  return p;
}

}  // namespace detail

/// Even N < 2K.
inline AmbiguousPair construct_even(const Mat& b) {
  detail::require_underdetermined(b);
  if (b.rows() % 2 != 0) throw PreconditionError("construct_even needs an even number of rows");
  const Index n = b.rows();
  const Index k = b.cols();
  const Index kb = n / 2 + 1;

  const Mat lead = b.leftCols(kb);
  const Mat plead = apply_selection(single_cycle_permutation(static_cast<std::size_t>(n)), lead);
  const Mat g_tilde = hcat(lead.leftCols(kb - 1), plead.leftCols(kb - 1));
  const Vec g2 = plead.col(kb - 1);
  const Vec z = detail::solve_square(g_tilde, -g2);
  if (!(z.norm() > 0.0)) throw DegenerateInstance("degenerate instance: zero solution");

  Vec x = Vec::Zero(k);
  Vec x_hat = Vec::Zero(k);
  x.head(kb - 1) = -z.head(kb - 1);
  x_hat.head(kb - 1) = z.tail(kb - 1);
  x_hat(kb - 1) = 1.0;
  return detail::finish_pair(b, std::move(x), std::move(x_hat), static_cast<std::size_t>(kb), 1.0);
}

/// Odd N < 2K.
inline AmbiguousPair construct_odd(const Mat& b) {
  detail::require_underdetermined(b);
  if (b.rows() % 2 != 1) throw PreconditionError("construct_odd needs an odd number of rows");
  const Index n = b.rows();
  const Index k = b.cols();
  const Index kb = (n + 1) / 2;

  const OddSystem sys = odd_system(b.leftCols(kb));
  const Vec t = detail::solve_square(sys.g_tilde, sys.g);
  const double delta = t(kb - 1) - 1.0;
  if (!(std::abs(delta) > 1e-10))
    throw DegenerateInstance("degenerate instance: coordinate gap is zero");

  Vec x = Vec::Zero(k);
  Vec x_hat = Vec::Zero(k);
  x.head(kb) = t.head(kb);
  x_hat.head(kb - 1) = -t.tail(kb - 1);
  x_hat(kb - 1) = 1.0;
  x /= std::abs(delta);
  x_hat /= std::abs(delta);
  return detail::finish_pair(b, std::move(x), std::move(x_hat), static_cast<std::size_t>(kb), delta);
}

/// Picks the even or odd construction by the row count.
inline AmbiguousPair construct_ambiguous_pair(const Mat& b) {
  return b.rows() % 2 == 0 ? construct_even(b) : construct_odd(b);
}

/// (2k-1) x k matrix whose odd_system G~ is a permutation matrix:
/// row 0 = e_{k-1}; for 1-based rows i = 2..2k-1, even i -> 0, odd i -> e_{(i-1)/2 - 1}.
inline Mat rank_witness_assignment(std::size_t k) {
  if (k < 2) throw PreconditionError("rank_witness_assignment needs k >= 2");
  const auto kk = static_cast<Index>(k);
  Mat b = Mat::Zero(2 * kk - 1, kk);
  b(0, kk - 1) = 1.0;
  for (Index i = 3; i <= 2 * kk - 1; i += 2) b(i - 1, (i - 1) / 2 - 1) = 1.0;
  return b;
}

}  // namespace unlabeled
