#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "unlabeled/densela.hpp"
#include "unlabeled/model.hpp"
#include "unlabeled/rng.hpp"

using namespace unlabeled;

namespace {

Mat random_matrix(Index r, Index c, std::uint64_t seed) {
  return gen_matrix(static_cast<std::size_t>(r), static_cast<std::size_t>(c), Distribution::gaussian,
                    seed);
}

/// r x c matrix of rank `target` built as a product of gaussian factors.
Mat low_rank(Index r, Index c, Index target, std::uint64_t seed) {
  return random_matrix(r, target, seed) * random_matrix(target, c, seed + 1000);
}

}  // namespace

TEST(Lstsq, ScalarColumnAveragesTheRightHandSide) {
  Mat m(2, 1);
  m << 1, 1;
  Vec b(2);
  b << 0, 1;
  const auto r = lstsq(m, b);
  EXPECT_NEAR(r.solution(0), 0.5, 1e-15);
  EXPECT_NEAR(r.residual_norm, std::sqrt(0.5), 1e-15);
  EXPECT_EQ(r.rank, 1);
}

TEST(Lstsq, BeatsEveryRandomProbe) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Mat m = random_matrix(6, 3, seed);
    const Vec b = random_matrix(6, 1, seed + 77).col(0);
    const auto r = lstsq(m, b);
    Rng rng(seed);
    for (int probe = 0; probe < 1000; ++probe) {
      Vec d(3);
      for (Index i = 0; i < 3; ++i) d(i) = rng.gaussian() * std::pow(10.0, rng.uniform(-6, 1));
      EXPECT_GE((m * (r.solution + d) - b).norm(), r.residual_norm - 1e-12);
    }
  }
}

TEST(Lstsq, ResidualIsOrthogonalToColumns) {
  const Mat m = random_matrix(7, 4, 3);
  const Vec b = random_matrix(7, 1, 4).col(0);
  const auto r = lstsq(m, b);
  EXPECT_LT((m.transpose() * (m * r.solution - b)).norm(), 1e-12);
}

TEST(Lstsq, RankDeficientGivesMinimumNorm) {
  const Mat m = low_rank(5, 4, 2, 11);
  const Vec b = random_matrix(5, 1, 12).col(0);
  const auto r = lstsq(m, b);
  EXPECT_EQ(r.rank, 2);
  // The minimum-norm solution has no component in the kernel.
  for (const Vec& z : nullspace(m)) EXPECT_LT(std::abs(z.dot(r.solution)), 1e-10);
}

TEST(Lstsq, ZeroMatrixReturnsZero) {
  const auto r = lstsq(Mat::Zero(3, 2), Vec::Ones(3));
  EXPECT_EQ(r.rank, 0);
  EXPECT_EQ(r.solution, Vec::Zero(2));
  EXPECT_DOUBLE_EQ(r.residual_norm, std::sqrt(3.0));
}

TEST(Lstsq, RejectsBadInput) {
  EXPECT_THROW(lstsq(Mat::Ones(3, 2), Vec::Ones(2)), DimensionError);
  EXPECT_THROW(lstsq(Mat(0, 2), Vec(0)), DimensionError);
  Mat bad = Mat::Ones(2, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(lstsq(bad, Vec::Ones(2)), NonFiniteError);
  EXPECT_THROW(lstsq(Mat::Ones(2, 2), Vec::Ones(2), 0.0), PreconditionError);
}

TEST(Rank, MatchesMinorOracle) {
  for (Index target = 0; target <= 4; ++target) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Mat m = target == 0 ? Mat(Mat::Zero(5, 4)) : low_rank(5, 4, target, seed * 31 + 1);
      EXPECT_EQ(rank(m), oracle::minor_rank(m, 1e-8)) << "target " << target << " seed " << seed;
      EXPECT_EQ(rank(m), target);
    }
  }
}

TEST(Nullspace, RankPlusNullityEqualsColumns) {
  for (Index target = 0; target <= 5; ++target) {
    const Mat m = target == 0 ? Mat(Mat::Zero(4, 5)) : low_rank(4, 5, std::min<Index>(target, 4), 9);
    const Index r = rank(m);
    EXPECT_EQ(r + static_cast<Index>(nullspace(m).size()), m.cols());
  }
}

TEST(Nullspace, BasisIsOrthonormalAndAnnihilated) {
  const Mat m = low_rank(6, 8, 3, 5);
  const auto basis = nullspace(m);
  ASSERT_EQ(basis.size(), 5u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_LT((m * basis[i]).norm(), 1e-10);
    for (std::size_t j = 0; j < basis.size(); ++j)
      EXPECT_NEAR(basis[i].dot(basis[j]), i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Nullspace, KnownKernelDirection) {
  Mat m(3, 4);
  m << 1, 0, 0, 1, 0, 1, 1, 0, 1, 2, 1, 2;
  const auto basis = nullspace(m);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_LT((m * basis[0]).norm(), 1e-14);
  // Independent check: a kernel direction from cofactors of the first three columns.
  Vec z(4);
  for (Index j = 0; j < 4; ++j) {
    Mat minor(3, 3);
    for (Index c = 0, cc = 0; c < 4; ++c)
      if (c != j) minor.col(cc++) = m.col(c);
    z(j) = ((j % 2) ? -1.0 : 1.0) * oracle::laplace_det(minor);
  }
  z.normalize();
  EXPECT_NEAR(std::abs(z.dot(basis[0])), 1.0, 1e-12);
}

TEST(Nullspace, ZeroMatrixGivesIdentityBasis) {
  const auto basis = nullspace(Mat::Zero(2, 3));
  ASSERT_EQ(basis.size(), 3u);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(basis[static_cast<std::size_t>(j)], Vec::Unit(3, j));
}

TEST(Det, AgreesWithCofactorExpansion) {
  for (Index n = 1; n <= 6; ++n) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const Mat m = random_matrix(n, n, 100 * n + seed);
      const double ref = oracle::laplace_det(m);
      EXPECT_NEAR(det(m), ref, 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(Det, PermutationParity) {
  Mat p = Mat::Zero(4, 4);
  p(0, 1) = p(1, 2) = p(2, 3) = p(3, 0) = 1.0;  // 4-cycle, odd
  EXPECT_DOUBLE_EQ(det(p), -1.0);
  Mat q = Mat::Identity(4, 4);
  q.row(0).swap(q.row(1));
  q.row(2).swap(q.row(3));  // two swaps, even
  EXPECT_DOUBLE_EQ(det(q), 1.0);
  EXPECT_THROW(det(Mat::Ones(2, 3)), DimensionError);
}

TEST(ColumnBasis, SpansTheColumnsOrthonormally) {
  const Mat m = low_rank(6, 4, 2, 21);
  const Mat q = column_basis(m, default_rank_tol(m));
  ASSERT_EQ(q.cols(), 2);
  EXPECT_LT((q.transpose() * q - Mat::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LT((q * (q.transpose() * m) - m).norm(), 1e-10 * m.norm());
}

TEST(Hcat, ConcatenatesAndChecksRows) {
  const Mat h = hcat(Mat::Ones(2, 1), Mat::Zero(2, 2));
  EXPECT_EQ(h.cols(), 3);
  EXPECT_EQ(h(1, 0), 1.0);
  EXPECT_THROW(hcat(Mat::Ones(2, 1), Mat::Ones(3, 1)), DimensionError);
}
