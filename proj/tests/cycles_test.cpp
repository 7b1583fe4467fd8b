#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "unlabeled/cycles.hpp"
#include "unlabeled/model.hpp"
#include "unlabeled/solver.hpp"

using namespace unlabeled;

namespace {

using Ids = std::vector<std::size_t>;

/// Independent chain tracer: follows slot -> cand row -> slot of that row in true.
std::map<std::size_t, std::size_t> slot_lengths_by_start(const Selection& t, const Selection& c) {
  std::map<std::size_t, std::size_t> out;  // smallest B row id in chain -> slot count
  std::vector<int> owner(t.size(), -1);
  for (std::size_t s0 = 0; s0 < t.size(); ++s0) {
    if (owner[s0] != -1) continue;
    // Walk backwards to a chain start (or around a loop).
    std::size_t s = s0;
    for (std::size_t guard = 0; guard < t.size(); ++guard) {
      const auto prev = std::find(c.picks().begin(), c.picks().end(), t[s]);
      if (prev == c.picks().end()) break;
      s = static_cast<std::size_t>(prev - c.picks().begin());
      if (s == s0) break;
    }
    std::size_t count = 0, smallest = t[s];
    for (std::size_t cur = s;;) {
      if (owner[cur] != -1) break;
      owner[cur] = static_cast<int>(s0);
      ++count;
      smallest = std::min(smallest, t[cur]);
      const auto next = std::find(t.picks().begin(), t.picks().end(), c[cur]);
      if (next == t.picks().end()) break;
      cur = static_cast<std::size_t>(next - t.picks().begin());
    }
    out[smallest] = count;
  }
  return out;
}

}  // namespace

TEST(Decompose, WorkedExampleWithThreeCycles) {
  const Selection t(7, {0, 1, 2, 3, 4, 5});
  const Selection c(7, {1, 2, 0, 4, 3, 6});
  const auto d = decompose(t, c);
  ASSERT_EQ(d.n_total, 3u);
  EXPECT_EQ(d.n_complete, 2u);
  EXPECT_EQ(d.cycles[0].row_ids, (Ids{0, 1, 2, 0}));
  EXPECT_TRUE(d.cycles[0].complete);
  EXPECT_EQ(d.cycles[0].length(), 3u);
  EXPECT_EQ(d.cycles[1].row_ids, (Ids{3, 4, 3}));
  EXPECT_EQ(d.cycles[1].length(), 2u);
  EXPECT_EQ(d.cycles[2].row_ids, (Ids{5, 6}));
  EXPECT_FALSE(d.cycles[2].complete);
  EXPECT_EQ(d.cycles[2].length(), 1u);
}

TEST(Decompose, IdentityPairingGivesFixedPoints) {
  const Selection t(5, {3, 1, 4});
  const auto d = decompose(t, t);
  EXPECT_EQ(d.n_complete, 3u);
  EXPECT_EQ(d.n_total, 3u);
  EXPECT_EQ(d.cycles[0].row_ids, (Ids{1, 1}));
  EXPECT_EQ(d.cycles[1].row_ids, (Ids{3, 3}));
  EXPECT_EQ(d.cycles[2].row_ids, (Ids{4, 4}));
}

TEST(Decompose, SwapIsOneTwoCycle) {
  const auto d = decompose(Selection(2, {0, 1}), Selection(2, {1, 0}));
  ASSERT_EQ(d.n_total, 1u);
  EXPECT_EQ(d.cycles[0].row_ids, (Ids{0, 1, 0}));
  EXPECT_TRUE(d.cycles[0].complete);
}

TEST(Decompose, CompleteCycleStartsAtSmallestId) {
  const auto d = decompose(Selection(3, {2, 0, 1}), Selection(3, {0, 1, 2}));
  ASSERT_EQ(d.n_total, 1u);
  EXPECT_EQ(d.cycles[0].row_ids.front(), 0u);
  EXPECT_EQ(d.cycles[0].row_ids.back(), 0u);
}

TEST(Decompose, RejectsMismatchedSelections) {
  EXPECT_THROW(decompose(Selection(3, {0, 1}), Selection(3, {0})), DimensionError);
  EXPECT_THROW(decompose(Selection(3, {0, 1}), Selection(4, {0, 1})), DimensionError);
}

TEST(Decompose, PartitionPropertyExhaustive) {
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t n = 1; n <= m; ++n) {
      // Fix the true selection to each ordered selection only for small counts.
      const bool all_truths = selection_count(m, n) <= 120;
      std::vector<Selection> truths;
      if (all_truths)
        for (const Selection& s : enumerate_selections(m, n)) truths.push_back(s);
      else
        truths = {Selection(m, [&] { Ids p(n); for (std::size_t i = 0; i < n; ++i) p[i] = i; return p; }())};
      for (const Selection& t : truths) {
        for (const Selection& c : enumerate_selections(m, n)) {
          const auto d = decompose(t, c);
          std::size_t slots = 0;
          std::vector<bool> hit(m, false);
          for (const Cycle& cy : d.cycles) {
            slots += cy.length();
            for (std::size_t k = 0; k + 1 < cy.row_ids.size(); ++k) {
              ASSERT_FALSE(hit[cy.row_ids[k]]);
              hit[cy.row_ids[k]] = true;
            }
            EXPECT_EQ(cy.complete, cy.row_ids.front() == cy.row_ids.back());
          }
          ASSERT_EQ(slots, n);
          EXPECT_LE(d.n_complete, d.n_total);
          EXPECT_EQ(d.n_total, d.cycles.size());
          // Every slot appears once in cycle order.
          EXPECT_EQ(cycle_slot_order(d, t, c).size(), n);
          // Cycle sizes agree with the independent tracer.
          std::map<std::size_t, std::size_t> mine;
          for (const Cycle& cy : d.cycles) {
            std::size_t smallest = cy.row_ids.front();
            for (std::size_t k = 0; k + 1 < cy.row_ids.size(); ++k)
              smallest = std::min(smallest, cy.row_ids[k]);
            mine[smallest] = cy.length();
          }
          EXPECT_EQ(mine, slot_lengths_by_start(t, c));
        }
      }
    }
  }
}

TEST(Decompose, InvariantUnderCommonSlotReordering) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 3 + rng.below(5);
    const std::size_t n = 1 + rng.below(m);
    const Selection t = random_selection(m, n, rng);
    const Selection c = random_selection(m, n, rng);
    const Selection pi = random_selection(n, n, rng);
    const auto d1 = decompose(t, c);
    const auto d2 = decompose(compose(t, pi), compose(c, pi));
    EXPECT_EQ(d1.n_complete, d2.n_complete);
    EXPECT_EQ(d1.n_total, d2.n_total);
    EXPECT_EQ(d1.cycles, d2.cycles);
  }
}

TEST(CycleOrderedForm, WorkedExampleLayout) {
  const Selection t(7, {0, 1, 2, 3, 4, 5});
  const Selection c(7, {1, 2, 0, 4, 3, 6});
  Mat a(7, 1);
  a << 10, 11, 12, 13, 14, 15, 16;
  const Mat form = cycle_ordered_form(decompose(t, c), t, c, a);
  ASSERT_EQ(form.rows(), 6);
  ASSERT_EQ(form.cols(), 2);
  EXPECT_EQ(Vec(form.col(0)), (Vec(6) << 10, 11, 12, 13, 14, 15).finished());
  EXPECT_EQ(Vec(form.col(1)), (Vec(6) << 11, 12, 10, 14, 13, 16).finished());
}

TEST(CycleOrderedForm, IdentityAndRowMultisets) {
  const Mat a = gen_matrix(6, 2, Distribution::gaussian, 4);
  const Selection t(6, {0, 1, 2, 3});
  const Mat id_form = cycle_ordered_form(decompose(t, t), t, t, a);
  const Mat b = apply_selection(t, a);
  EXPECT_EQ(id_form, hcat(b, b));

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Selection tt = random_selection(6, 4, rng);
    const Selection cc = random_selection(6, 4, rng);
    const Mat form = cycle_ordered_form(decompose(tt, cc), tt, cc, a);
    auto sorted_rows = [](Mat m) {
      std::vector<std::vector<double>> rows;
      for (Index i = 0; i < m.rows(); ++i) rows.push_back({m(i, 0), m(i, 1)});
      std::sort(rows.begin(), rows.end());
      return rows;
    };
    EXPECT_EQ(sorted_rows(form.leftCols(2)), sorted_rows(apply_selection(tt, a)));
    EXPECT_EQ(sorted_rows(form.rightCols(2)), sorted_rows(apply_selection(cc, a)));
  }
}

TEST(CycleOrderedForm, RejectsForeignDecomposition) {
  const Selection t(4, {0, 1, 2});
  const auto d = decompose(t, Selection(4, {1, 0, 2}));
  EXPECT_THROW(cycle_ordered_form(d, t, t, Mat::Ones(4, 2)), PreconditionError);
  EXPECT_THROW(cycle_ordered_form(d, t, Selection(4, {1, 0, 2}), Mat::Ones(3, 2)), DimensionError);
}

// With N >= 2K, a candidate whose pairing has fewer than K complete cycles
// is infeasible, and a feasible one with at least K complete cycles returns x.
TEST(CycleTheory, CompleteCycleCountControlsFeasibility) {
  const std::size_t k = 2, n = 4, m = 5;
  Rng rng(99);
  int infeasible_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Mat a = gen_matrix(m, k, Distribution::gaussian, derive_seed(7, static_cast<std::uint64_t>(trial)));
    Vec x(2);
    x << rng.gaussian(), rng.gaussian();
    const Selection t = random_selection(m, n, rng);
    const Selection c = random_selection(m, n, rng);
    const Vec y = apply_selection(t, a) * x;
    const auto d = decompose(t, c);
    const auto fit = lstsq(apply_selection(c, a), y);
    const bool feasible = fit.residual_norm <= 1e-9 * (1 + y.norm());
    if (d.n_complete < k) {
      EXPECT_FALSE(feasible);
      ++infeasible_checked;
    } else if (feasible) {
      EXPECT_LE((fit.solution - x).lpNorm<Eigen::Infinity>(), 1e-8 * (1 + x.norm()));
    }
  }
  EXPECT_GT(infeasible_checked, 0);
}
