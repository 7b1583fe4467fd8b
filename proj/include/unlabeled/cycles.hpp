#pragma once

// Cycle decomposition of C = [B, B_hat] for a true selection (rows of B) and
// a candidate selection (rows of B_hat), both of N rows out of the same M.
//
// Slot s pairs row t[s] of B with row c[s] of B_hat. A cycle is the longest
// chain v1, v2, ..., vn of row ids in which v_k sits in B at the same slot
// where v_{k+1} sits in B_hat. The chain is complete when it closes (vn == v1).
// An incomplete chain starts at a B row absent from B_hat and stops at a
// B_hat row absent from B, so it only occurs when M > N.
//
// Canonical form: complete cycles first, then incomplete ones, each class
// ordered by its smallest row id; a complete cycle starts at its smallest id.
// A fixed point (t[s] == c[s]) is the complete cycle (v, v).

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <string>
#include <vector>

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"
#include "unlabeled/model.hpp"

namespace unlabeled {

struct Cycle {
  std::vector<std::size_t> row_ids;  // v1 ... vn, closing id included
  bool complete = false;

  /// Number of slots (rows of C) the cycle occupies, n - 1.
  std::size_t length() const { return row_ids.size() - 1; }
  std::size_t smallest_id() const { return *std::min_element(row_ids.begin(), row_ids.end()); }

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct CycleDecomposition {
  std::vector<Cycle> cycles;
  std::size_t n_complete = 0;
  std::size_t n_total = 0;
};

namespace detail {

inline void require_pairable(const Selection& true_sel, const Selection& cand_sel) {
  if (true_sel.size() != cand_sel.size())
    throw DimensionError("cycle decomposition needs selections of equal length (" +
                         std::to_string(true_sel.size()) + " vs " +
                         std::to_string(cand_sel.size()) + ")");
  if (true_sel.source_rows() != cand_sel.source_rows())
    throw DimensionError("cycle decomposition needs selections over the same rows (" +
                         std::to_string(true_sel.source_rows()) + " vs " +
                         std::to_string(cand_sel.source_rows()) + ")");
}

inline constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

}  // namespace detail

inline CycleDecomposition decompose(const Selection& true_sel, const Selection& cand_sel) {
  detail::require_pairable(true_sel, cand_sel);
  const std::size_t n = true_sel.size();
  const std::size_t m = true_sel.source_rows();

  std::vector<std::size_t> slot_in_true(m, detail::kAbsent);
  std::vector<bool> in_cand(m, false);
  for (std::size_t s = 0; s < n; ++s) {
    slot_in_true[true_sel[s]] = s;
    in_cand[cand_sel[s]] = true;
  }

  std::vector<bool> visited(n, false);
  std::vector<Cycle> complete;
  std::vector<Cycle> incomplete;

  // Chains: a B row with no predecessor in B_hat starts one.
  for (std::size_t s = 0; s < n; ++s) {
    if (in_cand[true_sel[s]]) continue;
    Cycle c;
    c.row_ids.push_back(true_sel[s]);
    for (std::size_t cur = s; cur != detail::kAbsent;) {
      visited[cur] = true;
      const std::size_t next = cand_sel[cur];
      c.row_ids.push_back(next);
      cur = slot_in_true[next];
    }
    incomplete.push_back(std::move(c));
  }

  // What is left is a union of closed cycles. Visiting slots by increasing
  // B-row id starts each cycle at its smallest id.
  std::vector<std::size_t> by_row(n);
  for (std::size_t s = 0; s < n; ++s) by_row[s] = s;
  std::sort(by_row.begin(), by_row.end(),
            [&](std::size_t a, std::size_t b) { return true_sel[a] < true_sel[b]; });
  for (std::size_t s : by_row) {
    if (visited[s]) continue;
    Cycle c;
    c.complete = true;
    const std::size_t start = true_sel[s];
    c.row_ids.push_back(start);
    for (std::size_t cur = s;;) {
      visited[cur] = true;
      const std::size_t next = cand_sel[cur];
      c.row_ids.push_back(next);
      if (next == start) break;
      cur = slot_in_true[next];
    }
    complete.push_back(std::move(c));
  }

  const auto by_smallest = [](const Cycle& a, const Cycle& b) {
    return a.smallest_id() < b.smallest_id();
  };
  std::sort(complete.begin(), complete.end(), by_smallest);
  std::sort(incomplete.begin(), incomplete.end(), by_smallest);

  CycleDecomposition out;
  out.n_complete = complete.size();
  out.cycles = std::move(complete);
  out.cycles.insert(out.cycles.end(), std::make_move_iterator(incomplete.begin()),
                    std::make_move_iterator(incomplete.end()));
  out.n_total = out.cycles.size();
  return out;
}

/// Slots of C listed in cycle order; throws if decomp does not match the selections.
inline std::vector<std::size_t> cycle_slot_order(const CycleDecomposition& decomp,
                                                 const Selection& true_sel,
                                                 const Selection& cand_sel) {
  detail::require_pairable(true_sel, cand_sel);
  const std::size_t n = true_sel.size();
  std::vector<std::size_t> slot_in_true(true_sel.source_rows(), detail::kAbsent);
  for (std::size_t s = 0; s < n; ++s) slot_in_true[true_sel[s]] = s;

  std::vector<std::size_t> order;
  std::vector<bool> used(n, false);
  for (const Cycle& c : decomp.cycles) {
    if (c.row_ids.size() < 2) throw PreconditionError("cycle with fewer than two row ids");
    for (std::size_t k = 0; k + 1 < c.row_ids.size(); ++k) {
      const std::size_t row = c.row_ids[k];
      const std::size_t s = row < slot_in_true.size() ? slot_in_true[row] : detail::kAbsent;
      if (s == detail::kAbsent || used[s] || cand_sel[s] != c.row_ids[k + 1])
        throw PreconditionError("cycle decomposition does not match the given selections");
      used[s] = true;
      order.push_back(s);
    }
  }
  if (order.size() != n)
    throw PreconditionError("cycle decomposition covers " + std::to_string(order.size()) +
                            " of " + std::to_string(n) + " slots");
  return order;
}

/// C = [B, B_hat] with rows regrouped cycle by cycle (N x 2K).
inline Mat cycle_ordered_form(const CycleDecomposition& decomp, const Selection& true_sel,
                              const Selection& cand_sel, const Mat& a) {
  if (static_cast<std::size_t>(a.rows()) != true_sel.source_rows())
    throw DimensionError("cycle_ordered_form: matrix rows do not match the selections");
  const auto order = cycle_slot_order(decomp, true_sel, cand_sel);
  const Index k = a.cols();
  Mat c(static_cast<Index>(order.size()), 2 * k);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto r = static_cast<Index>(i);
    c.row(r).head(k) = a.row(static_cast<Index>(true_sel[order[i]]));
    c.row(r).tail(k) = a.row(static_cast<Index>(cand_sel[order[i]]));
  }
  return c;
}

}  // namespace unlabeled
