#pragma once

// Exact recovery from noiseless unlabeled measurements.
//
// Every ordered selection of N rows of A is a candidate B_hat; the candidate
// is feasible when the least-squares residual of B_hat * x = y is at most
// residual_tol * (1 + ||y||). Feasible solutions closer than uniqueness_tol
// (infinity norm) are merged; one class is `unique`, two or more `ambiguous`.
//
// recover() walks the selections in lexicographic order. recover_with_pruning()
// walks the same order as a depth-first tree over partial selections and cuts
// a branch once its first j > K rows already leave a residual above the
// threshold (adding rows never lowers a least-squares residual). Both produce
// the same status and solution set.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"
#include "unlabeled/model.hpp"

namespace unlabeled {

struct SolveConfig {
  double residual_tol = 1e-9;
  double uniqueness_tol = 1e-6;
  bool prune = true;
  std::optional<std::uint64_t> max_nodes;  // unlimited when empty
  bool first_hit = false;                  // stop at the first feasible candidate
};

enum class RecoveryStatus { unique, ambiguous, infeasible, budget_exhausted };

inline std::string_view to_string(RecoveryStatus s) {
  switch (s) {
    case RecoveryStatus::unique: return "unique";
    case RecoveryStatus::ambiguous: return "ambiguous";
    case RecoveryStatus::infeasible: return "infeasible";
    case RecoveryStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

struct RecoveryReport {
  RecoveryStatus status = RecoveryStatus::infeasible;
  std::optional<Vec> x_hat;                 // set iff unique or ambiguous
  std::vector<Selection> witness_selections;  // candidates reproducing y with x_hat
  std::vector<Vec> distinct_solutions;      // one representative per class
  std::uint64_t nodes_explored = 0;
  std::uint64_t nodes_pruned = 0;
  bool certified = true;  // false when first_hit stopped before exhausting candidates
};

namespace detail {

inline void validate_recovery_inputs(const Mat& a, const Vec& y, const SolveConfig& cfg) {
  require_nonempty(a, "sensing matrix");
  require_finite(a, "sensing matrix");
  require_finite(y, "measurement");
  if (y.size() < 1) throw DimensionError("measurement vector is empty");
  if (y.size() > a.rows())
    throw DimensionError("measurement has " + std::to_string(y.size()) +
                         " entries but the sensing matrix only " + std::to_string(a.rows()) +
                         " rows");
  if (a.cols() > y.size())
    throw PreconditionError("K = " + std::to_string(a.cols()) + " exceeds N = " +
                            std::to_string(y.size()) + ": candidate systems are underdetermined");
  if (!(cfg.residual_tol > 0.0) || !(cfg.uniqueness_tol > 0.0))
    throw PreconditionError("residual_tol and uniqueness_tol must be positive");
}

inline double feasibility_threshold(const SolveConfig& cfg, const Vec& y) {
  return cfg.residual_tol * (1.0 + y.norm());
}

inline Mat rows_of(const Mat& a, const std::vector<std::size_t>& picks, std::size_t count) {
  Mat out(static_cast<Index>(count), a.cols());
  for (std::size_t i = 0; i < count; ++i)
    out.row(static_cast<Index>(i)) = a.row(static_cast<Index>(picks[i]));
  return out;
}

/// Groups feasible solutions into classes, first-seen representative wins.
class SolutionClasses {
 public:
  explicit SolutionClasses(double tol) : tol_(tol) {}

  void add(const Selection& witness, const Vec& x) {
    for (auto& c : classes_) {
      if ((c.representative - x).lpNorm<Eigen::Infinity>() <= tol_) {
        c.witnesses.push_back(witness);
        return;
      }
    }
    classes_.push_back({x, {witness}});
  }

  bool empty() const { return classes_.empty(); }

  void finish(RecoveryReport& report) const {
    if (classes_.empty()) {
      report.status = RecoveryStatus::infeasible;
      return;
    }
    report.status = classes_.size() == 1 ? RecoveryStatus::unique : RecoveryStatus::ambiguous;
    report.x_hat = classes_.front().representative;
    report.witness_selections = classes_.front().witnesses;
    for (const auto& c : classes_) report.distinct_solutions.push_back(c.representative);
  }

 private:
  struct Class {
    Vec representative;
    std::vector<Selection> witnesses;
  };
  double tol_;
  std::vector<Class> classes_;
};

inline RecoveryReport zero_measurement_report(const Mat& a, const Vec& y) {
  RecoveryReport r;
  r.status = RecoveryStatus::unique;
  r.x_hat = Vec::Zero(a.cols());
  r.distinct_solutions.push_back(*r.x_hat);
  r.witness_selections.push_back(
      *enumerate_selections(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(y.size()))
           .begin());
  return r;
}

}  // namespace detail

/// Exhaustive lexicographic enumeration of candidate selections.
inline RecoveryReport recover(const Mat& a, const Vec& y, const SolveConfig& cfg = {}) {
  detail::validate_recovery_inputs(a, y, cfg);
  // y = 0 is always solved by x = 0, and B_hat has full column rank w.p. 1.
  if (y.norm() == 0.0) return detail::zero_measurement_report(a, y);

  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(y.size());
  const double threshold = detail::feasibility_threshold(cfg, y);

  RecoveryReport report;
  detail::SolutionClasses classes(cfg.uniqueness_tol);
  const SelectionRange range(m, n);
  for (auto it = range.begin(); it != range.end(); ++it) {
    if (cfg.max_nodes && report.nodes_explored >= *cfg.max_nodes) {
      report.status = RecoveryStatus::budget_exhausted;
      return report;
    }
    ++report.nodes_explored;
    const auto fit = lstsq(detail::rows_of(a, it.picks(), n), y);
    if (fit.residual_norm <= threshold) {
      classes.add(*it, fit.solution);
      if (cfg.first_hit) {
        report.certified = false;
        break;
      }
    }
  }
  classes.finish(report);
  return report;
}

/// Depth-first search over partial selections with residual pruning.
inline RecoveryReport recover_with_pruning(const Mat& a, const Vec& y, const SolveConfig& cfg = {}) {
  detail::validate_recovery_inputs(a, y, cfg);
  if (y.norm() == 0.0) return detail::zero_measurement_report(a, y);

  const auto m = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(y.size());
  const auto k = static_cast<std::size_t>(a.cols());
  const double threshold = detail::feasibility_threshold(cfg, y);

  RecoveryReport report;
  detail::SolutionClasses classes(cfg.uniqueness_tol);
  std::vector<std::size_t> picks(n);
  std::vector<bool> used(m, false);
  bool stop = false;

  // Visits the node whose first `depth` rows are fixed in picks.
  auto visit = [&](auto&& self, std::size_t depth) -> void {
    if (cfg.max_nodes && report.nodes_explored >= *cfg.max_nodes) {
      report.status = RecoveryStatus::budget_exhausted;
      stop = true;
      return;
    }
    ++report.nodes_explored;
    if (depth == n) {
      const auto fit = lstsq(detail::rows_of(a, picks, n), y);
      if (fit.residual_norm <= threshold) {
        classes.add(Selection(m, picks), fit.solution);
        if (cfg.first_hit) {
          report.certified = false;
          stop = true;
        }
      }
      return;
    }
    if (depth > k) {
      const auto d = static_cast<Index>(depth);
      const auto partial = lstsq(detail::rows_of(a, picks, depth), y.head(d));
      if (partial.residual_norm > threshold) {
        ++report.nodes_pruned;
        return;
      }
    }
    for (std::size_t row = 0; row < m && !stop; ++row) {
      if (used[row]) continue;
      used[row] = true;
      picks[depth] = row;
      self(self, depth + 1);
      used[row] = false;
    }
  };

  for (std::size_t row = 0; row < m && !stop; ++row) {
    used[row] = true;
    picks[0] = row;
    visit(visit, 1);
    used[row] = false;
  }
  if (report.status == RecoveryStatus::budget_exhausted) return report;
  classes.finish(report);
  return report;
}

/// Dispatches on cfg.prune.
inline RecoveryReport solve(const Mat& a, const Vec& y, const SolveConfig& cfg = {}) {
  return cfg.prune ? recover_with_pruning(a, y, cfg) : recover(a, y, cfg);
}

struct NullspaceCheck {
  bool holds = true;
  bool exhaustive = true;
  std::uint64_t pairs_checked = 0;
  std::uint64_t nontrivial_kernels = 0;  // pairs whose [S1 A, S2 A] has a kernel
  double max_violation = 0.0;            // largest ||z1 + z2|| over unit kernel vectors
};

/// Checks N([S1 A, S2 A]) within N([I, I]) over ordered selection pairs of size n.
/// Exhaustive when the pair count fits in max_pairs, otherwise max_pairs random pairs.
inline NullspaceCheck nullspace_property_report(const Mat& a, std::size_t n, double rank_tol,
                                                std::uint64_t max_pairs = 1'000'000,
                                                std::uint64_t seed = 0) {
  require_nonempty(a, "sensing matrix");
  require_finite(a, "sensing matrix");
  const auto m = static_cast<std::size_t>(a.rows());
  const auto k = static_cast<std::size_t>(a.cols());
  if (n < 2 * k)
    throw PreconditionError("null-space property needs n >= 2K (n = " + std::to_string(n) +
                            ", K = " + std::to_string(k) + ")");
  if (n > m)
    throw PreconditionError("n = " + std::to_string(n) + " exceeds the " + std::to_string(m) +
                            " rows of A");
  if (!(rank_tol > 0.0)) throw PreconditionError("rank_tol must be positive");

  NullspaceCheck out;
  const auto kk = static_cast<Index>(k);
  auto check_pair = [&](const Selection& s1, const Selection& s2) {
    ++out.pairs_checked;
    const auto kernel = nullspace(hcat(apply_selection(s1, a), apply_selection(s2, a)), rank_tol);
    if (!kernel.empty()) ++out.nontrivial_kernels;
    for (const Vec& z : kernel) {
      const double v = (z.head(kk) + z.tail(kk)).norm();
      out.max_violation = std::max(out.max_violation, v);
      if (v > 10.0 * rank_tol) out.holds = false;
    }
  };

  const std::uint64_t count = selection_count(m, n);
  if (count <= max_pairs / count) {
    std::vector<Selection> all;
    for (const Selection& s : enumerate_selections(m, n)) all.push_back(s);
    for (const auto& s1 : all)
      for (const auto& s2 : all) check_pair(s1, s2);
  } else {
    out.exhaustive = false;
    Rng rng(seed);
    for (std::uint64_t i = 0; i < max_pairs; ++i) {
      const Selection s1 = random_selection(m, n, rng);
      const Selection s2 = random_selection(m, n, rng);
      check_pair(s1, s2);
    }
  }
  return out;
}

inline bool check_nullspace_property(const Mat& a, std::size_t n, double rank_tol) {
  return nullspace_property_report(a, n, rank_tol).holds;
}

}  // namespace unlabeled
