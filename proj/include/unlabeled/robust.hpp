#pragma once

// Noisy recovery: minimize ||y - S A x|| jointly over selections S and
// signals x, plus the principal-angle score used to rank subspaces.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"
#include "unlabeled/model.hpp"
#include "unlabeled/rng.hpp"

namespace unlabeled {

struct RobustReport {
  Vec x_hat;
  Selection best_selection;
  double best_residual = 0.0;
  double runner_up_residual = std::numeric_limits<double>::infinity();  // inf if only one selection
};

/// Global least-squares minimizer over all ordered selections of n rows.
/// Equal residuals keep the lexicographically first selection.
inline RobustReport robust_recover(const Mat& a, const Vec& y, std::size_t n) {
  require_nonempty(a, "sensing matrix");
  require_finite(a, "sensing matrix");
  require_finite(y, "measurement");
  const auto m = static_cast<std::size_t>(a.rows());
  const auto k = static_cast<std::size_t>(a.cols());
  if (n > m || n < k)
    throw DimensionError("robust_recover needs rows(A) >= n >= cols(A); got rows " +
                         std::to_string(m) + ", n " + std::to_string(n) + ", cols " +
                         std::to_string(k));
  if (static_cast<std::size_t>(y.size()) != n)
    throw DimensionError("measurement has " + std::to_string(y.size()) + " entries, expected " +
                         std::to_string(n));

  std::optional<RobustReport> best;
  double runner_up = std::numeric_limits<double>::infinity();
  for (const Selection& s : enumerate_selections(m, n)) {
    const auto fit = lstsq(apply_selection(s, a), y);
    if (!best || fit.residual_norm < best->best_residual) {
      if (best) runner_up = best->best_residual;
      best = RobustReport{fit.solution, s, fit.residual_norm, 0.0};
    } else {
      runner_up = std::min(runner_up, fit.residual_norm);
    }
  }
  best->runner_up_residual = runner_up;
  return *best;
}

/// sin of the smallest principal angle between the column spans, in [0, 1].
inline double subspace_distance(const Mat& m1, const Mat& m2) {
  require_nonempty(m1, "first matrix");
  require_nonempty(m2, "second matrix");
  if (m1.rows() != m2.rows())
    throw DimensionError("subspace_distance: row counts differ (" + std::to_string(m1.rows()) +
                         " vs " + std::to_string(m2.rows()) + ")");
  const Mat q1 = column_basis(m1, default_rank_tol(m1));
  const Mat q2 = column_basis(m2, default_rank_tol(m2));
  if (q1.cols() == 0 || q2.cols() == 0)
    throw PreconditionError("subspace_distance: zero matrix has no column span");
  const Mat cross = q1.transpose() * q2;
  Eigen::JacobiSVD<Mat> svd(cross);
  // Rounding can push the cosine slightly past 1.
  const double sigma = std::clamp(svd.singularValues()(0), 0.0, 1.0);
  return std::sqrt(1.0 - sigma * sigma);
}

struct SweepRow {
  double snr = 0.0;
  double mean_relative_error = 0.0;
  double max_relative_error = 0.0;
  std::size_t selection_hits = 0;  // trials whose best selection is the true one
  std::vector<double> relative_errors;
};

/// For each SNR, `trials` noisy measurements of the fixed instance and a robust solve.
/// Trial t draws its noise from derive_seed(seed, t) at every SNR, so the noise
/// direction is shared across the sweep and only its scale changes.
/// An infinite SNR means no noise.
inline std::vector<SweepRow> stability_sweep(const Mat& a, const Vec& x, const Selection& sel,
                                             const std::vector<double>& snrs, std::size_t trials,
                                             std::uint64_t seed) {
  if (snrs.empty()) throw PreconditionError("stability_sweep: no SNR values");
  if (trials == 0) throw PreconditionError("stability_sweep: trials must be at least 1");
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    if (!(snrs[i] > 0.0)) throw PreconditionError("stability_sweep: SNR values must be positive");
    if (i && !(snrs[i] > snrs[i - 1]))
      throw PreconditionError("stability_sweep: SNR values must be ascending");
  }
  const double x_norm = x.norm();
  if (x_norm == 0.0 && std::isfinite(snrs.front()))
    throw PreconditionError("stability_sweep: SNR is undefined for x = 0");

  std::vector<SweepRow> rows;
  for (double snr : snrs) {
    SweepRow row;
    row.snr = snr;
    for (std::size_t t = 0; t < trials; ++t) {
      const NoiseSpec noise = std::isfinite(snr) ? NoiseSpec::gaussian(snr) : NoiseSpec::none();
      const Instance inst = measure(a, x, sel, noise, derive_seed(seed, t));
      const RobustReport r = robust_recover(a, inst.y, sel.size());
      const double err = (r.x_hat - x).norm();
      const double rel = x_norm > 0.0 ? err / x_norm : err;
      row.relative_errors.push_back(rel);
      row.max_relative_error = std::max(row.max_relative_error, rel);
      row.mean_relative_error += rel;
      if (r.best_selection == sel) ++row.selection_hits;
    }
    row.mean_relative_error /= static_cast<double>(trials);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace unlabeled
