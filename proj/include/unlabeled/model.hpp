#pragma once

// Problem instances: sensing matrices, selections, measurements.
//
// A Selection of N rows out of M plays the role of the selection matrix S
// (N distinct rows of the M x M identity, in some order). With M == N it is
// a permutation. apply_selection(s, a) has row i equal to row s[i] of a.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"
#include "unlabeled/rng.hpp"

namespace unlabeled {

class Selection {
 public:
  Selection(std::size_t source_rows, std::vector<std::size_t> picks)
      : source_rows_(source_rows), picks_(std::move(picks)) {
    if (picks_.empty()) throw PreconditionError("selection must pick at least one row");
    if (picks_.size() > source_rows_)
      throw PreconditionError("selection picks " + std::to_string(picks_.size()) +
                              " rows out of only " + std::to_string(source_rows_));
    std::vector<bool> seen(source_rows_, false);
    for (std::size_t p : picks_) {
      if (p >= source_rows_)
        throw PreconditionError("selection index " + std::to_string(p) + " out of range [0, " +
                                std::to_string(source_rows_) + ")");
      if (seen[p]) throw PreconditionError("selection index " + std::to_string(p) + " repeated");
      seen[p] = true;
    }
  }

  static Selection identity(std::size_t m) {
    std::vector<std::size_t> picks(m);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    return Selection(m, std::move(picks));
  }

  std::size_t source_rows() const { return source_rows_; }
  std::size_t size() const { return picks_.size(); }
  const std::vector<std::size_t>& picks() const { return picks_; }
  std::size_t operator[](std::size_t i) const { return picks_[i]; }
  bool is_permutation() const { return picks_.size() == source_rows_; }

  friend bool operator==(const Selection&, const Selection&) = default;
  friend auto operator<=>(const Selection& a, const Selection& b) {
    if (auto c = a.source_rows_ <=> b.source_rows_; c != 0) return c;
    return a.picks_ <=> b.picks_;
  }

 private:
  std::size_t source_rows_;
  std::vector<std::size_t> picks_;
};

inline Mat apply_selection(const Selection& sel, const Mat& a) {
  if (static_cast<std::size_t>(a.rows()) != sel.source_rows())
    throw DimensionError("selection over " + std::to_string(sel.source_rows()) +
                         " rows applied to a matrix with " + std::to_string(a.rows()) + " rows");
  Mat out(static_cast<Index>(sel.size()), a.cols());
  for (std::size_t i = 0; i < sel.size(); ++i)
    out.row(static_cast<Index>(i)) = a.row(static_cast<Index>(sel[i]));
  return out;
}

inline Vec apply_selection(const Selection& sel, const Vec& v) {
  if (static_cast<std::size_t>(v.size()) != sel.source_rows())
    throw DimensionError("selection over " + std::to_string(sel.source_rows()) +
                         " entries applied to a vector of length " + std::to_string(v.size()));
  Vec out(static_cast<Index>(sel.size()));
  for (std::size_t i = 0; i < sel.size(); ++i)
    out(static_cast<Index>(i)) = v(static_cast<Index>(sel[i]));
  return out;
}

/// The selection equal to applying `first`, then `second` (second.source_rows == first.size()).
inline Selection compose(const Selection& first, const Selection& second) {
  if (second.source_rows() != first.size())
    throw DimensionError("compose: second selection expects " +
                         std::to_string(second.source_rows()) + " rows, first yields " +
                         std::to_string(first.size()));
  std::vector<std::size_t> picks(second.size());
  for (std::size_t i = 0; i < second.size(); ++i) picks[i] = first[second[i]];
  return Selection(first.source_rows(), std::move(picks));
}

/// Parses "2,0,1" into a selection over m rows.
inline Selection parse_selection(std::string_view text, std::size_t m) {
  std::vector<std::size_t> picks;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string token(text.substr(pos, comma - pos));
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError("empty index in selection '" + std::string(text) + "'");
    token = token.substr(first, last - first + 1);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token.front() == '-')
      throw ParseError("invalid index '" + token + "' in selection '" + std::string(text) + "'");
    picks.push_back(static_cast<std::size_t>(v));
    pos = comma + 1;
  }
  return Selection(m, std::move(picks));
}

/// Number of ordered selections of n rows out of m, m! / (m - n)!.
inline std::uint64_t selection_count(std::size_t m, std::size_t n) {
  if (n > m) return 0;
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t f = m - i;
    if (c > std::numeric_limits<std::uint64_t>::max() / f)
      throw PreconditionError("selection count overflows 64 bits");
    c *= f;
  }
  return c;
}

/// Advances picks to the lexicographically next ordered selection; false at the end.
inline bool next_selection(std::vector<std::size_t>& picks, std::size_t m) {
  const std::size_t n = picks.size();
  std::vector<bool> used(m, false);
  for (std::size_t p : picks) used[p] = true;
  for (std::size_t i = n; i-- > 0;) {
    used[picks[i]] = false;
    std::size_t v = picks[i] + 1;
    while (v < m && used[v]) ++v;
    if (v < m) {
      picks[i] = v;
      used[v] = true;
      std::size_t fill = 0;
      for (std::size_t j = i + 1; j < n; ++j) {
        while (used[fill]) ++fill;
        picks[j] = fill;
        used[fill] = true;
      }
      return true;
    }
  }
  return false;
}

/// All m!/(m-n)! ordered selections, lexicographic in picks. Single pass.
class SelectionRange {
 public:
  class iterator {
   public:
    using value_type = Selection;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    iterator(std::size_t m, std::size_t n) : m_(m), picks_(n), done_(false) {
      std::iota(picks_.begin(), picks_.end(), std::size_t{0});
    }

    Selection operator*() const { return Selection(m_, picks_); }
    const std::vector<std::size_t>& picks() const { return picks_; }
    iterator& operator++() {
      done_ = !next_selection(picks_, m_);
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.done_; }

   private:
    std::size_t m_ = 0;
    std::vector<std::size_t> picks_;
    bool done_ = true;
  };

  SelectionRange(std::size_t m, std::size_t n) : m_(m), n_(n) {
    if (n < 1) throw PreconditionError("enumerate_selections: n must be at least 1");
    if (n > m)
      throw PreconditionError("enumerate_selections: n = " + std::to_string(n) + " exceeds m = " +
                              std::to_string(m));
  }

  iterator begin() const { return iterator(m_, n_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  std::size_t m_;
  std::size_t n_;
};

inline SelectionRange enumerate_selections(std::size_t m, std::size_t n) { return {m, n}; }

/// Uniformly random ordered selection (partial Fisher-Yates).
inline Selection random_selection(std::size_t m, std::size_t n, Rng& rng) {
  if (n < 1 || n > m) throw PreconditionError("random_selection: need 1 <= n <= m");
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return Selection(m, std::move(pool));
}

enum class Distribution { gaussian, uniform };

inline std::string_view to_string(Distribution d) {
  return d == Distribution::gaussian ? "gaussian" : "uniform";
}

inline Distribution parse_distribution(std::string_view s) {
  if (s == "gaussian") return Distribution::gaussian;
  if (s == "uniform") return Distribution::uniform;
  throw ParseError("unknown distribution '" + std::string(s) + "' (expected gaussian or uniform)");
}

/// i.i.d. N(0, 1) or U(-1, 1) entries, filled row by row from Rng(seed).
inline Mat gen_matrix(std::size_t m, std::size_t k, Distribution dist, std::uint64_t seed) {
  if (m < 1 || k < 1) throw DimensionError("gen_matrix: dimensions must be at least 1x1");
  Rng rng(seed);
  Mat a(static_cast<Index>(m), static_cast<Index>(k));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      a(i, j) = dist == Distribution::gaussian ? rng.gaussian() : rng.uniform(-1.0, 1.0);
  return a;
}

struct NoiseSpec {
  enum class Kind { none, gaussian_snr };
  Kind kind = Kind::none;
  double snr = 0.0;  // ||B x||^2 / ||w||^2, linear scale

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double snr) {
    if (!(snr > 0.0) || !std::isfinite(snr))
      throw PreconditionError("SNR must be a positive finite number");
    return {Kind::gaussian_snr, snr};
  }
};

struct Instance {
  Mat a;
  Vec x_true;
  Selection selection;
  Vec noise;
  Vec y;
};

/// y = apply_selection(sel, a) * x + w, with w rescaled to hit the SNR exactly.
inline Instance measure(const Mat& a, const Vec& x, const Selection& sel, const NoiseSpec& noise,
                        std::uint64_t seed) {
  require_nonempty(a, "sensing matrix");
  require_finite(a, "sensing matrix");
  require_finite(x, "signal");
  if (x.size() != a.cols())
    throw DimensionError("signal has length " + std::to_string(x.size()) +
                         ", sensing matrix has " + std::to_string(a.cols()) + " columns");
  const Mat b = apply_selection(sel, a);
  const Vec signal = b * x;
  Vec w = Vec::Zero(signal.size());
  if (noise.kind == NoiseSpec::Kind::gaussian_snr) {
    const double signal_norm = signal.norm();
    if (signal_norm == 0.0) throw PreconditionError("SNR is undefined for a zero measurement B*x");
    Rng rng(seed);
    do {
      for (Index i = 0; i < w.size(); ++i) w(i) = rng.gaussian();
    } while (w.norm() == 0.0);
    w *= signal_norm / (std::sqrt(noise.snr) * w.norm());
  }
  return Instance{a, x, sel, w, signal + w};
}

}  // namespace unlabeled
