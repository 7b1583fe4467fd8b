#pragma once

// Small hand-checkable instances.

#include "unlabeled/densela.hpp"
#include "unlabeled/error.hpp"

namespace unlabeled::golden {

/// [[1,0],[0,1],[1,2]]: x = (1,-3) and x = (-5,1) give the same multiset {1,-3,-5}.
inline Mat ambiguous_3x2() {
  Mat a(3, 2);
  a << 1, 0, 0, 1, 1, 2;
  return a;
}

/// ambiguous_3x2 with the row (1,-1) appended; every x is recoverable.
inline Mat unique_4x2() {
  Mat a(4, 2);
  a << 1, 0, 0, 1, 1, 2, 1, -1;
  return a;
}

/// [[1,0],[0,1],[alpha,1-alpha]], recoverable for alpha in [0,1] except 0.5.
inline Mat alpha_convex(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || alpha == 0.5)
    throw PreconditionError("alpha must lie in [0, 1] and differ from 0.5");
  Mat a(3, 2);
  a << 1, 0, 0, 1, alpha, 1 - alpha;
  return a;
}

inline Vec signal() {
  Vec x(2);
  x << 1, -3;
  return x;
}

inline Vec alternate_signal() {
  Vec x(2);
  x << -5, 1;
  return x;
}

}  // namespace unlabeled::golden
