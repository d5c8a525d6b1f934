#pragma once

#include <limits>
#include <vector>

#include "mahler/field.hpp"

namespace mahler {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct HeightValue {
  Ball value;
  double p = 1;             // exponent, kInfinity for the sup norm
  bool normalized = true;   // weights d_w/[K:Q]
};

/// L^p Weil height (sum_w (d_w/[K:Q]) |log||alpha||_w|^p)^(1/p); for p = inf
/// the unweighted max over places.  Throws ValidationError for p < 1.
HeightValue height(const FieldFixture& fix, const LogVector& alpha, double p);
Ball h1(const FieldFixture& fix, const LogVector& alpha);

enum class Equality { equal, distinct, ambiguous };

/// Compares two vectors of one fixture: exact on finite places when both carry
/// valuations, certified-interval against `tol` on the rest.  Throws
/// AmbiguityError when the vectors agree within tol everywhere but their exact
/// valuations differ.
Equality compare(const FieldFixture& fix, const LogVector& a, const LogVector& b, const Real& tol);

/// Galois elements (indices) fixing alpha.
std::vector<int> stabilizer(const FieldFixture& fix, const LogVector& alpha);

/// Size of the Galois orbit of alpha.  An undecidable comparison is retried
/// once at twice the working precision (when alpha has basis coordinates);
/// AmbiguityError if it stays undecided.
int delta(const FieldFixture& fix, const LogVector& alpha);

/// delta(alpha) * h_p(alpha).
HeightValue mahler_upper(const FieldFixture& fix, const LogVector& alpha, double p);

}  // namespace mahler
