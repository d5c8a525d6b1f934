#pragma once

#include <string>
#include <vector>

#include "mahler/numeric.hpp"

namespace mahler {

/// minimize sum_j weights[j] * |y_j|  subject to  a * y = b.
/// A zero weight makes y_j a free variable.
template <class T>
struct L1Problem {
  std::vector<T> weights;
  std::vector<std::vector<T>> a;  // rows
  std::vector<T> b;
  std::vector<std::string> blocks;  // optional label per variable

  int variables() const { return static_cast<int>(weights.size()); }
  int rows() const { return static_cast<int>(b.size()); }
};

template <class T>
struct LpResult {
  T objective;
  std::vector<T> y;
  /// Dual multipliers: b.pi is a lower bound whenever |A^T pi|_j <= w_j.
  std::vector<T> dual;
  T dual_bound;
  T dual_infeasibility;  // max_j (|A^T pi|_j - w_j)^+
  int pivots = 0;
};

/// Two-phase simplex with Bland's rule on the split problem y = y+ - y-.
/// Throws ValidationError for inconsistent constraints.
LpResult<Rational> solve_simplex(const L1Problem<Rational>& p);
/// Same at working precision; entries with |x| <= eps count as zero.
LpResult<Real> solve_simplex(const L1Problem<Real>& p, const Real& eps);
/// Default pivot tolerance for the Real solver: 2^(-3/4 * working bits).
Real simplex_epsilon();

/// Certified optimum for a problem with exact matrix and weights and a ball
/// right-hand side: value enclosure from the primal/dual gap, the b radii and
/// the dual infeasibility.
struct CertifiedLp {
  Ball value;
  LpResult<Real> solution;
};
CertifiedLp solve_certified(const L1Problem<Real>& p, const std::vector<Ball>& b);

struct SubgradientOptions {
  int iterations = 100000;
  double step = 1.0;  // step_t = step * scale / t along the normalized projected subgradient
  bool polish = true;
};

struct SubgradientResult {
  double objective;
  std::vector<double> y;
  double feasibility;  // ||a y - b||_inf at the returned point
  int iterations = 0;
};

/// Projected subgradient descent on the affine set (best iterate kept), then a
/// face-identification pass that zeroes small coordinates and re-projects.
SubgradientResult solve_subgradient(const L1Problem<double>& p, const SubgradientOptions& opts = {});

template <class U, class T, class F>
L1Problem<U> convert_problem(const L1Problem<T>& p, F f) {
  L1Problem<U> out;
  out.blocks = p.blocks;
  for (const auto& w : p.weights) out.weights.push_back(f(w));
  for (const auto& row : p.a) {
    std::vector<U> r;
    for (const auto& x : row) r.push_back(f(x));
    out.a.push_back(std::move(r));
  }
  for (const auto& x : p.b) out.b.push_back(f(x));
  return out;
}

}  // namespace mahler
