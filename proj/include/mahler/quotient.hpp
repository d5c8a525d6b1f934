#pragma once

#include <vector>

#include "mahler/field.hpp"
#include "mahler/lp.hpp"

namespace mahler {

/// Valuation matrix of alpha (over the fixture field L) relative to a subfield
/// K: one row per place v of K in S, each holding the [L:K] values
/// d_v * log||alpha||_{v,i}, sorted ascending.
struct AMatrix {
  int ext_count = 1;     // [L:K]
  int top_degree = 1;    // [L:Q]
  int base_degree = 1;   // [K:Q]
  int subfield = 0;      // index of K in the fixture lattice
  std::vector<std::vector<PlaceId>> base_places;  // v as the K-fiber of L-places
  std::vector<Rational> local_degree;             // d_v
  std::vector<std::vector<Ball>> entries;         // a[v][i]
  std::vector<std::vector<PlaceId>> entry_place;  // L-place each entry came from
  LogVector source;

  int rows() const { return static_cast<int>(entries.size()); }
  /// s_i = sum_v a_{v,i}, i = 1..[L:K] (stored 0-based).
  std::vector<Ball> column_sums() const;
  /// sum_{v,i} |a_{v,i}|
  Ball l1() const;
};

struct QuotientSolution {
  Ball qnorm;            // (1/[L:Q]) sum_i |s_i|
  int k = 0;             // least pivot with s_k <= 0 <= s_{k+1}
  std::vector<Ball> x;   // minimizer, one entry per base place
  Ball residual_raw;     // ||a - x||_1 over all entries
  Ball residual;         // residual_raw / [L:Q] = h_1(alpha x^-1)

  // populated by eta_min_height
  int eta_k = 0;
  std::vector<Ball> eta_x;
  Ball eta_norm_raw;     // ||eta_x||_1
  Ball eta_norm_formula; // max{sum 2 a+_{v,k}, sum 2 a-_{v,k+1}}
  LogVector eta;         // eta as a vector over L
  Ball eta_height;       // h_1(eta) = ||eta_x||_1 / [K:Q]
  Ball ineq_lhs;         // h_1(eta) + [L:K] h_1(alpha eta^-1)
  Ball ineq_rhs;         // [L:K] h_1(alpha)
};

/// S is a set of L-places forming a union of K-fibers; throws SupportError
/// when alpha is nonzero outside S and ValidationError when S is not K-stable.
AMatrix a_matrix(const FieldFixture& fix, const LogVector& alpha, const SubfieldDescriptor& k,
                 const std::vector<PlaceId>& s);

Ball quotient_norm(const AMatrix& a);
QuotientSolution minimizer_x(const AMatrix& a);
QuotientSolution eta_min_height(const AMatrix& a);

/// Lower and upper end of the box for pivot k (k = 0 and k = [L:K] are open on one side).
std::vector<std::pair<Ball, Ball>> pivot_box(const AMatrix& a, int k);
/// max{sum_v 2 a+_{v,k}, sum_v 2 a-_{v,k+1}} with a_{v,0} = -inf, a_{v,n+1} = +inf.
Ball eta_formula(const AMatrix& a, int k);
/// Pivots k in [0, [L:K]] with s_k <= 0 <= s_{k+1}.
std::vector<int> valid_pivots(const AMatrix& a);

/// min ||a - x||_1 subject to sum_v x_v = 0, as an L1 problem over
/// (r_{v,i}, x_v); its optimum is [L:Q] * quotient_norm.
struct QuotientLp {
  L1Problem<Real> problem;
  std::vector<Ball> rhs;
};
QuotientLp to_l1_problem(const AMatrix& a);

struct UnitsQuotient {
  Ball value;
  LogVector beta;  // minimizer in the closure of the unit span
};
/// Quotient of alpha (supported on the archimedean places and v) by the unit span.
UnitsQuotient quotient_units_special(const FieldFixture& fix, const LogVector& alpha, PlaceId v);

}  // namespace mahler
