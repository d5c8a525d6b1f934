#include "mahler/quotient.hpp"

#include <algorithm>
#include <numeric>

#include "mahler/errors.hpp"
#include "mahler/heights.hpp"

namespace mahler {

namespace {

// Sign of a ball, treating values lost in rounding noise as zero.
int noisy_sign(const Ball& b) {
  const Real floor_tol = boost::multiprecision::pow(Real(2), -static_cast<long>(working_precision_bits() / 2));
  const Real band = boost::multiprecision::max(Real(4 * b.rad()), floor_tol);
  if (boost::multiprecision::abs(b.mid()) <= band) return 0;
  return b.mid() > 0 ? 1 : -1;
}

const Ball& min_ball(const Ball& a, const Ball& b) { return a.mid() <= b.mid() ? a : b; }

Ball positive_part(const Ball& b) { return b.mid() > 0 ? b : Ball(); }
Ball negative_part(const Ball& b) { return b.mid() < 0 ? -b : Ball(); }

bool nonzero_at(const FieldFixture& fix, const LogVector& alpha, PlaceId w) {
  if (alpha.has_exact_valuations() && !fix.place(w).archimedean()) {
    return alpha.valuations()[static_cast<size_t>(w)] != 0;
  }
  const auto s = alpha[w].sign_within(Real(fix.tolerance()));
  return !s || *s != 0;
}

Ball residual_of(const AMatrix& a, const std::vector<Ball>& x) {
  Ball r;
  for (int v = 0; v < a.rows(); ++v) {
    for (const auto& e : a.entries[static_cast<size_t>(v)]) r += abs(e - x[static_cast<size_t>(v)]);
  }
  return r;
}

}  // namespace

std::vector<Ball> AMatrix::column_sums() const {
  std::vector<Ball> s(static_cast<size_t>(ext_count));
  for (const auto& row : entries) {
    for (int i = 0; i < ext_count; ++i) s[static_cast<size_t>(i)] += row[static_cast<size_t>(i)];
  }
  return s;
}

Ball AMatrix::l1() const {
  Ball t;
  for (const auto& row : entries) {
    for (const auto& e : row) t += abs(e);
  }
  return t;
}

AMatrix a_matrix(const FieldFixture& fix, const LogVector& alpha, const SubfieldDescriptor& k,
                 const std::vector<PlaceId>& s) {
  if (alpha.size() != fix.place_count()) throw ValidationError("vector does not belong to this fixture");
  std::vector<bool> in_s(static_cast<size_t>(fix.place_count()), false);
  for (PlaceId w : s) {
    if (w < 0 || w >= fix.place_count()) throw ValidationError("place " + std::to_string(w) + " is not in the fixture");
    in_s[static_cast<size_t>(w)] = true;
  }
  for (PlaceId w = 0; w < fix.place_count(); ++w) {
    if (!in_s[static_cast<size_t>(w)] && nonzero_at(fix, alpha, w)) {
      throw SupportError("vector is nonzero at place " + std::to_string(w) + " outside S");
    }
  }

  AMatrix a;
  a.top_degree = fix.degree();
  a.base_degree = k.degree;
  a.ext_count = fix.degree() / k.degree;
  a.subfield = k.index;
  a.source = alpha;
  for (const auto& fiber : k.fibers) {
    const auto inside = std::count_if(fiber.begin(), fiber.end(), [&](PlaceId w) { return in_s[static_cast<size_t>(w)]; });
    if (inside == 0) continue;
    if (inside != static_cast<long>(fiber.size())) {
      throw ValidationError("S is not a union of places of the subfield " + k.label);
    }
    long mass = 0;
    for (PlaceId w : fiber) mass += fix.place(w).local_degree;
    const Rational dv(mass, a.ext_count);
    const int repeat = a.ext_count / static_cast<int>(fiber.size());
    std::vector<std::pair<Ball, PlaceId>> row;
    for (PlaceId w : fiber) {
      const Ball e = alpha[w] * dv;
      for (int r = 0; r < repeat; ++r) row.emplace_back(e, w);
    }
    std::stable_sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first.mid() < y.first.mid(); });
    std::vector<Ball> entries;
    std::vector<PlaceId> places;
    for (auto& [e, w] : row) {
      entries.push_back(e);
      places.push_back(w);
    }
    a.base_places.push_back(fiber);
    a.local_degree.push_back(dv);
    a.entries.push_back(std::move(entries));
    a.entry_place.push_back(std::move(places));
  }
  return a;
}

Ball quotient_norm(const AMatrix& a) {
  Ball t;
  for (const auto& s : a.column_sums()) t += abs(s);
  return t / Rational(a.top_degree);
}

std::vector<int> valid_pivots(const AMatrix& a) {
  const auto s = a.column_sums();
  const int n = a.ext_count;
  std::vector<int> out;
  for (int k = 0; k <= n; ++k) {
    const bool lo = k == 0 || noisy_sign(s[static_cast<size_t>(k - 1)]) <= 0;
    const bool hi = k == n || noisy_sign(s[static_cast<size_t>(k)]) >= 0;
    if (lo && hi) out.push_back(k);
  }
  return out;
}

std::vector<std::pair<Ball, Ball>> pivot_box(const AMatrix& a, int k) {
  std::vector<std::pair<Ball, Ball>> box;
  const int n = a.ext_count;
  const Ball inf(Real(1e300), Real(0));
  for (const auto& row : a.entries) {
    box.emplace_back(k == 0 ? -inf : row[static_cast<size_t>(k - 1)], k == n ? inf : row[static_cast<size_t>(k)]);
  }
  return box;
}

Ball eta_formula(const AMatrix& a, int k) {
  Ball lo;
  Ball hi;
  for (const auto& row : a.entries) {
    if (k > 0) lo += positive_part(row[static_cast<size_t>(k - 1)]) * Rational(2);
    if (k < a.ext_count) hi += negative_part(row[static_cast<size_t>(k)]) * Rational(2);
  }
  return max(lo, hi);
}

namespace {

std::vector<Ball> quotient_minimizer(const AMatrix& a, int k) {
  const auto s = a.column_sums();
  const int n = a.ext_count;
  const Rational count(a.rows());
  std::vector<Ball> x;
  for (const auto& row : a.entries) {
    if (k == 0) {
      x.push_back(row[0] - s[0] / count);
    } else if (k == n) {
      x.push_back(row[static_cast<size_t>(n - 1)] - s[static_cast<size_t>(n - 1)] / count);
    } else {
      const Ball& sk = s[static_cast<size_t>(k - 1)];
      const Ball& sk1 = s[static_cast<size_t>(k)];
      const Ball& lo = row[static_cast<size_t>(k - 1)];
      const Ball& hi = row[static_cast<size_t>(k)];
      if (noisy_sign(sk1 - sk) == 0) {
        x.push_back(lo);
      } else {
        // t = -s_k / (s_{k+1} - s_k), computed on midpoints with its radius bounded by 1
        const Real den = sk1.mid() - sk.mid();
        const Real t = -sk.mid() / den;
        const Real t_rad = (sk.rad() + sk1.rad()) * 2 / boost::multiprecision::abs(den) + unit_roundoff();
        x.push_back(lo + (hi - lo) * Ball(t, t_rad));
      }
    }
  }
  return x;
}

// Least-l1 point of the pivot-k box on the hyperplane sum x = 0.
std::vector<Ball> min_norm_in_box(const AMatrix& a, int k) {
  const int n = a.ext_count;
  if (k == 0 || k == n) return quotient_minimizer(a, k);
  std::vector<Ball> x;
  for (const auto& row : a.entries) x.push_back(row[static_cast<size_t>(k - 1)]);
  Ball remaining = -a.column_sums()[static_cast<size_t>(k - 1)];
  if (remaining.mid() < 0) remaining = Ball();
  // epsilon_v: lift negative lower ends toward zero
  for (int v = 0; v < a.rows() && noisy_sign(remaining) > 0; ++v) {
    const auto& row = a.entries[static_cast<size_t>(v)];
    const Ball cap = min_ball(negative_part(row[static_cast<size_t>(k - 1)]), row[static_cast<size_t>(k)] - row[static_cast<size_t>(k - 1)]);
    const Ball eps = min_ball(cap, remaining);
    x[static_cast<size_t>(v)] += eps;
    remaining -= eps;
  }
  // epsilon'_v: place what is left in the remaining box capacity
  for (int v = 0; v < a.rows() && noisy_sign(remaining) > 0; ++v) {
    const auto& row = a.entries[static_cast<size_t>(v)];
    const Ball cap = row[static_cast<size_t>(k)] - x[static_cast<size_t>(v)];
    if (cap.mid() <= 0) continue;
    const Ball eps = min_ball(cap, remaining);
    x[static_cast<size_t>(v)] += eps;
    remaining -= eps;
  }
  return x;
}

}  // namespace

QuotientSolution minimizer_x(const AMatrix& a) {
  const auto pivots = valid_pivots(a);
  if (pivots.empty()) throw InternalError("no pivot index satisfies s_k <= 0 <= s_{k+1}");
  QuotientSolution q;
  q.qnorm = quotient_norm(a);
  q.k = pivots.front();
  q.x = quotient_minimizer(a, q.k);
  q.residual_raw = residual_of(a, q.x);
  q.residual = q.residual_raw / Rational(a.top_degree);
  return q;
}

QuotientSolution eta_min_height(const AMatrix& a) {
  QuotientSolution q = minimizer_x(a);
  const auto pivots = valid_pivots(a);
  q.eta_k = pivots.front();
  q.eta_norm_formula = eta_formula(a, q.eta_k);
  for (int k : pivots) {
    const Ball f = eta_formula(a, k);
    if (f.mid() < q.eta_norm_formula.mid()) {
      q.eta_k = k;
      q.eta_norm_formula = f;
    }
  }
  q.eta_x = min_norm_in_box(a, q.eta_k);
  q.eta_norm_raw = Ball();
  for (const auto& xv : q.eta_x) q.eta_norm_raw += abs(xv);

  std::vector<Ball> eta(static_cast<size_t>(a.source.size()));
  for (int v = 0; v < a.rows(); ++v) {
    for (PlaceId w : a.base_places[static_cast<size_t>(v)]) {
      eta[static_cast<size_t>(w)] = q.eta_x[static_cast<size_t>(v)] / a.local_degree[static_cast<size_t>(v)];
    }
  }
  q.eta = LogVector(std::move(eta));
  q.eta_height = q.eta_norm_raw / Rational(a.base_degree);
  const Rational ext(a.ext_count);
  const Rational top(a.top_degree);
  q.ineq_lhs = q.eta_height + residual_of(a, q.eta_x) * (ext / top);
  q.ineq_rhs = a.l1() * (ext / top);
  return q;
}

QuotientLp to_l1_problem(const AMatrix& a) {
  QuotientLp out;
  auto& p = out.problem;
  const int rows = a.rows();
  const int n = a.ext_count;
  const int vars = rows * n + rows;
  p.weights.assign(static_cast<size_t>(vars), Real(0));
  for (int j = 0; j < rows * n; ++j) p.weights[static_cast<size_t>(j)] = 1;
  for (int v = 0; v < rows; ++v) {
    for (int i = 0; i < n; ++i) {
      std::vector<Real> row(static_cast<size_t>(vars), Real(0));
      row[static_cast<size_t>(v * n + i)] = 1;
      row[static_cast<size_t>(rows * n + v)] = 1;
      p.a.push_back(std::move(row));
      const Ball& e = a.entries[static_cast<size_t>(v)][static_cast<size_t>(i)];
      p.b.push_back(e.mid());
      out.rhs.push_back(e);
      p.blocks.push_back("r[" + std::to_string(v) + "," + std::to_string(i) + "]");
    }
  }
  for (int v = 0; v < rows; ++v) p.blocks.push_back("x[" + std::to_string(v) + "]");
  std::vector<Real> sum(static_cast<size_t>(vars), Real(0));
  for (int v = 0; v < rows; ++v) sum[static_cast<size_t>(rows * n + v)] = 1;
  p.a.push_back(std::move(sum));
  p.b.emplace_back(0);
  out.rhs.emplace_back();
  return out;
}

UnitsQuotient quotient_units_special(const FieldFixture& fix, const LogVector& alpha, PlaceId v) {
  if (v < 0 || v >= fix.place_count() || fix.place(v).archimedean()) {
    throw ValidationError("place " + std::to_string(v) + " is not a finite place of the fixture");
  }
  for (PlaceId w : fix.finite_places()) {
    if (w != v && nonzero_at(fix, alpha, w)) {
      throw SupportError("vector is nonzero at finite place " + std::to_string(w) + " other than " + std::to_string(v));
    }
  }
  const auto arch = fix.archimedean_places();
  Ball s;
  for (PlaceId w : arch) s += alpha[w] * Rational(fix.place(w).local_degree);
  const Ball av = alpha[v] * Rational(fix.place(v).local_degree);
  UnitsQuotient out;
  out.value = (abs(av) + abs(s)) / Rational(fix.degree());
  std::vector<Ball> beta(static_cast<size_t>(fix.place_count()));
  const Ball shift = s / Rational(static_cast<long>(arch.size()));
  for (PlaceId w : arch) {
    const Rational dw(fix.place(w).local_degree);
    beta[static_cast<size_t>(w)] = (alpha[w] * dw - shift) / dw;
  }
  out.beta = LogVector(std::move(beta), std::vector<Rational>(static_cast<size_t>(fix.place_count())));
  return out;
}

}  // namespace mahler
