#include "mahler/extremal.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "mahler/errors.hpp"
#include "mahler/quotient.hpp"

namespace mahler {

namespace {

bool nonzero_at(const FieldFixture& fix, const LogVector& alpha, PlaceId w) {
  if (alpha.has_exact_valuations() && !fix.place(w).archimedean()) {
    return alpha.valuations()[static_cast<size_t>(w)] != 0;
  }
  const auto s = alpha[w].sign_within(Real(fix.tolerance()));
  return !s || *s != 0;
}

bool supported_in(const FieldFixture& fix, const LogVector& alpha, const std::vector<PlaceId>& s) {
  for (PlaceId w = 0; w < fix.place_count(); ++w) {
    if (std::find(s.begin(), s.end(), w) == s.end() && nonzero_at(fix, alpha, w)) return false;
  }
  return true;
}

std::vector<int> s_fibers(const SubfieldDescriptor& f, const std::vector<PlaceId>& s) {
  std::vector<int> out;
  for (size_t u = 0; u < f.fibers.size(); ++u) {
    if (std::find(s.begin(), s.end(), f.fibers[u].front()) != s.end()) out.push_back(static_cast<int>(u));
  }
  return out;
}

}  // namespace

std::vector<PlaceId> build_S(const FieldFixture& fix, const LogVector& alpha) {
  std::set<PlaceId> s;
  for (PlaceId w : fix.archimedean_places()) s.insert(w);
  for (PlaceId w : fix.finite_places()) {
    if (!nonzero_at(fix, alpha, w)) continue;
    for (const auto& g : fix.galois().elements) s.insert(g[w]);
  }
  return {s.begin(), s.end()};
}

ExtremalLp extremal_problem(const FieldFixture& fix, const LogVector& alpha, const std::vector<PlaceId>& s) {
  ExtremalLp out;
  auto& p = out.problem;
  const Rational n(fix.degree());
  for (const auto& f : fix.subfields()) {
    for (int u : s_fibers(f, s)) {
      long mass = 0;
      for (PlaceId w : f.fibers[static_cast<size_t>(u)]) mass += fix.place(w).local_degree;
      p.weights.push_back(to_real(Rational(f.degree * mass) / n));
      p.blocks.push_back(f.label + "/" + std::to_string(u));
      out.variable.emplace_back(f.index, u);
    }
  }
  const size_t vars = p.weights.size();
  // trace rows: each part satisfies the product formula (implied for K)
  for (const auto& f : fix.subfields()) {
    if (f.index == fix.top().index) continue;
    std::vector<Real> row(vars, Real(0));
    for (size_t j = 0; j < vars; ++j) {
      if (out.variable[j].first != f.index) continue;
      long mass = 0;
      for (PlaceId w : f.fibers[static_cast<size_t>(out.variable[j].second)]) mass += fix.place(w).local_degree;
      row[j] = mass;
    }
    p.a.push_back(std::move(row));
    p.b.emplace_back(0);
    out.rhs.emplace_back();
  }
  // coordinate rows: sum_F alpha_F = alpha on S
  for (PlaceId w : s) {
    std::vector<Real> row(vars, Real(0));
    for (size_t j = 0; j < vars; ++j) {
      const auto& f = fix.subfields()[static_cast<size_t>(out.variable[j].first)];
      if (f.fiber_of[static_cast<size_t>(w)] == out.variable[j].second) row[j] = 1;
    }
    p.a.push_back(std::move(row));
    p.b.push_back(alpha[w].mid());
    out.rhs.push_back(alpha[w]);
  }
  return out;
}

DecompositionResult extremal_m1(const FieldFixture& fix, const LogVector& alpha) {
  return extremal_m1(fix, alpha, build_S(fix, alpha));
}

DecompositionResult extremal_m1(const FieldFixture& fix, const LogVector& alpha, std::vector<PlaceId> s) {
  if (alpha.size() != fix.place_count()) throw ValidationError("vector does not belong to this fixture");
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!supported_in(fix, alpha, s)) {
    std::set<PlaceId> wide(s.begin(), s.end());
    for (PlaceId w : build_S(fix, alpha)) wide.insert(w);
    s.assign(wide.begin(), wide.end());
    if (!supported_in(fix, alpha, s)) throw SupportError("vector is not supported in the widened place set");
  }
  for (PlaceId w : s) {
    for (const auto& g : fix.galois().elements) {
      if (std::find(s.begin(), s.end(), g[w]) == s.end()) throw ValidationError("place set S is not Galois-stable");
    }
  }

  DecompositionResult out;
  out.s_used = s;
  out.h1 = h1(fix, alpha);
  out.delta = delta(fix, alpha);
  out.upper = out.h1 * Rational(out.delta);

  const ExtremalLp lp = extremal_problem(fix, alpha, s);
  CertifiedLp sol;
  try {
    sol = solve_certified(lp.problem, lp.rhs);
  } catch (const ValidationError& e) {
    throw InternalError(std::string("extremal LP is infeasible: ") + e.what());
  }
  out.total = sol.value;
  out.pivots = sol.solution.pivots;

  const Real tol(fix.tolerance());
  const Real eps = simplex_epsilon();
  const auto& lattice = fix.subfields();
  std::vector<LogVector> part(lattice.size(), LogVector::zero(fix.place_count()));
  for (const auto& f : lattice) {
    std::vector<Ball> coords(static_cast<size_t>(fix.place_count()));
    for (size_t j = 0; j < lp.variable.size(); ++j) {
      if (lp.variable[j].first != f.index) continue;
      Real y = sol.solution.y[j];
      if (boost::multiprecision::abs(y) <= eps) y = 0;
      for (PlaceId w : f.fibers[static_cast<size_t>(lp.variable[j].second)]) {
        coords[static_cast<size_t>(w)] = Ball(y, sol.value.rad());
      }
    }
    part[static_cast<size_t>(f.index)] = LogVector(std::move(coords));
  }
  auto is_zero = [&](const LogVector& v) {
    for (PlaceId w = 0; w < fix.place_count(); ++w) {
      if (boost::multiprecision::abs(v[w].mid()) > tol) return false;
    }
    return true;
  };
  auto quotient_gap = [&](const LogVector& v, const SubfieldDescriptor& e) {
    const Ball q = quotient_norm(a_matrix(fix, v, e, s));
    const auto gap = (h1(fix, v) - q).sign_within(Real(1e-9));
    return std::pair{q, gap && *gap == 0};
  };

  // A simplex vertex need not satisfy the quotient-norm condition.  Replacing
  // alpha_F by its least-height representative modulo E and moving the rest
  // into the E-part never raises the weighted sum, so at an optimum it is free.
  const int max_moves = 4 * static_cast<int>(lattice.size() * lattice.size());
  for (int moves = 0; moves < max_moves;) {
    bool moved = false;
    for (auto f = lattice.rbegin(); f != lattice.rend() && !moved; ++f) {
      LogVector& af = part[static_cast<size_t>(f->index)];
      if (is_zero(af)) continue;
      for (const auto& e : lattice) {
        if (e.index == f->index || !f->contains(e)) continue;
        if (quotient_gap(af, e).second) continue;
        const QuotientSolution q = eta_min_height(a_matrix(fix, af, e, s));
        af -= q.eta;
        part[static_cast<size_t>(e.index)] += q.eta;
        moved = true;
        ++moves;
        break;
      }
    }
    if (!moved) break;
  }

  Ball weighted_sum;
  std::vector<Ball> rebuilt(static_cast<size_t>(fix.place_count()));
  for (const auto& f : lattice) {
    const LogVector& af = part[static_cast<size_t>(f.index)];
    for (PlaceId w = 0; w < fix.place_count(); ++w) rebuilt[static_cast<size_t>(w)] += af[w];
    if (is_zero(af)) continue;

    DecompositionPart dp;
    dp.subfield = f.index;
    dp.label = f.label;
    dp.degree = f.degree;
    dp.alpha = af;
    dp.height = h1(fix, af);
    dp.weighted = dp.height * Rational(f.degree);
    dp.rational_coords = fix.recognize(af);
    weighted_sum += dp.weighted;
    for (const auto& e : lattice) {
      if (e.index == f.index || !f.contains(e)) continue;
      PartCertificate c;
      c.subfield = e.index;
      c.part_height = dp.height;
      std::tie(c.quotient, c.holds) = quotient_gap(af, e);
      if (!c.holds) out.certificates_hold = false;
      dp.certificates.push_back(c);
    }
    out.parts.push_back(std::move(dp));
  }
  // the reported parts must still realise the LP value
  const auto agree = (weighted_sum - out.total).sign_within(Real(1e-9));
  if (!agree || *agree != 0) out.certificates_hold = false;

  bool all_rational = true;
  for (const auto& p : out.parts) all_rational = all_rational && p.rational_coords.has_value();
  out.attainment = all_rational ? "attained" : "unknown";
  Ball worst;
  for (PlaceId w = 0; w < fix.place_count(); ++w) worst = max(worst, abs(rebuilt[static_cast<size_t>(w)] - alpha[w]));
  out.reconstruction_error = worst;
  return out;
}

Ball closed_form_check(const FieldFixture& fix, const LogVector& alpha, ClosedForm kind, const std::optional<Ball>& house) {
  if (kind == ClosedForm::surd) {
    const int d = delta(fix, alpha);
    if (d != 1) throw ValidationError("surd closed form requested for a class with delta = " + std::to_string(d));
    return h1(fix, alpha);
  }
  if (!house) throw ValidationError("Pisot/Salem closed form needs the house");
  if (!(house->lower() > 1)) throw ValidationError("house of a Pisot/Salem number must exceed 1");
  return log(*house) * Rational(2);
}

std::pair<HeightValue, HeightValue> extremal_bounds(const FieldFixture& fix, const LogVector& alpha, double p) {
  return {height(fix, alpha, p), mahler_upper(fix, alpha, p)};
}

}  // namespace mahler
