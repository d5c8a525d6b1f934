#include "mahler/heights.hpp"

#include <cmath>

#include "mahler/errors.hpp"

namespace mahler {

HeightValue height(const FieldFixture& fix, const LogVector& alpha, double p) {
  if (std::isnan(p) || p < 1) throw ValidationError("height exponent must satisfy p >= 1");
  if (alpha.size() != fix.place_count()) throw ValidationError("vector does not belong to this fixture");
  HeightValue out;
  out.p = p;
  if (std::isinf(p)) {
    out.normalized = false;
    Ball m;
    for (const auto& c : alpha.log_abs()) m = max(m, abs(c));
    out.value = m;
    return out;
  }
  Ball sum;
  const Rational n(fix.degree());
  if (p == 1) {
    for (const auto& pl : fix.places()) sum += abs(alpha[pl.id]) * (Rational(pl.local_degree) / n);
    out.value = sum;
    return out;
  }
  const Real pr(p);
  for (const auto& pl : fix.places()) sum += pow(abs(alpha[pl.id]), pr) * (Rational(pl.local_degree) / n);
  out.value = pow(sum, Real(1) / pr);
  return out;
}

Ball h1(const FieldFixture& fix, const LogVector& alpha) { return height(fix, alpha, 1).value; }

Equality compare(const FieldFixture& fix, const LogVector& a, const LogVector& b, const Real& tol) {
  const bool exact = a.has_exact_valuations() && b.has_exact_valuations();
  bool undecided = false;
  bool distinct = false;
  bool finite_differs = false;
  bool within_tol_everywhere = true;
  for (const auto& pl : fix.places()) {
    const Ball d = a[pl.id] - b[pl.id];
    if (exact && !pl.archimedean()) {
      if (a.valuations()[static_cast<size_t>(pl.id)] != b.valuations()[static_cast<size_t>(pl.id)]) {
        finite_differs = true;
        if (boost::multiprecision::abs(d.mid()) > tol) within_tol_everywhere = false;
      }
      continue;
    }
    const auto s = d.sign_within(tol);
    if (!s) {
      undecided = true;
    } else if (*s != 0) {
      distinct = true;
      within_tol_everywhere = false;
    }
  }
  if (finite_differs) {
    if (within_tol_everywhere) {
      throw AmbiguityError("vectors agree within tolerance but differ in exact valuations");
    }
    return Equality::distinct;
  }
  if (distinct) return Equality::distinct;
  return undecided ? Equality::ambiguous : Equality::equal;
}

namespace {

// Orbit size, or nullopt when some comparison is undecided.
std::optional<int> orbit_size(const FieldFixture& fix, const LogVector& alpha) {
  const Real tol(fix.tolerance());
  std::vector<LogVector> reps;
  for (const auto& g : fix.galois().elements) {
    LogVector img = act(g, alpha);
    bool found = false;
    for (const auto& r : reps) {
      const Equality e = compare(fix, r, img, tol);
      if (e == Equality::ambiguous) return std::nullopt;
      if (e == Equality::equal) {
        found = true;
        break;
      }
    }
    if (!found) reps.push_back(std::move(img));
  }
  return static_cast<int>(reps.size());
}

}  // namespace

std::vector<int> stabilizer(const FieldFixture& fix, const LogVector& alpha) {
  const Real tol(fix.tolerance());
  std::vector<int> out;
  const auto& els = fix.galois().elements;
  for (size_t i = 0; i < els.size(); ++i) {
    const Equality e = compare(fix, alpha, act(els[i], alpha), tol);
    if (e == Equality::ambiguous) throw AmbiguityError("cannot decide whether a Galois element fixes the vector");
    if (e == Equality::equal) out.push_back(static_cast<int>(i));
  }
  return out;
}

int delta(const FieldFixture& fix, const LogVector& alpha) {
  if (auto n = orbit_size(fix, alpha)) return *n;
  if (alpha.basis_coords()) {
    const unsigned bits = 2 * fix.precision_bits();
    PrecisionScope scope(bits);
    const FieldFixture fine = fix.with_precision(bits);
    if (auto n = orbit_size(fine, fine.from_basis(*alpha.basis_coords()))) return *n;
  }
  throw AmbiguityError("Galois orbit of the vector is undecidable at tolerance " + std::to_string(fix.tolerance()) +
                       " even after doubling the working precision");
}

HeightValue mahler_upper(const FieldFixture& fix, const LogVector& alpha, double p) {
  HeightValue h = height(fix, alpha, p);
  h.value *= Rational(delta(fix, alpha));
  return h;
}

}  // namespace mahler
