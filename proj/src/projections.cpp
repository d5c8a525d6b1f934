#include "mahler/projections.hpp"

#include <algorithm>

#include "mahler/errors.hpp"
#include "mahler/heights.hpp"
#include "mahler/quotient.hpp"

namespace mahler {

LogVector proj_field(const FieldFixture& fix, const SubfieldDescriptor& f, const LogVector& alpha) {
  if (alpha.size() != fix.place_count()) throw ValidationError("vector does not belong to this fixture");
  const auto& els = fix.galois().elements;
  LogVector sum = LogVector::zero(fix.place_count());
  if (!alpha.has_exact_valuations()) sum.drop_exact_data();
  for (int h : f.subgroup) sum += act(els[static_cast<size_t>(h)], alpha);
  sum *= Rational(1, static_cast<long>(f.subgroup.size()));
  return sum;
}

bool in_subfield_span(const FieldFixture& fix, const SubfieldDescriptor& f, const LogVector& alpha) {
  const Real tol(fix.tolerance());
  for (const auto& fiber : f.fibers) {
    for (PlaceId w : fiber) {
      if (alpha.has_exact_valuations() && !fix.place(w).archimedean()) {
        if (alpha.valuations()[static_cast<size_t>(w)] != alpha.valuations()[static_cast<size_t>(fiber.front())]) return false;
        continue;
      }
      const auto s = (alpha[w] - alpha[fiber.front()]).sign_within(tol);
      if (!s || *s != 0) return false;
    }
  }
  return true;
}

const SubfieldDescriptor& decomposition_field(const FieldFixture& fix, PlaceId v) {
  std::vector<int> stab;
  const auto& els = fix.galois().elements;
  for (size_t i = 0; i < els.size(); ++i) {
    if (els[i][v] == v) stab.push_back(static_cast<int>(i));
  }
  for (const auto& f : fix.subfields()) {
    if (f.subgroup == stab) return f;
  }
  throw ValidationError("fixture lacks the stabilizer subgroup of place " + std::to_string(v));
}

namespace {

struct Representative {
  LogVector vec;
  bool adjusted = false;
};

Representative representative_alpha(const FieldFixture& fix, PlaceId v) {
  const auto it = fix.prime_generators().find(v);
  if (it == fix.prime_generators().end()) {
    throw ValidationError("fixture supplies no prime generator for place " + std::to_string(v));
  }
  LogVector g = it->second;
  if (fix.class_number() != 1) g *= Rational(1, fix.class_number());
  if (g.valuations()[static_cast<size_t>(v)] < 0) g = -g;

  Representative r;
  bool nonnegative = true;
  for (PlaceId w : fix.archimedean_places()) {
    if (g[w].lower() < 0) nonnegative = false;
  }
  if (!nonnegative) {
    g -= quotient_units_special(fix, g, v).beta;
    r.adjusted = true;
    for (PlaceId w : fix.archimedean_places()) {
      if (!g[w].certainly_positive()) {
        throw PrecisionError("cannot certify a nonnegative archimedean coordinate for the generator at place " +
                             std::to_string(v));
      }
    }
  }
  r.vec = proj_field(fix, decomposition_field(fix, v), g);
  return r;
}

}  // namespace

AlphaVSystem build_alpha_v_system(const FieldFixture& fix) {
  AlphaVSystem sys;
  const auto& els = fix.galois().elements;
  for (unsigned long p : fix.primes()) {
    const auto over = fix.places_over(p);
    const PlaceId v0 = over.front();
    sys.representative[p] = v0;
    Representative rep = representative_alpha(fix, v0);
    sys.unit_adjusted[v0] = rep.adjusted;
    for (PlaceId w : over) {
      for (size_t i = 0; i < els.size(); ++i) {
        if (els[i][v0] == w) {
          sys.spread_by[w] = static_cast<int>(i);
          sys.alpha.emplace(w, act(els[i], rep.vec));
          break;
        }
      }
    }
  }
  return sys;
}

LogVector alpha_v(const FieldFixture& fix, PlaceId v) {
  if (v < 0 || v >= fix.place_count() || fix.place(v).archimedean()) {
    throw ValidationError("place " + std::to_string(v) + " is not a finite place of the fixture");
  }
  const auto over = fix.places_over(fix.place(v).prime);
  const PlaceId v0 = over.front();
  const LogVector rep = representative_alpha(fix, v0).vec;
  for (const auto& g : fix.galois().elements) {
    if (g[v0] == v) return act(g, rep);
  }
  throw InternalError("no Galois element reaches place " + std::to_string(v));
}

Rational n_v(const AlphaVSystem& sys, const LogVector& alpha, PlaceId v) {
  const auto it = sys.alpha.find(v);
  if (it == sys.alpha.end()) throw SupportError("place " + std::to_string(v) + " is not covered by the alpha_v system");
  if (!alpha.has_exact_valuations()) throw ValidationError("S-unit projection needs exact valuations");
  return alpha.valuations()[static_cast<size_t>(v)] / it->second.valuations()[static_cast<size_t>(v)];
}

LogVector proj_sunits(const FieldFixture& fix, const std::vector<PlaceId>& s, const AlphaVSystem& sys,
                      const LogVector& alpha) {
  if (!alpha.has_exact_valuations()) throw ValidationError("S-unit projection needs exact valuations");
  LogVector out = alpha;
  for (PlaceId v : fix.finite_places()) {
    if (std::find(s.begin(), s.end(), v) != s.end()) continue;
    if (alpha.valuations()[static_cast<size_t>(v)] == 0) continue;
    const Rational n = n_v(sys, alpha, v);
    out -= sys.alpha.at(v) * n;
  }
  return out;
}

}  // namespace mahler
