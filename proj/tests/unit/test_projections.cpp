#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mahler/errors.hpp"
#include "mahler/heights.hpp"
#include "mahler/projections.hpp"
#include "mahler/quotient.hpp"
#include "support.hpp"

using namespace mahler;
using testing_support::fixture;
using testing_support::near;
using testing_support::vectors_near;

namespace {

const SubfieldDescriptor& by_subgroup(const FieldFixture& fix, std::vector<int> h) {
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  for (const auto& f : fix.subfields()) {
    if (f.subgroup == h) return f;
  }
  FAIL("subgroup not in the lattice");
  return fix.top();
}

// Subgroup generated by H_E and H_F, i.e. the field E ∩ F.
const SubfieldDescriptor& meet(const FieldFixture& fix, const SubfieldDescriptor& e, const SubfieldDescriptor& f) {
  std::vector<Permutation> gens;
  for (int i : e.subgroup) gens.push_back(fix.galois().elements[static_cast<size_t>(i)]);
  for (int i : f.subgroup) gens.push_back(fix.galois().elements[static_cast<size_t>(i)]);
  std::vector<int> h;
  for (const auto& g : generate_group(gens, fix.place_count())) h.push_back(fix.galois().index_of(g));
  return by_subgroup(fix, h);
}

const SubfieldDescriptor& conjugate(const FieldFixture& fix, const Permutation& s, const SubfieldDescriptor& f) {
  std::vector<int> h;
  for (int i : f.subgroup) h.push_back(fix.galois().index_of(s * fix.galois().elements[static_cast<size_t>(i)] * s.inverse()));
  return by_subgroup(fix, h);
}

}  // namespace

TEST_CASE("field projection examples") {
  const auto& q2 = fixture("qsqrt2");
  const LogVector p = proj_field(q2, q2.rationals(), q2.element("1+sqrt2"));
  CHECK(vectors_near(p, LogVector::zero(3), 1e-30));
  CHECK(p.valuations() == std::vector<Rational>(3));
  const LogVector r = q2.element("sqrt2");
  CHECK(vectors_near(proj_field(q2, q2.rationals(), r), r, 1e-30));

  const auto& b = fixture("qbiquad");
  CHECK(vectors_near(proj_field(b, b.subfield("Q(sqrt2)"), b.element("sqrt2+sqrt3")), LogVector::zero(6), 1e-30));
  CHECK(in_subfield_span(b, b.subfield("Q(sqrt6)"), b.element("sqrt2+sqrt3")));
  CHECK_FALSE(in_subfield_span(b, b.subfield("Q(sqrt2)"), b.element("sqrt2+sqrt3")));
}

TEST_CASE("alpha_v examples") {
  const auto& e = fixture("qsqrt2-ext");
  CHECK(vectors_near(alpha_v(e, 3), e.element("3+sqrt2"), 1e-30));
  CHECK(vectors_near(alpha_v(e, 4), e.element("3-sqrt2"), 1e-30));
  CHECK(vectors_near(alpha_v(e, 4), act(e.galois().elements[1], alpha_v(e, 3)), 1e-30));
  const auto& q2 = fixture("qsqrt2");
  CHECK(vectors_near(alpha_v(q2, 2), q2.element("sqrt2"), 1e-30));
  CHECK_THROWS_AS(alpha_v(q2, 0), ValidationError);
}

TEST_CASE("alpha_v system invariants") {
  for (const auto& name : testing_support::fixture_names()) {
    const auto& fix = fixture(name);
    const AlphaVSystem sys = build_alpha_v_system(fix);
    CHECK(sys.alpha.size() == fix.finite_places().size());
    for (const auto& [v, a] : sys.alpha) {
      CAPTURE(name);
      CAPTURE(v);
      CHECK(a[v].certainly_negative());
      for (PlaceId w : fix.finite_places()) {
        if (w != v) CHECK(a.valuations()[static_cast<size_t>(w)] == 0);
      }
      for (PlaceId w : fix.archimedean_places()) CHECK(a[w].mid() >= -1e-30);
      // delta equals the number of places over p
      CHECK(delta(fix, a) == static_cast<int>(fix.places_over(fix.place(v).prime).size()));
      // h_1 equals the quotient norm modulo the units
      CHECK(near(h1(fix, a), quotient_units_special(fix, a, v).value, 1e-25));
      // Galois equivariance
      for (const auto& g : fix.galois().elements) CHECK(vectors_near(act(g, a), sys.alpha.at(g[v]), 1e-25));
      CHECK(vectors_near(a, alpha_v(fix, v), 1e-30));
    }
  }
}

TEST_CASE("S-unit projection examples") {
  const auto& e = fixture("qsqrt2-ext");
  const AlphaVSystem sys = build_alpha_v_system(e);
  const std::vector<PlaceId> s = {0, 1, 2};
  const LogVector p = proj_sunits(e, s, sys, e.element("7(1+sqrt2)"));
  const LogVector u = e.element("1+sqrt2");
  CHECK(p.valuations() == u.valuations());
  CHECK(vectors_near(p, u, 1e-30));
  CHECK(n_v(sys, e.element("7(1+sqrt2)"), 3) == 1);
  CHECK(n_v(sys, e.element("7(1+sqrt2)"), 4) == 1);
  CHECK(vectors_near(proj_sunits(e, s, sys, u), u, 0));
  // alpha_v itself reduces to its S-part, which is trivial here
  CHECK(vectors_near(proj_sunits(e, s, sys, sys.alpha.at(3)), LogVector::zero(5), 1e-30));
  AlphaVSystem partial = sys;
  partial.alpha.erase(4);
  CHECK_THROWS_AS(proj_sunits(e, s, partial, e.element("7")), SupportError);
}

TEST_CASE("field projection properties") {
  std::mt19937_64 rng(99);
  for (const auto& name : testing_support::fixture_names()) {
    const auto& fix = fixture(name);
    const Real tol(1e-9);
    for (int trial = 0; trial < 20; ++trial) {
      const LogVector a = testing_support::random_element(fix, rng);
      const int da = delta(fix, a);
      for (const auto& f : fix.subfields()) {
        CAPTURE(name);
        CAPTURE(f.label);
        const LogVector pa = proj_field(fix, f, a);
        CHECK(in_subfield_span(fix, f, pa));
        CHECK(vectors_near(proj_field(fix, f, pa), pa, 1e-25));
        for (double p : {1.0, 2.0, kInfinity}) CHECK(height(fix, pa, p).value.mid() <= height(fix, a, p).value.mid() + 1e-25);
        CHECK(delta(fix, pa) <= da);
        Ball inner;
        const LogVector rest = a - pa;
        for (const auto& pl : fix.places()) inner += pa[pl.id] * rest[pl.id] * Rational(pl.local_degree, fix.degree());
        CHECK(inner.sign_within(tol) == 0);
        for (const auto& g : fix.galois().elements) {
          CHECK(vectors_near(act(g, pa), proj_field(fix, conjugate(fix, g, f), act(g, a)), 1e-25));
        }
        for (const auto& e2 : fix.subfields()) {
          CHECK(vectors_near(proj_field(fix, e2, pa), proj_field(fix, meet(fix, e2, f), a), 1e-25));
        }
      }
    }
  }
}

TEST_CASE("S-unit projection properties") {
  std::mt19937_64 rng(31);
  const auto& e = fixture("qsqrt2-ext");
  const AlphaVSystem sys = build_alpha_v_system(e);
  const std::vector<PlaceId> s = {0, 1, 2};
  for (int trial = 0; trial < 50; ++trial) {
    const LogVector a = testing_support::random_element(e, rng);
    const LogVector b = testing_support::random_element(e, rng);
    const LogVector pa = proj_sunits(e, s, sys, a);
    CHECK(pa.valuations()[3] == 0);
    CHECK(pa.valuations()[4] == 0);
    CHECK(vectors_near(proj_sunits(e, s, sys, pa), pa, 1e-30));
    CHECK(h1(e, pa).mid() <= h1(e, a).mid() + 1e-25);
    CHECK(delta(e, pa) <= delta(e, a));
    for (PlaceId v : {3, 4}) CHECK(n_v(sys, a + b, v) == n_v(sys, a, v) + n_v(sys, b, v));
  }
}
