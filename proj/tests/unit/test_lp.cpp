#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mahler/errors.hpp"
#include "mahler/lp.hpp"
#include "mahler/quotient.hpp"
#include "support.hpp"

using namespace mahler;

namespace {

L1Problem<double> as_double(const L1Problem<Rational>& p) {
  return convert_problem<double>(p, [](const Rational& x) { return x.convert_to<double>(); });
}

L1Problem<Real> as_real(const L1Problem<Rational>& p) {
  return convert_problem<Real>(p, [](const Rational& x) { return to_real(x); });
}

L1Problem<Rational> random_problem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(2, 7);
  std::uniform_int_distribution<int> coef(-3, 3);
  const int n = dim(rng);
  const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
  L1Problem<Rational> p;
  for (int j = 0; j < n; ++j) p.weights.emplace_back(std::uniform_int_distribution<int>(0, 3)(rng));
  p.weights[0] = 1;
  std::vector<Rational> y0;
  for (int j = 0; j < n; ++j) y0.push_back(testing_support::random_rational(rng));
  for (int i = 0; i < m; ++i) {
    std::vector<Rational> row;
    for (int j = 0; j < n; ++j) row.emplace_back(coef(rng));
    Rational b(0);
    for (int j = 0; j < n; ++j) b += row[static_cast<size_t>(j)] * y0[static_cast<size_t>(j)];
    p.a.push_back(std::move(row));
    p.b.push_back(b);
  }
  return p;
}

}  // namespace

TEST_CASE("minimize |x| s.t. x = 5") {
  const L1Problem<Rational> p{{1}, {{1}}, {5}, {}};
  const auto r = solve_simplex(p);
  CHECK(r.objective == 5);
  CHECK(r.y[0] == 5);
  CHECK(r.dual_bound == 5);
  CHECK(r.dual_infeasibility == 0);
  CHECK(std::abs(solve_subgradient(as_double(p)).objective - 5) <= 1e-9);
}

TEST_CASE("minimize |x| + |y| s.t. x + y = 2") {
  const L1Problem<Rational> p{{1, 1}, {{1, 1}}, {2}, {}};
  const auto r = solve_simplex(p);
  CHECK(r.objective == 2);
  CHECK(r.y[0] + r.y[1] == 2);
  CHECK(r.dual_bound == 2);
  CHECK(std::abs(solve_subgradient(as_double(p)).objective - 2) <= 1e-9);
}

TEST_CASE("quotient instance for 1+sqrt2") {
  const auto& f = testing_support::fixture("qsqrt2");
  const AMatrix a = a_matrix(f, f.element("1+sqrt2"), f.rationals(), {0, 1, 2});
  const QuotientLp lp = to_l1_problem(a);
  const auto r = solve_certified(lp.problem, lp.rhs);
  // raw value 2 log(1+sqrt2) = [L:Q] times the quotient norm
  CHECK(testing_support::near(r.value, "1.76274717403908605046521864996", 1e-25));
  const auto d = convert_problem<double>(lp.problem, [](const Real& x) { return to_double(x); });
  CHECK(std::abs(solve_subgradient(d).objective - 1.76274717403908605) <= 1e-9);
}

TEST_CASE("inconsistent constraints") {
  const L1Problem<Rational> p{{1, 1}, {{1, 1}, {2, 2}}, {1, 3}, {}};
  CHECK_THROWS_AS(solve_simplex(p), ValidationError);
}

TEST_CASE("redundant rows and free variables") {
  // y0 free, |y1| + |y2|; y0 + y1 = 1, y0 - y2 = -1, 2y0 + y1 - y2 = 0
  const L1Problem<Rational> p{{0, 1, 1}, {{1, 1, 0}, {1, 0, -1}, {2, 1, -1}}, {1, -1, 0}, {}};
  const auto r = solve_simplex(p);
  CHECK(r.objective == 2);
  CHECK(r.dual_bound == r.objective);
  CHECK(r.dual_infeasibility == 0);
}

TEST_CASE("random problems: duality, precision agreement, oracle agreement, scaling") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_problem(rng);
    const auto exact = solve_simplex(p);
    CHECK(exact.dual_bound == exact.objective);
    CHECK(exact.dual_infeasibility == 0);
    Rational check(0);
    for (int i = 0; i < p.rows(); ++i) {
      Rational s(0);
      for (int j = 0; j < p.variables(); ++j) s += p.a[static_cast<size_t>(i)][static_cast<size_t>(j)] * exact.y[static_cast<size_t>(j)];
      CHECK(s == p.b[static_cast<size_t>(i)]);
    }
    const auto real = solve_simplex(as_real(p), simplex_epsilon());
    CHECK(boost::multiprecision::abs(real.objective - to_real(exact.objective)) < Real("1e-40"));
    const auto sub = solve_subgradient(as_double(p));
    CHECK(std::abs(sub.objective - exact.objective.convert_to<double>()) <= 1e-9);
    CHECK(sub.feasibility <= 1e-9);

    const Rational r = testing_support::random_rational(rng);
    auto scaled = p;
    for (auto& b : scaled.b) b *= r;
    CHECK(solve_simplex(scaled).objective == abs(r) * exact.objective);
  }
}
