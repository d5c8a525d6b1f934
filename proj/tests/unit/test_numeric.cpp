#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mahler/errors.hpp"
#include "mahler/numeric.hpp"

using namespace mahler;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(to_string(Rational(-3, 4)) == "-3/4");
  CHECK(to_string(Rational(5)) == "5");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("decimal literals carry half an ulp of the last digit") {
  const Ball b = Ball::parse_decimal("0.125");
  CHECK(b.mid() == Real("0.125"));
  CHECK(b.rad() >= Real("0.0005"));
  CHECK(b.rad() < Real("0.00051"));
  CHECK(Ball::parse_decimal("-2").rad() == 0);
  CHECK(Ball::parse_decimal("1.5e-3").mid() == Real("0.0015"));
  CHECK(significant_digits("0.00120") == 3);
  CHECK(significant_digits("-123.45") == 5);
  CHECK_THROWS_AS(Ball::parse_decimal("1.2.3"), ParseError);
  CHECK_THROWS_AS(Ball::parse_decimal("x"), ParseError);
}

TEST_CASE("ball arithmetic encloses the true value") {
  const Ball l2 = log_integer(2);
  const Ball l3 = log_integer(3);
  const Ball l6 = log_integer(6);
  const Ball diff = l2 + l3 - l6;
  CHECK(diff.contains_zero());
  CHECK(diff.rad() < Real("1e-55"));
  const Ball third = Ball::exact(Rational(1, 3)) * Rational(3) - Ball(1LL);
  CHECK(third.contains_zero());
  const Ball sq = pow(l2, Real(2));
  CHECK(boost::multiprecision::abs(sq.mid() - l2.mid() * l2.mid()) <= sq.rad());
  CHECK(abs(-l2).mid() == l2.mid());
  CHECK(max(l2, l3).mid() == l3.mid());
}

TEST_CASE("log requires a certainly positive argument") {
  CHECK(log(Ball(1LL)).contains_zero());
  CHECK_THROWS_AS(log(Ball(Real(0), Real("0.1"))), PrecisionError);
  CHECK_THROWS_AS(log(Ball(-1LL)), PrecisionError);
}

TEST_CASE("sign within tolerance") {
  const Real tol("1e-12");
  CHECK(Ball(Real("1e-3"), Real(0)).sign_within(tol) == 1);
  CHECK(Ball(Real("-1e-3"), Real(0)).sign_within(tol) == -1);
  CHECK(Ball(Real("1e-14"), Real("1e-14")).sign_within(tol) == 0);
  CHECK_FALSE(Ball(Real("1e-12"), Real("5e-13")).sign_within(tol).has_value());
}

TEST_CASE("precision scope restores the previous precision") {
  const unsigned before = working_precision_bits();
  {
    PrecisionScope s(400);
    CHECK(working_precision_bits() == 400);
    CHECK(unit_roundoff() < Real("1e-110"));
  }
  CHECK(working_precision_bits() == before);
}
