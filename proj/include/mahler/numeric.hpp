#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace mahler {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 200;
inline constexpr double kDefaultTolerance = 1e-12;

// MPFR precision is process-wide in boost.multiprecision; every library entry
// point that builds Reals runs at whatever precision is current.
unsigned working_precision_bits();
void set_working_precision_bits(unsigned bits);

/// RAII guard that switches the working precision and restores it on exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_bits_;
};

/// Unit roundoff 2^(1-bits) at the current working precision.
Real unit_roundoff();

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Real to_real(const Rational& q);
double to_double(const Real& x);

/// Number of significant decimal digits in a plain decimal literal.
int significant_digits(std::string_view text);

/// A certified real: the true value lies in [mid - rad, mid + rad].
///
/// Every arithmetic operation widens the radius by the propagated input error
/// plus one rounding error of the result, so a Ball built from exact data or
/// from decimal literals stays a valid enclosure through a chain of
/// operations at the current working precision.
class Ball {
 public:
  Ball();
  Ball(Real mid, Real rad);  // NOLINT
  explicit Ball(const Real& exact_mid);
  explicit Ball(long long value);

  static Ball exact(const Rational& q);
  static Ball from_interval(const Real& lo, const Real& hi);
  /// Parses a decimal literal; the radius covers half a unit in the last
  /// written digit plus the conversion rounding.
  static Ball parse_decimal(std::string_view text);

  const Real& mid() const { return mid_; }
  const Real& rad() const { return rad_; }
  Real lower() const { return mid_ - rad_; }
  Real upper() const { return mid_ + rad_; }

  bool contains_zero() const;
  bool certainly_positive() const;
  bool certainly_negative() const;
  /// -1/0/+1 when the sign is decided with |x| > tol or |x| <= tol certainly,
  /// std::nullopt when the enclosure straddles the tolerance band.
  std::optional<int> sign_within(const Real& tol) const;

  Ball operator-() const;
  Ball& operator+=(const Ball& o);
  Ball& operator-=(const Ball& o);
  Ball& operator*=(const Ball& o);
  Ball& operator*=(const Rational& q);
  Ball& operator/=(const Rational& q);

  friend Ball operator+(Ball a, const Ball& b) { return a += b; }
  friend Ball operator-(Ball a, const Ball& b) { return a -= b; }
  friend Ball operator*(Ball a, const Ball& b) { return a *= b; }
  friend Ball operator*(Ball a, const Rational& q) { return a *= q; }
  friend Ball operator*(const Rational& q, Ball a) { return a *= q; }
  friend Ball operator/(Ball a, const Rational& q) { return a /= q; }

  /// Decimal rendering of the midpoint with `digits` significant digits.
  std::string mid_string(int digits = 20) const;
  /// Radius rounded up, in scientific notation.
  std::string rad_string() const;

 private:
  void add_rounding();

  Real mid_;
  Real rad_;
};

Ball abs(const Ball& x);
Ball max(const Ball& a, const Ball& b);
/// log of a ball that is certainly positive; throws PrecisionError otherwise.
Ball log(const Ball& x);
/// x^p for real p > 0, with x clamped at 0 from below.
Ball pow(const Ball& x, const Real& p);
/// log p for a positive integer p, correctly rounded at working precision.
Ball log_integer(unsigned long p);

}  // namespace mahler
