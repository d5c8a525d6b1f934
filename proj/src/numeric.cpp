#include "mahler/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "mahler/errors.hpp"

namespace mahler {
namespace {

unsigned g_bits = 0;

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

void ensure_initialized() {
  if (g_bits == 0) set_working_precision_bits(kDefaultPrecisionBits);
}

}  // namespace

unsigned working_precision_bits() {
  ensure_initialized();
  return g_bits;
}

void set_working_precision_bits(unsigned bits) {
  if (bits < 32) throw ValidationError("working precision must be at least 32 bits");
  g_bits = bits;
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_bits_(working_precision_bits()) {
  set_working_precision_bits(bits);
}

PrecisionScope::~PrecisionScope() { set_working_precision_bits(saved_bits_); }

Real unit_roundoff() {
  ensure_initialized();
  Real one(1);
  const long prec = static_cast<long>(mpfr_get_prec(one.backend().data()));
  Real u(1);
  mpfr_mul_2si(u.backend().data(), u.backend().data(), 1 - prec, MPFR_RNDU);
  return u;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw ParseError("empty rational literal");
  const auto slash = s.find('/');
  auto check_int = [&](const std::string& part) {
    size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) throw ParseError("malformed rational '" + std::string(text) + "'");
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) {
        throw ParseError("malformed rational '" + std::string(text) + "'");
      }
    }
  };
  if (slash == std::string::npos) {
    check_int(s);
    return Rational(Integer(s[0] == '+' ? s.substr(1) : s));
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Integer d(den[0] == '+' ? den.substr(1) : den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(Integer(num[0] == '+' ? num.substr(1) : num), d);
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Real to_real(const Rational& q) {
  ensure_initialized();
  return Real(q);
}

double to_double(const Real& x) { return x.convert_to<double>(); }

int significant_digits(std::string_view text) {
  int count = 0;
  bool leading = true;
  for (char c : text) {
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

// -- Ball -------------------------------------------------------------------

Ball::Ball() : mid_(0), rad_(0) { ensure_initialized(); }

Ball::Ball(Real mid, Real rad) : mid_(std::move(mid)), rad_(std::move(rad)) {
  if (rad_ < 0) rad_ = -rad_;
}

Ball::Ball(const Real& exact_mid) : mid_(exact_mid), rad_(0) {}

Ball::Ball(long long value) : mid_(value), rad_(0) { ensure_initialized(); }

Ball Ball::exact(const Rational& q) {
  Ball b(to_real(q), Real(0));
  if (denominator(q) != 1) b.add_rounding();
  return b;
}

Ball Ball::from_interval(const Real& lo, const Real& hi) {
  Ball b((lo + hi) / 2, (hi - lo) / 2);
  b.add_rounding();
  return b;
}

Ball Ball::parse_decimal(std::string_view text) {
  ensure_initialized();
  const std::string s(text);
  size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  int int_digits = 0;
  int frac_digits = 0;
  bool seen_point = false;
  long exponent = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      (seen_point ? frac_digits : int_digits)++;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      try {
        size_t used = 0;
        exponent = std::stol(s.substr(i + 1), &used);
        if (used != s.size() - i - 1) throw ParseError("");
      } catch (const std::exception&) {
        throw ParseError("malformed decimal '" + s + "'");
      }
      break;
    } else {
      throw ParseError("malformed decimal '" + s + "'");
    }
  }
  if (int_digits + frac_digits == 0) throw ParseError("malformed decimal '" + s + "'");
  Real mid(s);
  if (!seen_point && exponent >= 0) return Ball(mid);  // integer literal, exact
  Real rad = boost::multiprecision::pow(Real(10), static_cast<long>(exponent - frac_digits)) / 2;
  Ball b(mid, rad);
  b.add_rounding();
  return b;
}

void Ball::add_rounding() {
  const Real u = unit_roundoff();
  rad_ = rad_ * (1 + 4 * u) + boost::multiprecision::abs(mid_) * u;
}

bool Ball::contains_zero() const { return !(certainly_positive() || certainly_negative()); }
bool Ball::certainly_positive() const { return mid_ - rad_ > 0; }
bool Ball::certainly_negative() const { return mid_ + rad_ < 0; }

std::optional<int> Ball::sign_within(const Real& tol) const {
  if (mid_ - rad_ > tol) return 1;
  if (mid_ + rad_ < -tol) return -1;
  if (boost::multiprecision::abs(mid_) + rad_ <= tol) return 0;
  return std::nullopt;
}

Ball Ball::operator-() const { return Ball(-mid_, rad_); }

Ball& Ball::operator+=(const Ball& o) {
  mid_ += o.mid_;
  rad_ += o.rad_;
  add_rounding();
  return *this;
}

Ball& Ball::operator-=(const Ball& o) {
  mid_ -= o.mid_;
  rad_ += o.rad_;
  add_rounding();
  return *this;
}

Ball& Ball::operator*=(const Ball& o) {
  using boost::multiprecision::abs;
  rad_ = abs(mid_) * o.rad_ + abs(o.mid_) * rad_ + rad_ * o.rad_;
  mid_ *= o.mid_;
  add_rounding();
  return *this;
}

Ball& Ball::operator*=(const Rational& q) {
  if (q == 0) {
    mid_ = 0;
    rad_ = 0;
    return *this;
  }
  const Real qr = to_real(q);
  rad_ *= boost::multiprecision::abs(qr);
  mid_ *= qr;
  add_rounding();
  if (denominator(q) != 1) add_rounding();
  return *this;
}

Ball& Ball::operator/=(const Rational& q) {
  if (q == 0) throw InternalError("Ball division by zero");
  return *this *= Rational(1) / q;
}

std::string Ball::mid_string(int digits) const {
  return mid_.str(digits, std::ios_base::fmtflags(0));
}

std::string Ball::rad_string() const {
  if (rad_ == 0) return "0";
  const double r = std::nextafter(to_double(rad_), HUGE_VAL);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", r * (1 + 1e-2));
  return buf;
}

Ball abs(const Ball& x) {
  if (x.certainly_positive()) return x;
  if (x.certainly_negative()) return -x;
  const Real top = boost::multiprecision::abs(x.mid()) + x.rad();
  return Ball::from_interval(Real(0), top);
}

Ball max(const Ball& a, const Ball& b) {
  using boost::multiprecision::max;
  return Ball::from_interval(max(a.lower(), b.lower()), max(a.upper(), b.upper()));
}

Ball log(const Ball& x) {
  if (!x.certainly_positive()) throw PrecisionError("log of a ball that is not certainly positive");
  Ball r = Ball::from_interval(boost::multiprecision::log(x.lower()), boost::multiprecision::log(x.upper()));
  return r + Ball(Real(0), unit_roundoff() * boost::multiprecision::abs(r.mid()));
}

Ball pow(const Ball& x, const Real& p) {
  using boost::multiprecision::max;
  const Real lo = max(x.lower(), Real(0));
  const Real hi = max(x.upper(), Real(0));
  Ball r = Ball::from_interval(boost::multiprecision::pow(lo, p), boost::multiprecision::pow(hi, p));
  return r + Ball(Real(0), 2 * unit_roundoff() * boost::multiprecision::abs(r.mid()));
}

Ball log_integer(unsigned long p) {
  ensure_initialized();
  const Real v = boost::multiprecision::log(Real(p));
  return Ball(v, boost::multiprecision::abs(v) * unit_roundoff());
}

}  // namespace mahler
