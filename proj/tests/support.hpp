#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "mahler/field.hpp"
#include "mahler/heights.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(MAHLER_FIXTURE_DIR) + "/" + name + ".json"; }

inline const mahler::FieldFixture& fixture(const std::string& name) {
  static std::map<std::string, mahler::FieldFixture> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, mahler::load_fixture(fixture_path(name))).first;
  return it->second;
}

inline mahler::Real dec(const char* text) { return mahler::Real(text); }

inline bool near(const mahler::Ball& b, const char* expected, double tol) {
  return boost::multiprecision::abs(b.mid() - dec(expected)) <= tol;
}

inline bool near(const mahler::Ball& a, const mahler::Ball& b, double tol) {
  return boost::multiprecision::abs(a.mid() - b.mid()) <= tol;
}

inline bool vectors_near(const mahler::LogVector& a, const mahler::LogVector& b, double tol) {
  if (a.size() != b.size()) return false;
  for (int w = 0; w < a.size(); ++w) {
    if (!near(a[w], b[w], tol)) return false;
  }
  return true;
}

inline mahler::Rational random_rational(std::mt19937_64& rng, int max_num = 10, int max_den = 5) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return mahler::Rational(num(rng), den(rng));
}

inline std::vector<mahler::Rational> random_coords(std::mt19937_64& rng, size_t n) {
  std::vector<mahler::Rational> c;
  for (size_t i = 0; i < n; ++i) c.push_back(random_rational(rng));
  return c;
}

inline mahler::LogVector random_element(const mahler::FieldFixture& fix, std::mt19937_64& rng) {
  return fix.from_basis(random_coords(rng, fix.s_unit_basis().size()));
}

/// Random element supported on the archimedean places and the given primes.
inline mahler::LogVector random_supported(const mahler::FieldFixture& fix, std::mt19937_64& rng,
                                          const std::vector<unsigned long>& primes) {
  std::vector<mahler::Rational> c(fix.s_unit_basis().size());
  for (size_t i = 0; i < c.size(); ++i) {
    const auto& u = fix.s_unit_basis()[i];
    bool ok = true;
    for (mahler::PlaceId w : fix.finite_places()) {
      const auto p = *fix.place(w).prime;
      if (u.valuations()[static_cast<size_t>(w)] != 0 &&
          std::find(primes.begin(), primes.end(), p) == primes.end()) {
        ok = false;
      }
    }
    if (ok) c[i] = random_rational(rng);
  }
  return fix.from_basis(c);
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {"q", "qsqrt2", "qsqrt2-ext", "qsqrt5", "qbiquad"};
  return names;
}

}  // namespace testing_support
