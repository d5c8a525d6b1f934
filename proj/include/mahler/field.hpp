#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mahler/numeric.hpp"

namespace mahler {

using PlaceId = int;

struct Place {
  PlaceId id = 0;
  std::optional<unsigned long> prime;  // empty for archimedean places
  int local_degree = 1;                // d_w = [K_w : Q_w]
  int ram_index = 1;                   // e_w, 1 for archimedean places

  bool archimedean() const { return !prime.has_value(); }
  /// "INF" or the decimal prime.
  std::string over() const;
};

/// A permutation of place ids; image[w] is the place w is sent to.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(image_.size()); }
  int operator[](int i) const { return image_[static_cast<size_t>(i)]; }
  const std::vector<int>& image() const { return image_; }
  bool is_identity() const;

  Permutation inverse() const;
  /// (a * b)(w) = a(b(w)).
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

/// The Galois group of a fixture field, acting on its places.
struct GaloisAction {
  int group_order = 1;
  std::vector<Permutation> generators;
  /// Closure of the generators, sorted; elements[0] is the identity.
  std::vector<Permutation> elements;

  int index_of(const Permutation& p) const;  // -1 when absent
};

/// An element of V_{K,S} (or its real completion) stored as the vector of
/// log absolute values log||alpha||_w, one entry per fixture place.
///
/// When the element comes from K^x itself (rather than the completion) the
/// exact valuations ord_w are carried alongside, so that finite-place
/// comparisons never go through floating point.  Linear operations keep the
/// exact data whenever both operands have it and the scalar is rational.
class LogVector {
 public:
  LogVector() = default;
  explicit LogVector(std::vector<Ball> log_abs);
  LogVector(std::vector<Ball> log_abs, std::vector<Rational> valuations);

  static LogVector zero(int places);

  int size() const { return static_cast<int>(log_abs_.size()); }
  const Ball& operator[](PlaceId w) const { return log_abs_[static_cast<size_t>(w)]; }
  const std::vector<Ball>& log_abs() const { return log_abs_; }

  bool has_exact_valuations() const { return valuations_.has_value(); }
  /// ord_w at finite places (0 at archimedean ones); requires has_exact_valuations().
  const std::vector<Rational>& valuations() const;

  const std::optional<std::vector<Rational>>& basis_coords() const { return basis_coords_; }
  void set_basis_coords(std::vector<Rational> coords) { basis_coords_ = std::move(coords); }
  void drop_exact_data();

  LogVector operator-() const;
  LogVector& operator+=(const LogVector& o);
  LogVector& operator-=(const LogVector& o);
  LogVector& operator*=(const Rational& r);

  friend LogVector operator+(LogVector a, const LogVector& b) { return a += b; }
  friend LogVector operator-(LogVector a, const LogVector& b) { return a -= b; }
  friend LogVector operator*(LogVector a, const Rational& r) { return a *= r; }
  friend LogVector operator*(const Rational& r, LogVector a) { return a *= r; }

 private:
  std::vector<Ball> log_abs_;
  std::optional<std::vector<Rational>> valuations_;
  std::optional<std::vector<Rational>> basis_coords_;
};

/// A subfield F of the fixture field, identified with its subgroup H = Gal(K/F).
struct SubfieldDescriptor {
  int index = 0;  // position in the lattice order
  std::string label;
  std::vector<int> subgroup;  // indices into GaloisAction::elements, sorted
  int degree = 1;             // [F:Q] = |Gamma| / |H|
  std::vector<std::vector<PlaceId>> fibers;  // H-orbits on places, each sorted
  std::vector<int> fiber_of;                 // place id -> fiber index
  /// Basis of W_F = {x constant on fibers, sum_w d_w x_w = 0}, as place vectors.
  std::vector<std::vector<Rational>> w_basis;

  bool contains_element(int element) const;
  /// True when E is a subfield of this field (H_this is contained in H_E).
  bool contains(const SubfieldDescriptor& e) const;
};

/// A named fixture element, given by coordinates over the S-unit basis.
struct ElementAlias {
  std::vector<Rational> coords;
  std::optional<std::string> pisot_salem_house;  // decimal, when the class is Pisot/Salem
};

struct LoadOptions {
  unsigned precision_bits = kDefaultPrecisionBits;
  double tolerance = kDefaultTolerance;
  int min_significant_digits = 40;
};

/// A Galois number field K together with the finite set of places the
/// fixture covers, its Galois action, subfield lattice and S-unit basis.
class FieldFixture {
 public:
  const std::string& label() const { return label_; }
  int degree() const { return degree_; }
  int place_count() const { return static_cast<int>(places_.size()); }
  const std::vector<Place>& places() const { return places_; }
  const Place& place(PlaceId w) const { return places_.at(static_cast<size_t>(w)); }
  const GaloisAction& galois() const { return galois_; }
  /// All subfields, ordered by degree (Q first, K last).
  const std::vector<SubfieldDescriptor>& subfields() const { return subfields_; }
  const SubfieldDescriptor& subfield(std::string_view id) const;  // index or label
  const SubfieldDescriptor& rationals() const { return subfields_.front(); }
  const SubfieldDescriptor& top() const { return subfields_.back(); }

  const std::vector<LogVector>& s_unit_basis() const { return basis_; }
  const std::vector<std::string>& basis_labels() const { return basis_labels_; }
  int class_number() const { return class_number_; }
  /// Generator of P_v^h for each finite place v.
  const std::map<PlaceId, LogVector>& prime_generators() const { return prime_generators_; }
  const std::map<std::string, ElementAlias>& elements() const { return elements_; }

  unsigned precision_bits() const { return options_.precision_bits; }
  double tolerance() const { return options_.tolerance; }
  const LoadOptions& options() const { return options_; }

  std::vector<PlaceId> archimedean_places() const;
  std::vector<PlaceId> finite_places() const;
  std::vector<unsigned long> primes() const;
  std::vector<PlaceId> places_over(std::optional<unsigned long> prime) const;

  /// log p / e_w, so that log||alpha||_w = -ord_w(alpha) * valuation_scale(w).
  const Ball& valuation_scale(PlaceId w) const;

  /// Builds an element of V_K from exact valuations and archimedean logs.
  LogVector from_valuations(std::vector<Rational> valuations, const std::vector<Ball>& arch) const;
  LogVector from_basis(std::span<const Rational> coords) const;
  /// Resolves a named element or a comma-separated basis coordinate vector.
  LogVector element(std::string_view text) const;

  /// Product-formula defect sum_w d_w log||alpha||_w.
  Ball product_formula_defect(const LogVector& alpha) const;
  /// Numerical rank of the S-unit basis.
  int s_unit_rank() const;
  /// Rational basis coordinates of alpha with denominators <= max_den, if it
  /// lies in the Q-span of the basis to within tolerance.
  std::optional<std::vector<Rational>> recognize(const LogVector& alpha, long max_den = 1000000) const;

  /// Reloads the fixture from its source text at a different precision.
  FieldFixture with_precision(unsigned bits) const;

 private:
  friend FieldFixture parse_fixture(std::string_view, const LoadOptions&);

  std::string source_;
  LoadOptions options_;
  std::string label_;
  int degree_ = 1;
  std::vector<Place> places_;
  GaloisAction galois_;
  std::vector<SubfieldDescriptor> subfields_;
  std::vector<LogVector> basis_;
  std::vector<std::string> basis_labels_;
  int class_number_ = 1;
  std::map<PlaceId, LogVector> prime_generators_;
  std::map<std::string, ElementAlias> elements_;
  std::vector<Ball> valuation_scale_;
};

FieldFixture parse_fixture(std::string_view json_text, const LoadOptions& options = {});
FieldFixture load_fixture(const std::filesystem::path& path, const LoadOptions& options = {});

/// Galois action on log vectors: coordinate w of the result is coordinate
/// sigma^{-1}(w) of alpha.
LogVector act(const Permutation& sigma, const LogVector& alpha);

/// One descriptor per subgroup of Gamma, ordered by degree.
std::vector<SubfieldDescriptor> subfield_lattice(const FieldFixture& fix);

/// Brute-force enumeration of all subgroups (as sorted element-index lists)
/// of a group of order at most 24.
std::vector<std::vector<int>> enumerate_subgroups(const GaloisAction& g);

/// Closure of a set of permutations under composition.
std::vector<Permutation> generate_group(std::span<const Permutation> generators, int n);

}  // namespace mahler
