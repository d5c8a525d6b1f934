#include "mahler/field.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mahler/errors.hpp"

namespace mahler {

using nlohmann::json;

// -- Place / Permutation ----------------------------------------------------

std::string Place::over() const { return prime ? std::to_string(*prime) : "INF"; }

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (int v : image_) {
    if (v < 0 || v >= static_cast<int>(image_.size()) || seen[static_cast<size_t>(v)]) {
      throw ValidationError("not a permutation");
    }
    seen[static_cast<size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(static_cast<size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i) {
    if (image_[static_cast<size_t>(i)] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(image_.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<size_t>(image_[static_cast<size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw ValidationError("composing permutations of different sizes");
  std::vector<int> img(static_cast<size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) img[static_cast<size_t>(i)] = a[b[i]];
  return Permutation(std::move(img));
}

int GaloisAction::index_of(const Permutation& p) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), p);
  if (it == elements.end() || *it != p) return -1;
  return static_cast<int>(it - elements.begin());
}

std::vector<Permutation> generate_group(std::span<const Permutation> generators, int n) {
  std::set<Permutation> seen{Permutation::identity(n)};
  std::deque<Permutation> queue{Permutation::identity(n)};
  while (!queue.empty()) {
    Permutation cur = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      Permutation next = g * cur;
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

// -- LogVector --------------------------------------------------------------

LogVector::LogVector(std::vector<Ball> log_abs) : log_abs_(std::move(log_abs)) {}

LogVector::LogVector(std::vector<Ball> log_abs, std::vector<Rational> valuations)
    : log_abs_(std::move(log_abs)), valuations_(std::move(valuations)) {
  if (valuations_->size() != log_abs_.size()) throw ValidationError("valuation vector has wrong length");
}

LogVector LogVector::zero(int places) {
  return LogVector(std::vector<Ball>(static_cast<size_t>(places)),
                   std::vector<Rational>(static_cast<size_t>(places)));
}

const std::vector<Rational>& LogVector::valuations() const {
  if (!valuations_) throw InternalError("log vector carries no exact valuations");
  return *valuations_;
}

void LogVector::drop_exact_data() {
  valuations_.reset();
  basis_coords_.reset();
}

LogVector LogVector::operator-() const {
  LogVector r = *this;
  r *= Rational(-1);
  return r;
}

LogVector& LogVector::operator+=(const LogVector& o) {
  if (o.size() != size()) throw ValidationError("log vectors from different fixtures");
  for (size_t i = 0; i < log_abs_.size(); ++i) log_abs_[i] += o.log_abs_[i];
  if (valuations_ && o.valuations_) {
    for (size_t i = 0; i < valuations_->size(); ++i) (*valuations_)[i] += (*o.valuations_)[i];
  } else {
    valuations_.reset();
  }
  if (basis_coords_ && o.basis_coords_ && basis_coords_->size() == o.basis_coords_->size()) {
    for (size_t i = 0; i < basis_coords_->size(); ++i) (*basis_coords_)[i] += (*o.basis_coords_)[i];
  } else {
    basis_coords_.reset();
  }
  return *this;
}

LogVector& LogVector::operator-=(const LogVector& o) { return *this += -o; }

LogVector& LogVector::operator*=(const Rational& r) {
  for (auto& b : log_abs_) b *= r;
  if (valuations_) {
    for (auto& v : *valuations_) v *= r;
  }
  if (basis_coords_) {
    for (auto& c : *basis_coords_) c *= r;
  }
  return *this;
}

LogVector act(const Permutation& sigma, const LogVector& alpha) {
  if (sigma.size() != alpha.size()) throw ValidationError("Galois element and vector have different place counts");
  std::vector<Ball> out(static_cast<size_t>(alpha.size()));
  for (int w = 0; w < alpha.size(); ++w) out[static_cast<size_t>(sigma[w])] = alpha[w];
  if (!alpha.has_exact_valuations()) return LogVector(std::move(out));
  std::vector<Rational> val(static_cast<size_t>(alpha.size()));
  for (int w = 0; w < alpha.size(); ++w) val[static_cast<size_t>(sigma[w])] = alpha.valuations()[static_cast<size_t>(w)];
  return LogVector(std::move(out), std::move(val));
}

// -- subgroups --------------------------------------------------------------

bool SubfieldDescriptor::contains_element(int element) const {
  return std::binary_search(subgroup.begin(), subgroup.end(), element);
}

bool SubfieldDescriptor::contains(const SubfieldDescriptor& e) const {
  return std::includes(e.subgroup.begin(), e.subgroup.end(), subgroup.begin(), subgroup.end());
}

namespace {

using Mask = std::uint64_t;

std::vector<std::vector<int>> multiplication_table(const GaloisAction& g) {
  const size_t n = g.elements.size();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = g.index_of(g.elements[i] * g.elements[j]);
  }
  return t;
}

Mask close_mask(Mask m, const std::vector<std::vector<int>>& table) {
  const size_t n = table.size();
  m |= 1;  // identity
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < n; ++i) {
      if (!(m >> i & 1)) continue;
      for (size_t j = 0; j < n; ++j) {
        if (!(m >> j & 1)) continue;
        const Mask bit = Mask{1} << table[i][j];
        if (!(m & bit)) {
          m |= bit;
          changed = true;
        }
      }
    }
  }
  return m;
}

std::vector<int> mask_to_list(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < 64; ++i) {
    if (m >> i & 1) out.push_back(i);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> enumerate_subgroups(const GaloisAction& g) {
  if (g.elements.size() > 24) throw ValidationError("subgroup enumeration is limited to groups of order <= 24");
  const auto table = multiplication_table(g);
  std::set<Mask> found;
  for (size_t i = 0; i < g.elements.size(); ++i) found.insert(close_mask(Mask{1} << i, table));
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<Mask> current(found.begin(), found.end());
    for (size_t a = 0; a < current.size(); ++a) {
      for (size_t b = a + 1; b < current.size(); ++b) {
        if (found.insert(close_mask(current[a] | current[b], table)).second) grew = true;
      }
    }
  }
  std::vector<std::vector<int>> out;
  for (Mask m : found) out.push_back(mask_to_list(m));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SubfieldDescriptor> subfield_lattice(const FieldFixture& fix) { return fix.subfields(); }

namespace {

SubfieldDescriptor make_descriptor(const std::vector<Place>& places, const GaloisAction& g,
                                   std::vector<int> subgroup, std::string label) {
  SubfieldDescriptor d;
  d.label = std::move(label);
  std::sort(subgroup.begin(), subgroup.end());
  d.subgroup = std::move(subgroup);
  d.degree = g.group_order / static_cast<int>(d.subgroup.size());
  const int n = static_cast<int>(places.size());
  d.fiber_of.assign(static_cast<size_t>(n), -1);
  for (int w = 0; w < n; ++w) {
    if (d.fiber_of[static_cast<size_t>(w)] >= 0) continue;
    std::set<PlaceId> orbit;
    for (int h : d.subgroup) orbit.insert(g.elements[static_cast<size_t>(h)][w]);
    const int idx = static_cast<int>(d.fibers.size());
    for (PlaceId u : orbit) d.fiber_of[static_cast<size_t>(u)] = idx;
    d.fibers.emplace_back(orbit.begin(), orbit.end());
  }
  std::vector<Rational> fiber_mass;
  for (const auto& f : d.fibers) {
    long mass = 0;
    for (PlaceId w : f) mass += places[static_cast<size_t>(w)].local_degree;
    fiber_mass.emplace_back(mass);
  }
  for (size_t j = 1; j < d.fibers.size(); ++j) {
    std::vector<Rational> v(static_cast<size_t>(n));
    for (PlaceId w : d.fibers[j]) v[static_cast<size_t>(w)] = Rational(1) / fiber_mass[j];
    for (PlaceId w : d.fibers[0]) v[static_cast<size_t>(w)] = Rational(-1) / fiber_mass[0];
    d.w_basis.push_back(std::move(v));
  }
  return d;
}

// JSON access helpers; structural problems are parse errors.
const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return j.at(key);
}

long as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<long>();
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

PlaceId place_key(const std::string& key, int n, const std::string& where) {
  if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError(where + ": place key '" + key + "' is not a place id");
  }
  const int w = std::stoi(key);
  if (w >= n) throw ValidationError(where + ": place id " + key + " out of range");
  return w;
}

}  // namespace

// -- FieldFixture -----------------------------------------------------------

std::vector<PlaceId> FieldFixture::archimedean_places() const { return places_over(std::nullopt); }

std::vector<PlaceId> FieldFixture::finite_places() const {
  std::vector<PlaceId> out;
  for (const auto& p : places_) {
    if (!p.archimedean()) out.push_back(p.id);
  }
  return out;
}

std::vector<unsigned long> FieldFixture::primes() const {
  std::set<unsigned long> ps;
  for (const auto& p : places_) {
    if (p.prime) ps.insert(*p.prime);
  }
  return {ps.begin(), ps.end()};
}

std::vector<PlaceId> FieldFixture::places_over(std::optional<unsigned long> prime) const {
  std::vector<PlaceId> out;
  for (const auto& p : places_) {
    if (p.prime == prime) out.push_back(p.id);
  }
  return out;
}

const Ball& FieldFixture::valuation_scale(PlaceId w) const {
  if (place(w).archimedean()) throw InternalError("valuation scale requested for an archimedean place");
  return valuation_scale_.at(static_cast<size_t>(w));
}

const SubfieldDescriptor& FieldFixture::subfield(std::string_view id) const {
  if (!id.empty() && std::all_of(id.begin(), id.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    const size_t i = std::stoul(std::string(id));
    if (i < subfields_.size()) return subfields_[i];
  }
  for (const auto& s : subfields_) {
    if (s.label == id) return s;
  }
  throw ValidationError("unknown subfield '" + std::string(id) + "'");
}

LogVector FieldFixture::from_valuations(std::vector<Rational> valuations, const std::vector<Ball>& arch) const {
  const size_t n = places_.size();
  if (valuations.size() != n || arch.size() != n) throw ValidationError("vector length does not match place count");
  std::vector<Ball> logs(n);
  for (size_t w = 0; w < n; ++w) {
    if (places_[w].archimedean()) {
      if (valuations[w] != 0) throw ValidationError("valuation given at archimedean place " + std::to_string(w));
      logs[w] = arch[w];
    } else {
      logs[w] = -(valuation_scale_[w] * valuations[w]);
    }
  }
  return LogVector(std::move(logs), std::move(valuations));
}

LogVector FieldFixture::from_basis(std::span<const Rational> coords) const {
  if (coords.size() != basis_.size()) {
    throw ValidationError("expected " + std::to_string(basis_.size()) + " basis coordinates, got " +
                          std::to_string(coords.size()));
  }
  LogVector out = LogVector::zero(place_count());
  for (size_t j = 0; j < coords.size(); ++j) {
    if (coords[j] != 0) out += basis_[j] * coords[j];
  }
  out.set_basis_coords(std::vector<Rational>(coords.begin(), coords.end()));
  return out;
}

LogVector FieldFixture::element(std::string_view text) const {
  if (auto it = elements_.find(std::string(text)); it != elements_.end()) return from_basis(it->second.coords);
  std::vector<Rational> coords;
  std::string s(text);
  std::stringstream ss(s);
  std::string tok;
  try {
    while (std::getline(ss, tok, ',')) coords.push_back(parse_rational(tok));
  } catch (const ParseError&) {
    throw ValidationError("unknown element '" + s + "'");
  }
  if (coords.size() != basis_.size()) throw ValidationError("unknown element '" + s + "'");
  return from_basis(coords);
}

Ball FieldFixture::product_formula_defect(const LogVector& alpha) const {
  Ball sum;
  for (const auto& p : places_) sum += alpha[p.id] * Rational(p.local_degree);
  return sum;
}

namespace {

// Row-reduces `m` in place and returns the rank; entries below
// threshold * (largest entry) count as zero.
int row_reduce_rank(std::vector<std::vector<Real>> m, const Real& rel_threshold) {
  if (m.empty()) return 0;
  const size_t rows = m.size();
  const size_t cols = m[0].size();
  Real scale(0);
  for (const auto& r : m) {
    for (const auto& x : r) scale = boost::multiprecision::max(scale, Real(boost::multiprecision::abs(x)));
  }
  if (scale == 0) return 0;
  const Real threshold = rel_threshold * scale;
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t best = rank;
    for (size_t r = rank + 1; r < rows; ++r) {
      if (boost::multiprecision::abs(m[r][c]) > boost::multiprecision::abs(m[best][c])) best = r;
    }
    if (boost::multiprecision::abs(m[best][c]) <= threshold) continue;
    std::swap(m[best], m[rank]);
    for (size_t r = rank + 1; r < rows; ++r) {
      const Real f = m[r][c] / m[rank][c];
      for (size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// Solves the square system a x = b by Gaussian elimination with partial pivoting.
std::vector<Real> solve_dense(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const size_t n = b.size();
  for (size_t c = 0; c < n; ++c) {
    size_t best = c;
    for (size_t r = c + 1; r < n; ++r) {
      if (boost::multiprecision::abs(a[r][c]) > boost::multiprecision::abs(a[best][c])) best = r;
    }
    if (a[best][c] == 0) throw InternalError("singular system");
    std::swap(a[best], a[c]);
    std::swap(b[best], b[c]);
    for (size_t r = c + 1; r < n; ++r) {
      const Real f = a[r][c] / a[c][c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Real> x(n);
  for (size_t i = n; i-- > 0;) {
    Real acc = b[i];
    for (size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

std::optional<Rational> rationalize(const Real& x, long max_den) {
  // continued-fraction convergents
  Integer h_prev(1), h(0), k_prev(0), k(1);
  Real rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    Real fl = boost::multiprecision::floor(rem);
    const Integer a(fl.convert_to<Integer>());
    Integer h_next = a * h_prev + h;
    Integer k_next = a * k_prev + k;
    if (k_next > max_den) break;
    h = h_prev;
    k = k_prev;
    h_prev = h_next;
    k_prev = k_next;
    const Real frac = rem - fl;
    if (boost::multiprecision::abs(frac) < Real("1e-40")) break;
    rem = 1 / frac;
  }
  if (k_prev == 0) return std::nullopt;
  return Rational(h_prev, k_prev);
}

}  // namespace

int FieldFixture::s_unit_rank() const {
  std::vector<std::vector<Real>> m;
  for (const auto& u : basis_) {
    std::vector<Real> row;
    for (const auto& b : u.log_abs()) row.push_back(b.mid());
    m.push_back(std::move(row));
  }
  return row_reduce_rank(std::move(m), Real("1e-30"));
}

std::optional<std::vector<Rational>> FieldFixture::recognize(const LogVector& alpha, long max_den) const {
  const size_t r = basis_.size();
  if (r == 0) return std::nullopt;
  std::vector<std::vector<Real>> gram(r, std::vector<Real>(r));
  std::vector<Real> rhs(r);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < r; ++j) {
      Real acc(0);
      for (int w = 0; w < place_count(); ++w) acc += basis_[i][w].mid() * basis_[j][w].mid();
      gram[i][j] = acc;
    }
    Real acc(0);
    for (int w = 0; w < place_count(); ++w) acc += basis_[i][w].mid() * alpha[w].mid();
    rhs[i] = acc;
  }
  const auto x = solve_dense(std::move(gram), std::move(rhs));
  std::vector<Rational> coords;
  for (const auto& xi : x) {
    auto q = rationalize(xi, max_den);
    if (!q) return std::nullopt;
    coords.push_back(*q);
  }
  const LogVector back = from_basis(coords);
  const Real tol(options_.tolerance);
  for (int w = 0; w < place_count(); ++w) {
    if ((back[w] - alpha[w]).sign_within(tol) != 0) return std::nullopt;
  }
  return coords;
}

FieldFixture FieldFixture::with_precision(unsigned bits) const {
  LoadOptions o = options_;
  o.precision_bits = bits;
  return parse_fixture(source_, o);
}

// -- loading ----------------------------------------------------------------

namespace {

struct VectorParse {
  LogVector vec;
  std::string label;
};

VectorParse parse_log_vector(const FieldFixture& fix, const std::vector<Ball>& scales, const json& j,
                             const std::string& where, int min_digits) {
  (void)scales;
  const int n = fix.place_count();
  std::vector<Rational> val(static_cast<size_t>(n));
  std::vector<Ball> arch(static_cast<size_t>(n));
  if (j.contains("fin")) {
    const auto& fin = j.at("fin");
    if (!fin.is_object()) throw ParseError(where + ".fin: expected an object");
    for (const auto& [key, v] : fin.items()) {
      const PlaceId w = place_key(key, n, where + ".fin");
      if (fix.place(w).archimedean()) {
        throw ValidationError(where + ": finite valuation given at archimedean place " + key);
      }
      val[static_cast<size_t>(w)] = parse_rational(as_string(v, where + ".fin." + key));
    }
  }
  if (j.contains("arch")) {
    const auto& ar = j.at("arch");
    if (!ar.is_object()) throw ParseError(where + ".arch: expected an object");
    for (const auto& [key, v] : ar.items()) {
      const PlaceId w = place_key(key, n, where + ".arch");
      if (!fix.place(w).archimedean()) {
        throw ValidationError(where + ": archimedean log given at finite place " + key);
      }
      const std::string text = as_string(v, where + ".arch." + key);
      Ball b = Ball::parse_decimal(text);
      if (b.rad() != 0 && significant_digits(text) < min_digits) {
        throw PrecisionError(where + ": archimedean log at place " + key + " has only " +
                             std::to_string(significant_digits(text)) + " significant digits (need " +
                             std::to_string(min_digits) + ")");
      }
      arch[static_cast<size_t>(w)] = std::move(b);
    }
  }
  std::string label = j.contains("label") ? as_string(j.at("label"), where + ".label") : std::string();
  return {fix.from_valuations(std::move(val), arch), std::move(label)};
}

void check_product_formula(const FieldFixture& fix, const LogVector& v, const std::string& where) {
  const Ball defect = fix.product_formula_defect(v);
  const Real tol(fix.tolerance());
  if (defect.rad() > tol) {
    throw PrecisionError(where + ": archimedean error bounds too wide to certify the product formula");
  }
  const auto s = defect.sign_within(tol);
  if (!s || *s != 0) {
    throw ValidationError(where + ": violates the product formula (sum d_w log||.||_w = " + defect.mid_string(6) + ")");
  }
}

}  // namespace

FieldFixture parse_fixture(std::string_view json_text, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("fixture is not valid JSON: ") + e.what());
  }
  set_working_precision_bits(options.precision_bits);

  FieldFixture fix;
  fix.source_ = std::string(json_text);
  fix.options_ = options;
  fix.label_ = as_string(field(doc, "label", "fixture"), "label");
  fix.degree_ = static_cast<int>(as_int(field(doc, "degree", "fixture"), "degree"));
  if (fix.degree_ < 1) throw ValidationError("degree must be positive");

  // places
  const auto& jplaces = field(doc, "places", "fixture");
  if (!jplaces.is_array() || jplaces.empty()) throw ParseError("places: expected a non-empty array");
  for (size_t i = 0; i < jplaces.size(); ++i) {
    const std::string where = "places[" + std::to_string(i) + "]";
    const auto& jp = jplaces[i];
    Place p;
    p.id = static_cast<PlaceId>(as_int(field(jp, "id", where), where + ".id"));
    if (p.id != static_cast<int>(i)) throw ValidationError(where + ": place ids must be 0..n-1 in order");
    const auto& over = field(jp, "over", where);
    if (over.is_string()) {
      if (over.get<std::string>() != "INF") throw ParseError(where + ".over: expected INF or a prime");
    } else {
      const long q = as_int(over, where + ".over");
      if (q < 2 || !is_prime(static_cast<unsigned long>(q))) {
        throw ValidationError("place " + std::to_string(p.id) + ": " + std::to_string(q) + " is not prime");
      }
      p.prime = static_cast<unsigned long>(q);
    }
    p.local_degree = static_cast<int>(as_int(field(jp, "local_degree", where), where + ".local_degree"));
    p.ram_index = jp.contains("ram_index") ? static_cast<int>(as_int(jp.at("ram_index"), where + ".ram_index")) : 1;
    if (p.local_degree < 1 || p.ram_index < 1) {
      throw ValidationError("place " + std::to_string(p.id) + ": local degree and ramification index must be positive");
    }
    if (p.archimedean() && (p.ram_index != 1 || p.local_degree > 2)) {
      throw ValidationError("place " + std::to_string(p.id) + ": archimedean places have d in {1,2} and e = 1");
    }
    if (!p.archimedean() && p.local_degree % p.ram_index != 0) {
      throw ValidationError("place " + std::to_string(p.id) + ": ramification index must divide the local degree");
    }
    fix.places_.push_back(p);
  }
  const int n = fix.place_count();
  if (fix.archimedean_places().empty()) throw ValidationError("fixture has no archimedean place");
  {
    std::map<std::optional<unsigned long>, int> mass;
    for (const auto& p : fix.places_) mass[p.prime] += p.local_degree;
    for (const auto& [prime, m] : mass) {
      if (m != fix.degree_) {
        throw ValidationError("local degrees over " + (prime ? std::to_string(*prime) : std::string("INF")) +
                              " sum to " + std::to_string(m) + ", expected " + std::to_string(fix.degree_));
      }
    }
  }
  for (PlaceId w = 0; w < n; ++w) {
    const Place& p = fix.places_[static_cast<size_t>(w)];
    fix.valuation_scale_.push_back(p.archimedean() ? Ball() : log_integer(*p.prime) / Rational(p.ram_index));
  }

  // Galois action
  const auto& jg = field(doc, "galois", "fixture");
  fix.galois_.group_order = static_cast<int>(as_int(field(jg, "group_order", "galois"), "galois.group_order"));
  const auto& jgens = field(jg, "generators", "galois");
  if (!jgens.is_array()) throw ParseError("galois.generators: expected an array");
  for (size_t i = 0; i < jgens.size(); ++i) {
    const std::string where = "galois.generators[" + std::to_string(i) + "]";
    std::vector<int> img;
    if (!jgens[i].is_array()) throw ParseError(where + ": expected an array");
    for (const auto& x : jgens[i]) img.push_back(static_cast<int>(as_int(x, where)));
    if (static_cast<int>(img.size()) != n) throw ValidationError(where + ": permutation must act on all " + std::to_string(n) + " places");
    Permutation perm = [&] {
      try {
        return Permutation(img);
      } catch (const ValidationError&) {
        throw ValidationError(where + ": not a permutation of place ids");
      }
    }();
    for (PlaceId w = 0; w < n; ++w) {
      const Place& a = fix.places_[static_cast<size_t>(w)];
      const Place& b = fix.places_[static_cast<size_t>(perm[w])];
      if (a.prime != b.prime || a.local_degree != b.local_degree || a.ram_index != b.ram_index) {
        throw ValidationError(where + ": sends place " + std::to_string(w) + " to place " + std::to_string(perm[w]) +
                              " which lies over a different prime or has different local data");
      }
    }
    fix.galois_.generators.push_back(std::move(perm));
  }
  fix.galois_.elements = generate_group(fix.galois_.generators, n);
  if (static_cast<int>(fix.galois_.elements.size()) != fix.galois_.group_order ||
      fix.galois_.group_order != fix.degree_) {
    throw ValidationError("Galois generators produce " + std::to_string(fix.galois_.elements.size()) +
                          " elements; group_order is " + std::to_string(fix.galois_.group_order) + " and degree " +
                          std::to_string(fix.degree_));
  }
  for (const auto& prime : [&] {
         auto ps = std::vector<std::optional<unsigned long>>{std::nullopt};
         for (auto p : fix.primes()) ps.emplace_back(p);
         return ps;
       }()) {
    const auto fiber = fix.places_over(prime);
    std::set<PlaceId> orbit;
    for (const auto& g : fix.galois_.elements) orbit.insert(g[fiber.front()]);
    if (orbit.size() != fiber.size()) {
      throw ValidationError("Galois action is not transitive on the places over " +
                            (prime ? std::to_string(*prime) : std::string("INF")));
    }
  }

  // subgroups / subfields
  const auto& jsub = field(doc, "subgroups", "fixture");
  if (!jsub.is_array()) throw ParseError("subgroups: expected an array");
  std::set<std::vector<int>> seen;
  for (size_t i = 0; i < jsub.size(); ++i) {
    const std::string where = "subgroups[" + std::to_string(i) + "]";
    const auto& js = jsub[i];
    std::vector<Permutation> gens;
    for (const auto& jp : field(js, "generators", where)) {
      std::vector<int> img;
      for (const auto& x : jp) img.push_back(static_cast<int>(as_int(x, where)));
      if (static_cast<int>(img.size()) != n) throw ValidationError(where + ": generator has wrong length");
      Permutation perm(img);
      if (fix.galois_.index_of(perm) < 0) throw ValidationError(where + ": generator is not in the Galois group");
      gens.push_back(std::move(perm));
    }
    std::vector<int> members;
    for (const auto& e : generate_group(gens, n)) members.push_back(fix.galois_.index_of(e));
    std::sort(members.begin(), members.end());
    if (!seen.insert(members).second) throw ValidationError(where + ": duplicate subgroup");
    std::string label = js.contains("label") ? as_string(js.at("label"), where + ".label") : "F" + std::to_string(i);
    fix.subfields_.push_back(make_descriptor(fix.places_, fix.galois_, std::move(members), std::move(label)));
  }
  if (fix.galois_.elements.size() <= 24) {
    const auto all = enumerate_subgroups(fix.galois_);
    if (all.size() != seen.size()) {
      throw ValidationError("subgroup list has " + std::to_string(seen.size()) + " entries but the Galois group has " +
                            std::to_string(all.size()) + " subgroups");
    }
  } else {
    if (!seen.count({0})) throw ValidationError("subgroup list lacks the trivial subgroup");
  }
  std::stable_sort(fix.subfields_.begin(), fix.subfields_.end(),
                   [](const auto& a, const auto& b) { return a.degree < b.degree; });
  for (size_t i = 0; i < fix.subfields_.size(); ++i) fix.subfields_[i].index = static_cast<int>(i);
  if (fix.subfields_.front().degree != 1 || fix.subfields_.back().degree != fix.degree_) {
    throw ValidationError("subgroup list must contain the whole group and the trivial subgroup");
  }

  // S-unit basis
  const auto& jbasis = field(doc, "s_unit_basis", "fixture");
  if (!jbasis.is_array()) throw ParseError("s_unit_basis: expected an array");
  for (size_t i = 0; i < jbasis.size(); ++i) {
    const std::string where = "s_unit_basis[" + std::to_string(i) + "]";
    auto parsed = parse_log_vector(fix, fix.valuation_scale_, jbasis[i], where, options.min_significant_digits);
    check_product_formula(fix, parsed.vec, where);
    fix.basis_.push_back(std::move(parsed.vec));
    fix.basis_labels_.push_back(parsed.label.empty() ? "u" + std::to_string(i) : parsed.label);
  }
  const int rank = fix.s_unit_rank();
  if (rank != static_cast<int>(fix.basis_.size())) {
    throw ValidationError("s_unit_basis vectors are linearly dependent (rank " + std::to_string(rank) + " of " +
                          std::to_string(fix.basis_.size()) + ")");
  }
  if (rank != n - 1) {
    throw ValidationError("s_unit_basis has rank " + std::to_string(rank) + " but the fixture has " +
                          std::to_string(n) + " places (expected rank " + std::to_string(n - 1) + ")");
  }

  // prime generators
  const auto& jpg = field(doc, "prime_generators", "fixture");
  fix.class_number_ = static_cast<int>(as_int(field(jpg, "class_number", "prime_generators"), "class_number"));
  if (fix.class_number_ < 1) throw ValidationError("class number must be positive");
  const auto& jgen = field(jpg, "generators", "prime_generators");
  if (!jgen.is_object()) throw ParseError("prime_generators.generators: expected an object");
  for (const auto& [key, jv] : jgen.items()) {
    const PlaceId v = place_key(key, n, "prime_generators");
    const std::string where = "prime_generators[" + key + "]";
    if (fix.place(v).archimedean()) throw ValidationError(where + ": generator given for an archimedean place");
    auto parsed = parse_log_vector(fix, fix.valuation_scale_, jv, where, options.min_significant_digits);
    check_product_formula(fix, parsed.vec, where);
    const auto& val = parsed.vec.valuations();
    for (PlaceId w = 0; w < n; ++w) {
      if (w != v && val[static_cast<size_t>(w)] != 0) {
        throw ValidationError(where + ": finite support must be exactly {" + key + "}, found place " + std::to_string(w));
      }
    }
    if (val[static_cast<size_t>(v)] != fix.class_number_) {
      throw ValidationError(where + ": valuation at its place must equal the class number h = " +
                            std::to_string(fix.class_number_));
    }
    fix.prime_generators_.emplace(v, std::move(parsed.vec));
  }
  for (PlaceId v : fix.finite_places()) {
    if (!fix.prime_generators_.count(v)) {
      throw ValidationError("prime_generators: missing generator for finite place " + std::to_string(v));
    }
  }

  // named elements
  if (doc.contains("elements")) {
    for (const auto& [name, je] : doc.at("elements").items()) {
      const std::string where = "elements." + name;
      ElementAlias alias;
      for (const auto& c : field(je, "coords", where)) alias.coords.push_back(parse_rational(as_string(c, where)));
      if (alias.coords.size() != fix.basis_.size()) {
        throw ValidationError(where + ": expected " + std::to_string(fix.basis_.size()) + " coordinates");
      }
      if (je.contains("pisot_salem_house")) {
        alias.pisot_salem_house = as_string(je.at("pisot_salem_house"), where + ".pisot_salem_house");
        const Ball house = Ball::parse_decimal(*alias.pisot_salem_house);
        if (!(house.lower() > 1)) throw ValidationError(where + ": house of a Pisot/Salem number must exceed 1");
      }
      fix.elements_.emplace(name, std::move(alias));
    }
  }
  return fix;
}

FieldFixture load_fixture(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fixture '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str(), options);
}

}  // namespace mahler
