#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mahler/field.hpp"
#include "mahler/heights.hpp"
#include "mahler/lp.hpp"

namespace mahler {

/// Archimedean places plus the Galois closure of the support of alpha.
std::vector<PlaceId> build_S(const FieldFixture& fix, const LogVector& alpha);

struct PartCertificate {
  int subfield = 0;  // proper subfield E of the part's field
  Ball part_height;  // h_1(alpha_F)
  Ball quotient;     // distance from alpha_F to V_{E,S}
  bool holds = false;
};

struct DecompositionPart {
  int subfield = 0;
  std::string label;
  int degree = 1;
  LogVector alpha;  // alpha_F, real coordinates
  Ball height;      // h_1(alpha_F)
  Ball weighted;    // [F:Q] * h_1(alpha_F)
  std::optional<std::vector<Rational>> rational_coords;  // when alpha_F is recognised in the basis span
  std::vector<PartCertificate> certificates;
};

struct DecompositionResult {
  Ball total;
  std::vector<DecompositionPart> parts;  // nonzero parts only, by subfield order
  std::vector<PlaceId> s_used;
  Ball h1;
  int delta = 1;
  Ball upper;  // delta * h_1
  bool certificates_hold = true;
  /// "attained" when every part was recognised with rational basis
  /// coordinates, otherwise "unknown".
  std::string attainment;
  Ball reconstruction_error;  // max_w |sum_F alpha_F - alpha|
  int pivots = 0;
};

/// The weighted L1 problem behind extremal_m1, with one variable per
/// (subfield, fiber inside S).
struct ExtremalLp {
  L1Problem<Real> problem;
  std::vector<Ball> rhs;
  std::vector<std::pair<int, int>> variable;  // (subfield index, fiber index)
};
ExtremalLp extremal_problem(const FieldFixture& fix, const LogVector& alpha, const std::vector<PlaceId>& s);

DecompositionResult extremal_m1(const FieldFixture& fix, const LogVector& alpha);
/// As above with a caller-chosen S; if alpha is not supported in S, S is
/// widened by build_S once.
DecompositionResult extremal_m1(const FieldFixture& fix, const LogVector& alpha, std::vector<PlaceId> s);

enum class ClosedForm { surd, pisot_salem };
/// h_1(alpha) for a surd (checked: delta = 1), 2 log(house) for a Pisot/Salem class.
Ball closed_form_check(const FieldFixture& fix, const LogVector& alpha, ClosedForm kind,
                       const std::optional<Ball>& house = std::nullopt);

/// [h_p, delta h_p] bounds on the extremal L^p norm.
std::pair<HeightValue, HeightValue> extremal_bounds(const FieldFixture& fix, const LogVector& alpha, double p);

}  // namespace mahler
