#pragma once

#include <map>
#include <vector>

#include "mahler/field.hpp"

namespace mahler {

/// P_F: average of act(sigma, alpha) over the subgroup H of F.
LogVector proj_field(const FieldFixture& fix, const SubfieldDescriptor& f, const LogVector& alpha);

/// True when alpha is constant on every fiber of F (to tolerance).
bool in_subfield_span(const FieldFixture& fix, const SubfieldDescriptor& f, const LogVector& alpha);

/// The subfield whose subgroup is the stabilizer of place v.
const SubfieldDescriptor& decomposition_field(const FieldFixture& fix, PlaceId v);

struct AlphaVSystem {
  std::map<PlaceId, LogVector> alpha;
  std::map<unsigned long, PlaceId> representative;  // prime -> least place id over it
  std::map<PlaceId, int> spread_by;                 // place -> element sending the representative to it
  std::map<PlaceId, bool> unit_adjusted;            // representative -> unit correction applied
};

/// alpha_v for every finite place of the fixture.
AlphaVSystem build_alpha_v_system(const FieldFixture& fix);
LogVector alpha_v(const FieldFixture& fix, PlaceId v);

/// n_v(alpha) = ord_v(alpha) / ord_v(alpha_v), exact.
Rational n_v(const AlphaVSystem& sys, const LogVector& alpha, PlaceId v);

/// alpha * prod_{v not in S} alpha_v^{-n_v(alpha)}.  Requires exact valuations.
LogVector proj_sunits(const FieldFixture& fix, const std::vector<PlaceId>& s, const AlphaVSystem& sys,
                      const LogVector& alpha);

}  // namespace mahler
