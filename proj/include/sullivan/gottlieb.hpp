#pragma once

#include "sullivan/cohomology.hpp"

#include <map>

namespace sullivan {

// Canonical basis of the space of degree -n derivations theta with
// d theta = (-1)^n theta d.  Coordinates are ordered functional-block first
// (the scalar values on degree-n generators), so the reduced basis separates
// derivations with nonzero functional part from the rest.
std::vector<Derivation> derivation_space(const Model& m, int n);

// One rationalized Gottlieb element in triangular normal form: a commuting
// derivation that is dual to a single degree-n generator.
struct GottliebElement {
  int degree = 0;
  size_t pivot = 0;  // generator id with theta(v_pivot) = 1
  Derivation theta;
};

struct GottliebGroups {
  std::map<int, size_t> dim;           // degree -> dim G_n, for 1..bound
  std::vector<GottliebElement> basis;  // ordered by (degree, pivot)
};

GottliebGroups gottlieb_groups(const Model& m);

// Even degrees with nonzero Gottlieb group.  For a certified-finite
// cohomology these must all vanish; a nonempty answer on a stable model is a
// genuine counterexample (i.e. a bug).
std::vector<int> even_gottlieb_degrees(const GottliebGroups& g);

// Splits the generators as V (Gottlieb pivots, in basis order) + Z (common
// kernel of the functionals), then substitutes z |-> z - sum v_j * mu to push
// every theta value into the ideal generated by Z.  The substitution loop
// converges under the standing hypotheses (odd-only Gottlieb with finite
// certified cohomology); when they fail, `conditions_verified` stays false
// and `failure` says which condition broke.
struct NormalizedModel {
  ModelPtr original;
  GeneratorChange change;        // composite original -> normalized
  std::vector<size_t> v;         // normalized generator ids, Gottlieb order
  std::vector<size_t> z;         // normalized generator ids, ascending
  std::vector<Derivation> theta; // transported, parallel to v
  bool conditions_verified = false;
  std::string failure;
};

NormalizedModel normalize_gottlieb(ModelPtr m);
NormalizedModel normalize_gottlieb(ModelPtr m, const std::vector<GottliebElement>& basis);

// The normalization postconditions on their own: theta_i(v_j) = delta_ij
// within equal degrees, theta_i(v_j) for j > i in the ideal (Z), and
// theta_i(Z) in the ideal (Z).
bool verify_normalization(const Model& m, const std::vector<size_t>& v,
                          const std::vector<size_t>& z,
                          const std::vector<Derivation>& theta, std::string* why);

}  // namespace sullivan
