#pragma once

#include "sullivan/gottlieb.hpp"

namespace sullivan {

// Result of a monomial-wise ideal-membership scan.  On failure `witness`
// names the first place the containment breaks.
struct IdealCheck {
  bool ok = true;
  std::string witness;
};

// After normalization every differential must land in Lambda(V) (x)
// Lambda^{>=2}(Z): each monomial of each d(w) carries at least two Z-factors
// (counted with multiplicity).
IdealCheck check_dw_condition(const NormalizedModel& ns);

// Every positive-degree cocycle through max_degree lies monomial-wise in the
// ideal generated by vprime and z together.
IdealCheck cycles_in_ideal_check(const Model& m, const std::vector<size_t>& vprime,
                                 const std::vector<size_t>& z, int max_degree);

// The total Gottlieb element.  The sphere product Lambda(v'_1..v'_r) carries
// zero differential; phi is built by the recursion
//   phi_s(chi) = phi_{s-1}(chi) + v'_s theta_s(phi_{s-1}(chi)),
// and gamma is phi followed by the projection killing the original
// generators.  gamma kills Z, hits every v'_i triangularly, and induces the
// zero map on positive-degree cohomology exactly when no v_i is a cocycle.
struct TotalGottliebElement {
  ModelPtr sphere_model;       // Lambda(v'), d = 0
  TensorProduct product;       // sphere (x) normalized model
  Morphism phi;                // normalized model -> product model
  Morphism gamma;              // normalized model -> sphere model
  std::vector<size_t> vprime;  // sphere generator ids, parallel to ns.v
};

// Requires ns.conditions_verified and check_dw_condition(ns).ok; the
// constructed map is re-verified generator by generator (DGA map, second
// projection identity, gamma(Z) = 0, triangularity) and any failure throws,
// since the construction is guaranteed once the preconditions hold.
TotalGottliebElement build_phi(const NormalizedModel& ns);

// Product decomposition into odd spheres.  Factors are found greedily in
// increasing degree: an odd-degree cocycle (after a linear-part-preserving
// change making it a generator) whose dual extends to a commuting derivation
// splits off once the remaining differentials are corrected to avoid it.
struct SphereSplitting {
  std::vector<std::pair<std::string, int>> factors;  // name and degree, split order
  ModelPtr sphere_model;  // Lambda(factors), d = 0
  ModelPtr remainder;     // what is left after all splits
  ModelPtr product;       // sphere (x) remainder
  Morphism split;         // original -> product
  Morphism unsplit;       // product -> original, inverse on generators
};

SphereSplitting sphere_split(ModelPtr m);

// Image of the evaluation map in homology: the free algebra on the split
// sphere factors, of total dimension 2^r.
struct HomologyImage {
  size_t factor_count = 0;
  size_t dimension = 1;          // 2^r
  size_t reduced_dimension = 0;  // 2^r - 1
  std::vector<std::string> basis;
  SphereSplitting split;
};

HomologyImage evaluation_homology_image(ModelPtr m);

// Dimensions of the cyclic-map classes from a into the space modelled by a
// model with the given Gottlieb groups: one copy of H^n(a) per Gottlieb
// generator of degree n.  Throws bound_error when a's cohomology is not
// certified through the top Gottlieb degree.
struct CyclicClassification {
  std::map<int, size_t> per_degree;
  size_t total = 0;
};

CyclicClassification cyclic_classification(const Model& a, const GottliebGroups& gx);

// Recognizes the homotopy-monomorphism normal form of f for a declared split
// of its source generators into V (v_part) and W (the rest): f kills W, maps
// V bijectively onto the target generators (up to nonzero scalar), d(W) has
// at least two W-factors in every monomial, and d(V) never has exactly one.
struct GhorbalReport {
  bool ok = true;
  std::vector<std::string> violations;
};

GhorbalReport check_ghorbal_form(const Morphism& f, const std::vector<size_t>& v_part);

}  // namespace sullivan
