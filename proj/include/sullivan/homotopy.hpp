#pragma once

#include "sullivan/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sullivan {

// Cylinder on a model (Lambda V, d): the algebra Lambda(V + Vbar + V') with
// d(vbar) = v', d(v') = 0, |vbar| = |v| - 1, |v'| = |v|, together with the
// degree -1 contraction s(v) = vbar, s(vbar) = s(v') = 0.  The cylinder's
// algebra bound is one above the base bound so that the d-then-s chains used
// by the exponential never truncate.  Requires all base generators to have
// degree >= 2 (a degree-1 generator would need a degree-0 bar).
struct Cylinder {
  ModelPtr base;
  ModelPtr model;
  Morphism include;  // base -> cylinder, v |-> v
  Derivation s;      // on the cylinder
  // Base generator id -> cylinder generator id of v, vbar, v'.
  std::vector<size_t> orig, bar, prime;
};

Cylinder make_cylinder(const ModelPtr& m);

// (sd)^r(v) in the cylinder for r = 1, 2, ...; stops at the first zero.  The
// list is finite: every sd application adds one barred-or-primed factor of
// positive degree to each surviving monomial, so r never exceeds |v|.
std::vector<Element> sd_iterates(const Cylinder& cyl, size_t base_gen);

// E(v) = v + d(vbar) + sum_{r>=1} (1/r!) (sd)^r(v), with exact rational
// factorials.  Extended multiplicatively this is a morphism base -> cylinder
// commuting with the differentials (exp_morphism packages that).
Element exp_sd_ds(const Cylinder& cyl, size_t base_gen);
Morphism exp_morphism(const Cylinder& cyl);

// A homotopy between phi0, phi1 : M -> A is, equivalently, a dga map H from
// the cylinder of M to A restricting to phi0 on V; H is determined by the
// images H(vbar), since H(v') = d_A H(vbar) is forced.  The certificate
// stores exactly those images, one per source generator.
struct HomotopyCertificate {
  Morphism phi0, phi1;
  std::vector<Element> bar_image;  // bar_image[i]: value in A of degree |v_i| - 1
};

// Checks the certificate identity
//   phi1(v) = phi0(v) + d_A H(vbar) + sum_{r>=1} (1/r!) H((sd)^r(v))
// exactly for every generator, after checking that phi0 and phi1 are honest
// morphisms and the bar images are homogeneous of the right degree.
bool verify_homotopy(const HomotopyCertificate& c, std::string* why = nullptr);

struct HomotopySearchOptions {
  // Values tried for each free parameter when a nonlinear bar product forces
  // instantiation; order is the search order.
  std::vector<Q> grid{Q(-1), Q(0), Q(1)};
  // Budget of failed grid branches before the search gives up.
  size_t max_backtrack = 1024;
  // Refuse to enumerate a grid over more than this many free parameters.
  size_t max_parameters = 12;
};

struct HomotopyObstruction {
  int degree = 0;
  std::string generator;  // source generator whose identity failed ("" = none)
  std::string description;
};

struct HomotopyResult {
  bool homotopic = false;
  // True when the answer is proven either way: a verified certificate, a
  // cohomology-level difference, or an unsolvable identity reached without
  // any grid instantiation (the parameters range over all of Q there, so
  // inconsistency of the linear system is a proof).  A failed grid search is
  // NOT definitive and says so.
  bool definitive = false;
  std::optional<HomotopyCertificate> certificate;
  std::optional<HomotopyObstruction> obstruction;
};

// Decides phi0 ~ phi1 where possible.  Pipeline: induced-cohomology
// pre-filter (differences are definitive), then a degree-by-degree solve of
// the certificate identity carrying the unknown bar images as affine
// families with exact rational parameters; parameters stay symbolic while
// they enter later identities linearly and are pinned by the accumulated
// linear system.  A product of two parameter-carrying bars makes the system
// nonlinear; then the free parameters are instantiated over opts.grid with
// backtracking, and failure is reported as non-definitive.  Successful
// certificates are re-verified before being returned.
HomotopyResult find_homotopy(const Morphism& phi0, const Morphism& phi1,
                             const HomotopySearchOptions& opts = {});

}  // namespace sullivan
