#pragma once

#include "sullivan/model.hpp"

namespace sullivan {

// Matrix of d : degree n -> n+1 in the canonical monomial bases.
QMatrix d_matrix(const Model& m, int n);

// Canonical bases (kernel / image conventions from linalg) as elements.
std::vector<Element> cocycle_basis(const Model& m, int n);
std::vector<Element> coboundary_basis(const Model& m, int n);

struct Cohomology {
  int degree = 0;
  std::vector<Element> reps;  // canonical representatives, cocycles
};

Cohomology cohomology(const Model& m, int n);
size_t betti(const Model& m, int n);

// Cocycles in degree n are only certified if d into n+1 is fully visible, so
// the usable range is n <= bound - 1.
int certified_degree(const Model& m);

// Betti numbers for degrees 0..up_to (caller keeps up_to within the certified
// range).
std::vector<size_t> betti_range(const Model& m, int up_to);

// Coordinates of the class [z] in the basis cohomology(m, n).reps.
// Requires z to be a cocycle of degree n.
QVec class_coordinates(const Model& m, int n, const Element& z);

// Matrix of H^n(f) : H^n(src) -> H^n(dst), columns indexed by the source
// classes, rows by the target classes.
QMatrix induced_map_matrix(const Morphism& f, int n);

struct EulerReport {
  long long chi = 0;
  // True when the `window` top certified degrees all vanish, i.e. the
  // alternating sum has visibly stopped moving.  Finite-dimensionality is
  // not decidable from a truncation, so this flag is the honest substitute.
  bool stable = false;
  int window = 3;
  int certified = 0;
  std::vector<size_t> betti;
};

EulerReport euler_characteristic(const Model& m, int window = 3);

}  // namespace sullivan
