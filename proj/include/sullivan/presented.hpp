#pragma once

#include "sullivan/linalg.hpp"
#include "sullivan/model.hpp"

#include <string>
#include <vector>

namespace sullivan {

// A finitely presented graded-commutative differential algebra: the free
// algebra on the listed generators, modulo the ideal spanned by the
// relations, with a differential given on generators.  Every question asked
// of it is homogeneous, so degreewise linear algebra over the monomial
// basis of the ambient free algebra replaces any need for Groebner bases.
struct PresentedAlgebra {
  std::string name;
  Algebra alg;               // ambient free algebra
  std::vector<Element> rel;  // homogeneous ideal generators, degree >= 2
  std::vector<Element> d;    // differential on generators, ambient values
};

// Checks shape only (homogeneity, degrees); the mathematical conditions
// d(ideal) ⊆ ideal and d² = 0 live in validate_presented so callers can
// report them with context instead of catching exceptions.
PresentedAlgebra make_presented(std::string name, Algebra alg,
                                std::vector<Element> rel,
                                std::vector<Element> d = {});

// The same presentation over an ambient rebuilt with the given bound.
PresentedAlgebra with_bound(const PresentedAlgebra& p, int bound);

// The ambient algebra as a (not necessarily minimal) model, carrying the
// presentation's differential.
ModelPtr ambient_model(const PresentedAlgebra& p);

// Spanning set of the degree-n slice of the relation ideal.
std::vector<Element> ideal_slice(const PresentedAlgebra& p, int n);

// Degree-n slice of the quotient: ambient monomial basis, reduced rows
// spanning the ideal, and the non-pivot columns that serve as coset
// representatives.  All further quotient arithmetic reduces onto rep_cols.
struct QuotientSlice {
  int degree = 0;
  std::vector<Monomial> ambient;
  std::vector<QVec> ideal_rref;      // rref rows spanning the ideal slice
  std::vector<size_t> ideal_pivots;  // pivot column of each row
  std::vector<size_t> rep_cols;      // ambient columns representing the quotient
};

QuotientSlice quotient_slice(const PresentedAlgebra& p, int n);

// Coordinates of e's class in the rep_cols basis of the slice.
QVec reduce_mod_ideal(const QuotientSlice& s, const Element& e);

// The canonical ambient representative with the given rep_cols coordinates.
Element slice_element(const QuotientSlice& s, const QVec& coords);

size_t quotient_dim(const PresentedAlgebra& p, int n);

// Matrix of the induced differential from one slice to the next, acting on
// rep_cols coordinates.  Requires to.degree == from.degree + 1.
QMatrix quotient_d_matrix(const PresentedAlgebra& p, const QuotientSlice& from,
                          const QuotientSlice& to);

// Cohomology of the quotient complex in degree n, with ambient
// representatives of a class basis.  Throws bound_error when the ambient
// bound cannot certify degree n + 1.
struct PresentedCohomology {
  int degree = 0;
  std::vector<Element> reps;
};

PresentedCohomology presented_cohomology(const PresentedAlgebra& p, int n);
size_t presented_betti(const PresentedAlgebra& p, int n);

struct PresentedValidation {
  bool valid = true;
  std::vector<std::string> problems;
};

// Mathematical soundness of the presentation: the differential must raise
// degree by one, send every relation into the ideal (so it descends to the
// quotient), and square to zero in the quotient.
PresentedValidation validate_presented(const PresentedAlgebra& p);

}  // namespace sullivan
