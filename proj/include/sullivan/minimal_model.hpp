#pragma once

#include "sullivan/presented.hpp"

namespace sullivan {

// Minimal Sullivan model of a presented algebra, built degree by degree:
// at each degree n the construction first adds closed generators until the
// comparison map surjects onto the presented cohomology in degree n, then
// adds degree-n generators whose differentials kill the kernel of the
// comparison map one degree up.  rho records the ambient image of every
// model generator; it is a chain map into the quotient, i.e. rho-of-d and
// d-of-rho agree modulo the relation ideal.
struct MinimalModelResult {
  ModelPtr model;
  ModelPtr ambient;          // the presentation's ambient algebra as a model
  std::vector<Element> rho;  // ambient image of each model generator
  int certified = 0;         // cohomology matches the input through this degree
};

// Throws invalid_argument for degree-1 generators in the presentation (the
// simply connected restriction) and for presentations whose differential
// fails validate_presented.
MinimalModelResult minimal_model_up_to_degree(const PresentedAlgebra& p,
                                              int max_degree);

// Ambient image of a model element under the recorded generator images.
Element rho_image(const MinimalModelResult& r, const Element& e);

}  // namespace sullivan
