#pragma once

#include "sullivan/algebra.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sullivan {

// A Sullivan model: Lambda(V) with a differential given by its values on
// generators.  Minimality (decomposability of d) is a property checked by
// validate(), not enforced by the type, so invalid inputs can be loaded,
// diagnosed and reported.
struct Model {
  std::string name;
  Algebra alg;
  std::vector<Element> d;  // d[i] = differential of generator i

  const Generator& gen(size_t i) const { return alg.gen(i); }
  size_t size() const { return alg.size(); }
  int bound() const { return alg.bound(); }
};

using ModelPtr = std::shared_ptr<const Model>;

ModelPtr make_model(std::string name, Algebra alg, std::vector<Element> d);

// A degree-k derivation of the model's algebra, given by its values on
// generators (value of generator i lives in degree |v_i| + k).
struct Derivation {
  int degree = 0;
  std::vector<Element> val;
};

int parity_of(int degree);

// Extends a derivation to the whole algebra by the graded Leibniz rule
// theta(x y) = theta(x) y + (-1)^{|theta||x|} x theta(y).
Element apply_derivation(const Model& m, const Derivation& th, const Element& e);

// The differential as the degree +1 derivation d.
Element apply_d(const Model& m, const Element& e);

// theta with d theta = sign * theta d on every generator.
bool derivation_commutes(const Model& m, const Derivation& th, int sign);

struct Violation {
  std::string code;  // stable identifier, e.g. "d-squared"
  std::string detail;
};

struct ValidationReport {
  bool valid = true;
  bool truncated = false;  // some check ran into the degree bound
  std::vector<Violation> violations;
};

// Checks d is degree +1 and homogeneous, decomposable (no linear terms),
// references only earlier generators, and squares to zero.
ValidationReport validate_model(const Model& m);

// A map of models f : src -> dst, given on generators, extended
// multiplicatively.
struct Morphism {
  ModelPtr src;
  ModelPtr dst;
  std::vector<Element> val;  // val[i] in dst, image of src generator i
};

Element apply_morphism(const Morphism& f, const Element& e);
Morphism identity_morphism(ModelPtr m);
Morphism compose(const Morphism& g, const Morphism& f);  // g after f
bool morphism_degree_preserving(const Morphism& f);
bool morphism_commutes_with_d(const Morphism& f);

// Matrix of the induced map on indecomposables Q(f) in degree n: rows indexed
// by dst generators of degree n, columns by src generators of degree n,
// entries the linear-part coefficients.
QMatrix indecomposables_matrix(const Morphism& f, int n);

// Replaces generators by new ones.  Each new generator carries an expression
// in the old model; the linear parts must form an invertible degree-by-degree
// change, which is verified while building the inverse.  The differential and
// name layout transport along.
struct GeneratorSpec {
  std::string name;
  Element value;  // expression in the old model, homogeneous
};

struct GeneratorChange {
  ModelPtr model;      // the new model
  Morphism to_old;     // new -> old, generator i |-> its defining value
  Morphism from_old;   // old -> new, the inverse
};

GeneratorChange change_of_generators(ModelPtr m, const std::vector<GeneratorSpec>& specs);

// theta' = from_old . theta . to_old, the same derivation seen on new
// generators.
Derivation transport_derivation(const GeneratorChange& ch, const Derivation& th);

// Lambda(V (+) W) with the union differential.  Generator names must be
// disjoint.  Returns the product model plus the two inclusions.
struct TensorProduct {
  ModelPtr model;
  Morphism left_inclusion;
  Morphism right_inclusion;
};

TensorProduct tensor_product(ModelPtr a, ModelPtr b, std::string name, int bound);

// The submodel on a subset of generators (d must not leave the subset) with
// its inclusion.
struct Submodel {
  ModelPtr model;
  Morphism inclusion;
};

Submodel submodel_on(ModelPtr m, const std::vector<size_t>& gens, std::string name,
                     int bound);

// Normal form of a map between models with zero differential: new generators
// on both sides such that source = Lambda(V (+) R), target = Lambda(V' (+) S),
// f(v) = v' for v in V, and f(R) lands in the ideal generated by S plus
// decomposables in the image -- concretely f(r) has no linear part and no
// pure-Lambda(V') part.
struct H0NormalForm {
  GeneratorChange source_change;
  GeneratorChange target_change;
  Morphism normalized;          // between the renamed models
  std::vector<size_t> v_part;   // generator ids of V inside the new source
  std::vector<size_t> r_part;   // generator ids of R
  std::vector<size_t> s_part;   // generator ids of S inside the new target
};

H0NormalForm h0_normal_form(const Morphism& f);

}  // namespace sullivan
