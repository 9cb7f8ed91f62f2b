#include "doctest.h"

#include "sullivan/cohomology.hpp"
#include "sullivan/errors.hpp"
#include "sullivan/minimal_model.hpp"

#include <string>

using namespace sullivan;

namespace {

// Q[a]/(a^k) as a presentation with zero differential.
PresentedAlgebra truncated_polynomial(uint32_t k, int bound) {
  Algebra alg = Algebra::make({{"a", 2}}, bound);
  Element rel = el_pow(alg, el_gen(0), k);
  return make_presented("P", std::move(alg), {rel});
}

// Two degree-3 classes with vanishing product: the cohomology of a wedge of
// two 3-spheres.
PresentedAlgebra wedge_cohomology(int bound) {
  Algebra alg = Algebra::make({{"x", 3}, {"y", 3}}, bound);
  Element rel = mul(alg, el_gen(0), el_gen(1));
  return make_presented("W", std::move(alg), {rel});
}

// Free cdga Lambda(a2, b3; db = a^2) presented with no relations.
PresentedAlgebra sphere_cdga(int bound) {
  Algebra alg = Algebra::make({{"a", 2}, {"b", 3}}, bound);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), 2);
  return make_presented("S", std::move(alg), {}, std::move(d));
}

const Generator& gen_named(const Model& m, const std::string& name) {
  auto id = m.alg.find(name);
  REQUIRE(id);
  return m.alg.gen(*id);
}

}  // namespace

TEST_CASE("quotient slices of a truncated polynomial algebra") {
  PresentedAlgebra p = truncated_polynomial(3, 10);
  CHECK(quotient_dim(p, 0) == 1);
  CHECK(quotient_dim(p, 2) == 1);
  CHECK(quotient_dim(p, 4) == 1);
  CHECK(quotient_dim(p, 6) == 0);  // a^3 spans the whole slice
  CHECK(quotient_dim(p, 8) == 0);
  CHECK(quotient_dim(p, 3) == 0);

  QuotientSlice s4 = quotient_slice(p, 4);
  QVec r = reduce_mod_ideal(s4, el_pow(p.alg, el_gen(0), 2));
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 1);
  CHECK(slice_element(s4, r) == el_pow(p.alg, el_gen(0), 2));

  // With zero differential the Betti numbers are the quotient dimensions.
  CHECK(presented_betti(p, 0) == 1);
  CHECK(presented_betti(p, 2) == 1);
  CHECK(presented_betti(p, 4) == 1);
  CHECK(presented_betti(p, 6) == 0);
}

TEST_CASE("presented cohomology sees the differential") {
  PresentedAlgebra p = sphere_cdga(10);
  // Lambda(a2, b3; db = a^2) is the 2-sphere: classes in degrees 0 and 2.
  CHECK(presented_betti(p, 0) == 1);
  CHECK(presented_betti(p, 2) == 1);
  CHECK(presented_betti(p, 3) == 0);
  CHECK(presented_betti(p, 4) == 0);  // a^2 = d(b) is exact
  CHECK(presented_betti(p, 5) == 0);
  CHECK(presented_betti(p, 6) == 0);  // a^3 = d(ab)
}

TEST_CASE("presentation validation catches unstable ideals and d squared") {
  // d(ab) = a^3 is not inside the ideal generated by ab.
  Algebra alg = Algebra::make({{"a", 2}, {"b", 3}}, 10);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), 2);
  Element rel = mul(alg, el_gen(0), el_gen(1));
  PresentedAlgebra bad = make_presented("bad", alg, {rel}, d);
  PresentedValidation v = validate_presented(bad);
  CHECK(!v.valid);
  REQUIRE(!v.problems.empty());
  CHECK(v.problems[0].find("relation 0") != std::string::npos);

  // d(a) = b, d(b) = a^2 does not square to zero.
  std::vector<Element> d2(2);
  d2[0] = el_gen(1);
  d2[1] = el_pow(alg, el_gen(0), 2);
  PresentedAlgebra nds = make_presented("nds", alg, {}, d2);
  PresentedValidation v2 = validate_presented(nds);
  CHECK(!v2.valid);
  REQUIRE(!v2.problems.empty());
  CHECK(v2.problems[0].find("d(d(a))") != std::string::npos);

  PresentedValidation ok = validate_presented(sphere_cdga(10));
  CHECK(ok.valid);
}

TEST_CASE("make_presented rejects malformed input") {
  Algebra alg = Algebra::make({{"a", 2}, {"b", 3}}, 10);
  // Mixed-degree relation.
  Element mixed = add(el_gen(0), el_pow(alg, el_gen(0), 2));
  CHECK_THROWS_AS(make_presented("P", alg, {mixed}), std::invalid_argument);
  CHECK_THROWS_AS(make_presented("P", alg, {el_zero()}), std::invalid_argument);
  // Differential of the wrong degree.
  std::vector<Element> d(2);
  d[0] = el_gen(1);  // fine: |b| = |a| + 1
  d[1] = el_gen(0);  // wrong: |a| = 2, need 4
  CHECK_THROWS_AS(make_presented("P", alg, {}, d), std::invalid_argument);
}

TEST_CASE("minimal model of the 2-sphere cohomology") {
  PresentedAlgebra p = truncated_polynomial(2, 10);
  MinimalModelResult r = minimal_model_up_to_degree(p, 7);
  const Model& m = *r.model;
  REQUIRE(m.size() == 2);
  CHECK(gen_named(m, "a").degree == 2);
  CHECK(gen_named(m, "v3_0").degree == 3);
  CHECK(m.d[0].is_zero());
  CHECK(m.d[1] == el_pow(m.alg, el_gen(0), 2));
  CHECK(validate_model(m).valid);
  for (int n = 0; n <= 7; ++n) CHECK(betti(m, n) == presented_betti(p, n));
}

TEST_CASE("minimal model of the complex projective plane cohomology") {
  PresentedAlgebra p = truncated_polynomial(3, 10);
  MinimalModelResult r = minimal_model_up_to_degree(p, 7);
  const Model& m = *r.model;
  REQUIRE(m.size() == 2);
  CHECK(gen_named(m, "a").degree == 2);
  CHECK(gen_named(m, "v5_0").degree == 5);
  CHECK(m.d[1] == el_pow(m.alg, el_gen(0), 3));
  CHECK(validate_model(m).valid);
  for (int n = 0; n <= 7; ++n) CHECK(betti(m, n) == presented_betti(p, n));
  // The comparison map sends the degree-2 generator to a itself.
  CHECK(r.rho[0] == el_gen(0));
}

TEST_CASE("minimal model of a wedge of two 3-spheres through degree 8") {
  PresentedAlgebra p = wedge_cohomology(12);
  MinimalModelResult r = minimal_model_up_to_degree(p, 8);
  const Model& m = *r.model;
  REQUIRE(m.size() == 5);
  CHECK(gen_named(m, "x").degree == 3);
  CHECK(gen_named(m, "y").degree == 3);
  CHECK(gen_named(m, "v5_0").degree == 5);
  CHECK(gen_named(m, "v7_0").degree == 7);
  CHECK(gen_named(m, "v7_1").degree == 7);
  // dw = xy, then the degree-7 generators kill the classes xw and yw.
  CHECK(m.d[2] == mul(m.alg, el_gen(0), el_gen(1)));
  CHECK(m.d[3] == mul(m.alg, el_gen(0), el_gen(2)));
  CHECK(m.d[4] == mul(m.alg, el_gen(1), el_gen(2)));
  CHECK(validate_model(m).valid);
  for (int n = 0; n <= 8; ++n) CHECK(betti(m, n) == presented_betti(p, n));
}

TEST_CASE("minimal model construction handles a nonzero differential") {
  PresentedAlgebra p = sphere_cdga(10);
  MinimalModelResult r = minimal_model_up_to_degree(p, 6);
  const Model& m = *r.model;
  REQUIRE(m.size() == 2);
  CHECK(gen_named(m, "a").degree == 2);
  CHECK(gen_named(m, "v3_0").degree == 3);
  CHECK(m.d[1] == el_pow(m.alg, el_gen(0), 2));
  // rho finds the honest primitive: the new generator maps to b.
  CHECK(r.rho[1] == el_gen(1));
  for (int n = 0; n <= 6; ++n) CHECK(betti(m, n) == presented_betti(p, n));
}

TEST_CASE("comparison map is a chain map into the quotient") {
  for (PresentedAlgebra p :
       {truncated_polynomial(2, 10), truncated_polynomial(3, 10),
        wedge_cohomology(12), sphere_cdga(10)}) {
    int N = 7;
    MinimalModelResult r = minimal_model_up_to_degree(p, N);
    PresentedAlgebra q = with_bound(p, N + 2);
    for (size_t i = 0; i < r.model->size(); ++i) {
      int deg = r.model->alg.gen(i).degree + 1;
      Element lhs = rho_image(r, r.model->d[i]);
      Element rhs = apply_d(*r.ambient, r.rho[i]);
      Element diff = sub(lhs, rhs);
      if (diff.is_zero()) continue;
      QVec red = reduce_mod_ideal(quotient_slice(q, deg), diff);
      bool zero = true;
      for (const Q& c : red) zero = zero && c == 0;
      CHECK(zero);
    }
  }
}

TEST_CASE("minimal model construction rejects degree-1 generators") {
  Algebra alg = Algebra::make({{"e", 1}, {"a", 2}}, 8);
  PresentedAlgebra p = make_presented("P", std::move(alg), {});
  CHECK_THROWS_AS(minimal_model_up_to_degree(p, 4), std::invalid_argument);
}
