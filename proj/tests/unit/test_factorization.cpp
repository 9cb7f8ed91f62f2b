#include "doctest.h"

#include "sullivan/errors.hpp"
#include "sullivan/factorization.hpp"

#include <algorithm>

using namespace sullivan;

namespace {
ModelPtr sphere2() {
  Algebra alg = Algebra::make({{"a", 2}, {"b", 3}}, 12);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), 2);
  return make_model("S2", std::move(alg), std::move(d));
}

ModelPtr sphere3() {
  Algebra alg = Algebra::make({{"x", 3}}, 12);
  return make_model("S3", std::move(alg), {el_zero()});
}

ModelPtr cp2() {
  Algebra alg = Algebra::make({{"x", 2}, {"y", 5}}, 12);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), 3);
  return make_model("CP2", std::move(alg), std::move(d));
}

ModelPtr cp3() {
  Algebra alg = Algebra::make({{"x", 2}, {"y", 7}}, 14);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), 4);
  return make_model("CP3", std::move(alg), std::move(d));
}

ModelPtr b_abc() {
  Algebra alg = Algebra::make({{"a", 3}, {"b", 3}, {"c", 5}}, 15);
  std::vector<Element> d(3);
  d[2] = mul(alg, el_gen(0), el_gen(1));
  return make_model("B", std::move(alg), std::move(d));
}

ModelPtr product_s3_s5(bool reversed = false) {
  auto decl = reversed ? std::vector<std::pair<std::string, int>>{{"y", 5}, {"x", 3}}
                       : std::vector<std::pair<std::string, int>>{{"x", 3}, {"y", 5}};
  return make_model("S3xS5", Algebra::make(decl, 12), {el_zero(), el_zero()});
}

ModelPtr product_s3_cp2() {
  Algebra alg = Algebra::make({{"u", 3}, {"x", 2}, {"y", 5}}, 12);
  std::vector<Element> d(3);
  d[*alg.find("y")] = el_pow(alg, el_gen(static_cast<uint32_t>(*alg.find("x"))), 3);
  return make_model("S3xCP2", std::move(alg), std::move(d));
}

ModelPtr five_odd() {
  Algebra alg =
      Algebra::make({{"b", 3}, {"y", 3}, {"v1", 3}, {"v2", 5}, {"v3", 7}}, 25);
  return make_model("E", std::move(alg), std::vector<Element>(5));
}

ModelPtr wedge_s3_s9() {
  Algebra alg = Algebra::make({{"b", 3}, {"u1", 9}, {"u2", 11}, {"u3", 13}}, 14);
  std::vector<Element> d(4);
  d[2] = mul(alg, el_gen(0), el_gen(1));
  d[3] = mul(alg, el_gen(0), el_gen(2));
  return make_model("S3vS9", std::move(alg), std::move(d));
}

// d(w) = x a^3 forces the correction w' = w + x c before x can split off:
// theta(w) = -c is pinned by commutation, exactly the primitive of a^3.
ModelPtr correction_model() {
  Algebra alg = Algebra::make({{"a", 2}, {"x", 3}, {"c", 5}, {"w", 8}}, 16);
  std::vector<Element> d(4);
  size_t a = *alg.find("a"), x = *alg.find("x");
  d[*alg.find("c")] = el_pow(alg, el_gen(static_cast<uint32_t>(a)), 3);
  d[*alg.find("w")] = mul(alg, el_gen(static_cast<uint32_t>(x)),
                          el_pow(alg, el_gen(static_cast<uint32_t>(a)), 3));
  return make_model("Mcorr", std::move(alg), std::move(d));
}

// No generator is a cocycle in degree 5, but c - v is: the splitting has to
// change basis before it can pull the sphere factor out.
ModelPtr exposure_model() {
  Algebra alg = Algebra::make({{"a", 2}, {"c", 5}, {"v", 5}}, 12);
  std::vector<Element> d(3);
  Element a3 = el_pow(alg, el_gen(0), 3);
  d[1] = a3;
  d[2] = a3;
  return make_model("Mexp", std::move(alg), std::move(d));
}

std::vector<int> factor_degrees(const SphereSplitting& s) {
  std::vector<int> out;
  for (const auto& [nm, deg] : s.factors) out.push_back(deg);
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

TEST_CASE("differential condition after normalization") {
  for (ModelPtr m : {sphere2(), cp2(), product_s3_s5(), five_odd(), b_abc()}) {
    NormalizedModel ns = normalize_gottlieb(m);
    REQUIRE(ns.conditions_verified);
    IdealCheck dw = check_dw_condition(ns);
    CHECK(dw.ok);
    CHECK(dw.witness.empty());
  }
}

TEST_CASE("positive cocycles stay inside the expected ideal") {
  ModelPtr s2 = sphere2();
  CHECK(cycles_in_ideal_check(*s2, {}, {0}, 11).ok);  // ideal (a)

  ModelPtr t = product_s3_s5();
  CHECK(cycles_in_ideal_check(*t, {0, 1}, {}, 11).ok);

  ModelPtr p = cp2();
  CHECK(cycles_in_ideal_check(*p, {}, {0}, 11).ok);  // ideal (x)

  // Dropping y from the ideal leaves the cocycle y exposed.
  IdealCheck bad = cycles_in_ideal_check(*t, {0}, {}, 11);
  CHECK(!bad.ok);
  CHECK(bad.witness.find("degree-5") != std::string::npos);

  CHECK_THROWS_AS(cycles_in_ideal_check(*s2, {}, {0}, 12), bound_error);
}

TEST_CASE("total Gottlieb element of the 2-sphere") {
  ModelPtr m = sphere2();
  NormalizedModel ns = normalize_gottlieb(m);
  REQUIRE(ns.conditions_verified);
  TotalGottliebElement tg = build_phi(ns);

  const Model& nm = *ns.change.model;
  size_t a = *nm.alg.find("a"), b = *nm.alg.find("b");
  REQUIRE(tg.sphere_model->size() == 1);
  CHECK(tg.sphere_model->gen(tg.vprime[0]).name == "b'");
  CHECK(tg.sphere_model->gen(tg.vprime[0]).degree == 3);

  // gamma: a |-> 0, b |-> b'
  CHECK(tg.gamma.val[a].is_zero());
  CHECK(tg.gamma.val[b] == el_gen(static_cast<uint32_t>(tg.vprime[0])));

  // phi: a |-> a, b |-> b + b'
  Element a_t = apply_morphism(tg.product.right_inclusion, el_gen(static_cast<uint32_t>(a)));
  Element b_t = apply_morphism(tg.product.right_inclusion, el_gen(static_cast<uint32_t>(b)));
  Element bp_t = apply_morphism(tg.product.left_inclusion,
                                el_gen(static_cast<uint32_t>(tg.vprime[0])));
  CHECK(tg.phi.val[a] == a_t);
  CHECK(tg.phi.val[b] == add(b_t, bp_t));
  CHECK(morphism_commutes_with_d(tg.phi));

  // The evaluation map is zero on positive-degree cohomology here: the
  // Gottlieb generator is not a cocycle.
  for (int n = 1; n <= 11; ++n) {
    QMatrix h = induced_map_matrix(tg.gamma, n);
    for (size_t i = 0; i < h.rows(); ++i)
      for (size_t j = 0; j < h.cols(); ++j) CHECK(h.at(i, j) == 0);
  }
}

TEST_CASE("total Gottlieb element: an odd sphere maps by the identity") {
  NormalizedModel ns = normalize_gottlieb(sphere3());
  REQUIRE(ns.conditions_verified);
  TotalGottliebElement tg = build_phi(ns);
  REQUIRE(ns.v.size() == 1);
  CHECK(ns.z.empty());
  CHECK(tg.gamma.val[ns.v[0]] == el_gen(static_cast<uint32_t>(tg.vprime[0])));
  // x |-> x' is an isomorphism, so the induced map on H^3 is nonzero.
  CHECK(rank(induced_map_matrix(tg.gamma, 3)) == 1);
}

TEST_CASE("total Gottlieb element with several generators lands triangularly") {
  NormalizedModel ns = normalize_gottlieb(five_odd());
  REQUIRE(ns.conditions_verified);
  TotalGottliebElement tg = build_phi(ns);
  for (size_t i = 0; i < ns.v.size(); ++i)
    CHECK(tg.gamma.val[ns.v[i]] == el_gen(static_cast<uint32_t>(tg.vprime[i])));

  NormalizedModel nc = normalize_gottlieb(cp2());
  REQUIRE(nc.conditions_verified);
  TotalGottliebElement tc = build_phi(nc);
  CHECK(tc.gamma.val[nc.v[0]] == el_gen(static_cast<uint32_t>(tc.vprime[0])));
  CHECK(tc.gamma.val[nc.z[0]].is_zero());
  for (int n = 1; n <= 11; ++n) CHECK(rank(induced_map_matrix(tc.gamma, n)) == 0);
}

TEST_CASE("sphere splitting of zero-differential products") {
  SphereSplitting s = sphere_split(product_s3_s5());
  CHECK(factor_degrees(s) == std::vector<int>{3, 5});
  CHECK(s.remainder->size() == 0);

  // Declaration order does not change the factor multiset.
  SphereSplitting rev = sphere_split(product_s3_s5(true));
  CHECK(factor_degrees(rev) == std::vector<int>{3, 5});

  SphereSplitting e = sphere_split(five_odd());
  CHECK(factor_degrees(e) == std::vector<int>{3, 3, 3, 5, 7});
  CHECK(e.remainder->size() == 0);
}

TEST_CASE("sphere splitting peels one factor off a mixed product") {
  SphereSplitting s = sphere_split(product_s3_cp2());
  CHECK(factor_degrees(s) == std::vector<int>{3});
  REQUIRE(s.remainder->size() == 2);
  CHECK(betti_range(*s.remainder, 5) == std::vector<size_t>{1, 0, 1, 0, 1, 0});
}

TEST_CASE("models with chi != 0 or non-cocycle Gottlieb generators do not split") {
  for (ModelPtr m : {cp2(), cp3(), b_abc(), wedge_s3_s9()}) {
    SphereSplitting s = sphere_split(m);
    CHECK(s.factors.empty());
    CHECK(s.remainder->size() == m->size());
  }
}

TEST_CASE("splitting corrects differentials that mention the factor") {
  ModelPtr m = correction_model();
  REQUIRE(validate_model(*m).valid);

  // theta(w) = -c is forced: the canonical degree-3 Gottlieb basis pins it.
  // (The non-cocycle c and the top generator w also carry classes; only x
  // is a splittable cocycle.)
  GottliebGroups g = gottlieb_groups(*m);
  REQUIRE(!g.basis.empty());
  REQUIRE(g.basis[0].degree == 3);
  CHECK(m->gen(g.basis[0].pivot).name == "x");
  CHECK(g.basis[0].theta.val[*m->alg.find("w")] ==
        scale(Q(-1), el_gen(static_cast<uint32_t>(*m->alg.find("c")))));

  SphereSplitting s = sphere_split(m);
  CHECK(factor_degrees(s) == std::vector<int>{3});
  REQUIRE(s.remainder->size() == 3);
  // In the remainder, w was replaced by the cocycle w + x c.
  size_t w = *s.remainder->alg.find("w");
  CHECK(s.remainder->d[w].is_zero());
  size_t c = *s.remainder->alg.find("c");
  CHECK(s.remainder->d[c] ==
        el_pow(s.remainder->alg, el_gen(static_cast<uint32_t>(*s.remainder->alg.find("a"))), 3));
}

TEST_CASE("splitting exposes a cocycle hidden in a generator difference") {
  ModelPtr m = exposure_model();
  REQUIRE(validate_model(*m).valid);

  SphereSplitting s = sphere_split(m);
  CHECK(factor_degrees(s) == std::vector<int>{5});
  REQUIRE(s.remainder->size() == 2);
  CHECK(betti_range(*s.remainder, 5) == std::vector<size_t>{1, 0, 1, 0, 1, 0});

  // The factor generator kept the name "c" but now denotes c - v.
  size_t c_t = *s.product->alg.find("c");
  CHECK(s.unsplit.val[c_t] == sub(el_gen(static_cast<uint32_t>(*m->alg.find("c"))),
                                  el_gen(static_cast<uint32_t>(*m->alg.find("v")))));
}

TEST_CASE("evaluation image in homology follows the 2^r law") {
  HomologyImage two = evaluation_homology_image(product_s3_s5());
  CHECK(two.factor_count == 2);
  CHECK(two.dimension == 4);
  CHECK(two.reduced_dimension == 3);
  CHECK(two.basis.size() == 4);
  CHECK(two.basis[0] == "1");

  HomologyImage one = evaluation_homology_image(product_s3_cp2());
  CHECK(one.factor_count == 1);
  CHECK(one.dimension == 2);

  HomologyImage none = evaluation_homology_image(cp2());
  CHECK(none.factor_count == 0);
  CHECK(none.dimension == 1);
  CHECK(none.reduced_dimension == 0);

  HomologyImage c3 = evaluation_homology_image(cp3());
  CHECK(c3.reduced_dimension == 0);

  HomologyImage e = evaluation_homology_image(five_odd());
  CHECK(e.dimension == 32);

  // Choice independence: permuted declaration order, same dimension.
  CHECK(evaluation_homology_image(product_s3_s5(true)).dimension == 4);
}

TEST_CASE("cyclic map classification dimensions") {
  GottliebGroups gs2 = gottlieb_groups(*sphere2());

  CyclicClassification hopf = cyclic_classification(*sphere3(), gs2);
  CHECK(hopf.total == 1);
  CHECK(hopf.per_degree.at(3) == 1);

  // Even-degree-only cohomology kills every class.
  CHECK(cyclic_classification(*cp2(), gs2).total == 0);
  CHECK(cyclic_classification(*cp3(), gottlieb_groups(*product_s3_s5())).total == 0);

  ModelPtr pt = make_model("pt", Algebra::make({}, 1), {});
  CHECK(cyclic_classification(*pt, gs2).total == 0);

  CyclicClassification self = cyclic_classification(*product_s3_s5(),
                                                    gottlieb_groups(*product_s3_s5()));
  CHECK(self.total == 2);

  // The source cohomology must be certified through the Gottlieb degrees.
  Algebra small = Algebra::make({{"a", 2}, {"b", 3}}, 3);
  std::vector<Element> d(2);
  d[1] = el_pow(small, el_gen(0), 2);
  ModelPtr tight = make_model("tight", std::move(small), std::move(d));
  CHECK_THROWS_AS(cyclic_classification(*tight, gs2), bound_error);
}

TEST_CASE("homotopy monomorphism normal form recognition") {
  // The total Gottlieb element is always in the recognized form.
  for (ModelPtr m : {sphere2(), cp2(), b_abc(), product_s3_s5(), five_odd()}) {
    NormalizedModel ns = normalize_gottlieb(m);
    REQUIRE(ns.conditions_verified);
    TotalGottliebElement tg = build_phi(ns);
    GhorbalReport rep = check_ghorbal_form(tg.gamma, ns.v);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
  }

  // Identity with W empty.
  ModelPtr b = b_abc();
  std::vector<size_t> all{0, 1, 2};
  CHECK(check_ghorbal_form(identity_morphism(b), all).ok);

  // u |-> x1 x2 cannot be brought into the form: with V empty the map must
  // kill everything, but it does not.
  Algebra s6 = Algebra::make({{"u", 6}, {"v", 11}}, 12);
  std::vector<Element> d6(2);
  d6[1] = el_pow(s6, el_gen(0), 2);
  ModelPtr ms6 = make_model("S6", std::move(s6), std::move(d6));
  ModelPtr t = make_model("S3xS3", Algebra::make({{"x1", 3}, {"x2", 3}}, 12),
                          {el_zero(), el_zero()});
  Morphism q{ms6, t, {mul(t->alg, el_gen(0), el_gen(1)), el_zero()}};
  REQUIRE(morphism_commutes_with_d(q));
  GhorbalReport bad = check_ghorbal_form(q, {});
  CHECK(!bad.ok);
  REQUIRE(!bad.violations.empty());
  CHECK(bad.violations[0].find("u") != std::string::npos);

  // Declaring u in the V-part fails differently: the image is decomposable.
  GhorbalReport bad2 = check_ghorbal_form(q, {0});
  CHECK(!bad2.ok);
}
