#include "doctest.h"

#include "sullivan/cohomology.hpp"

using namespace sullivan;

namespace {
ModelPtr sphere2() {
  Algebra alg = Algebra::make({{"a", 2}, {"b", 3}}, 12);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), 2);
  return make_model("S2", std::move(alg), std::move(d));
}

ModelPtr proj_space(int power, int ydeg, int bound) {
  // Lambda(x_2, y; dy = x^power), the projective-space family.
  Algebra alg = Algebra::make({{"x", 2}, {"y", ydeg}}, bound);
  std::vector<Element> d(2);
  d[1] = el_pow(alg, el_gen(0), static_cast<uint32_t>(power));
  return make_model("P", std::move(alg), std::move(d));
}

ModelPtr b_abc() {
  Algebra alg = Algebra::make({{"a", 3}, {"b", 3}, {"c", 5}}, 15);
  std::vector<Element> d(3);
  d[2] = mul(alg, el_gen(0), el_gen(1));
  return make_model("B", std::move(alg), std::move(d));
}

ModelPtr odd_sphere(const std::string& n, int deg, int bound) {
  Algebra alg = Algebra::make({{n, deg}}, bound);
  return make_model("S" + std::to_string(deg), std::move(alg), {el_zero()});
}
}  // namespace

TEST_CASE("Betti numbers of the even sphere") {
  ModelPtr s = sphere2();
  std::vector<size_t> want = {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(betti_range(*s, 11) == want);
  CHECK(certified_degree(*s) == 11);
  // Canonical representatives: 1 in degree 0, a in degree 2.
  CHECK(cohomology(*s, 0).reps == std::vector<Element>{el_one()});
  CHECK(cohomology(*s, 2).reps == std::vector<Element>{el_gen(0)});
}

TEST_CASE("Betti numbers of the projective spaces") {
  ModelPtr cp2 = proj_space(3, 5, 12);
  CHECK(betti_range(*cp2, 11) ==
        std::vector<size_t>{1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0});
  ModelPtr cp3 = proj_space(4, 7, 12);
  CHECK(betti_range(*cp3, 11) ==
        std::vector<size_t>{1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0});
  // x^3 is exact in CP2: its class coordinates are empty (H^6 = 0).
  Element x3 = el_pow(cp2->alg, el_gen(0), 3);
  CHECK(class_coordinates(*cp2, 6, x3).empty());
}

TEST_CASE("Betti numbers of the three-cell two-stage model") {
  // Lambda(a,b,c; dc = ab): cohomology 1, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 1.
  ModelPtr b = b_abc();
  std::vector<size_t> want = {1, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 1, 0, 0, 0};
  CHECK(betti_range(*b, 14) == want);
  // Representatives in degree 8: the canonical basis of <[ac], [bc]>.
  auto h8 = cohomology(*b, 8);
  REQUIRE(h8.reps.size() == 2);
  Element ac = mul(b->alg, el_gen(0), el_gen(2));
  Element bc = mul(b->alg, el_gen(1), el_gen(2));
  CHECK(h8.reps[0] == ac);
  CHECK(h8.reps[1] == bc);
  // Degree-11 class [abc].
  auto h11 = cohomology(*b, 11);
  REQUIRE(h11.reps.size() == 1);
  Element abc = mul(b->alg, ac, el_gen(1));
  CHECK(h11.reps[0] == scale(Q(-1), abc));  // abc = -(a c) b after sorting signs
}

TEST_CASE("Kuenneth: product model Betti numbers multiply") {
  ModelPtr s3 = odd_sphere("x", 3, 12);
  ModelPtr s5 = odd_sphere("y", 5, 12);
  TensorProduct t = tensor_product(s3, s5, "S3xS5", 12);
  for (int n = 0; n <= 11; ++n) {
    size_t expect = 0;
    for (int i = 0; i <= n; ++i) expect += betti(*s3, i) * betti(*s5, n - i);
    CHECK(betti(*t.model, n) == expect);
  }
  CHECK(betti(*t.model, 8) == 1);  // [x y]
}

TEST_CASE("induced maps in cohomology compose and detect degrees") {
  // S6 model -> Lambda(x1, x2): u |-> x1 x2, v |-> 0.
  Algebra s6a = Algebra::make({{"u", 6}, {"v", 11}}, 12);
  std::vector<Element> s6d(2);
  s6d[1] = el_pow(s6a, el_gen(0), 2);
  ModelPtr s6 = make_model("S6", std::move(s6a), std::move(s6d));
  Algebra ta = Algebra::make({{"x1", 3}, {"x2", 3}}, 12);
  ModelPtr t = make_model("T", std::move(ta), {el_zero(), el_zero()});
  Morphism f{s6, t, {mul(t->alg, el_gen(0), el_gen(1)), el_zero()}};

  QMatrix h6 = induced_map_matrix(f, 6);
  REQUIRE(h6.rows() == 1);
  REQUIRE(h6.cols() == 1);
  CHECK(h6.at(0, 0) == 1);
  CHECK(rank(h6) == 1);
  // H^3: source has none.
  QMatrix h3 = induced_map_matrix(f, 3);
  CHECK(h3.cols() == 0);
  CHECK(h3.rows() == 2);

  // Composition with the swap automorphism of the target.
  Morphism swap{t, t, {el_gen(1), el_gen(0)}};
  Morphism sf = compose(swap, f);
  QMatrix lhs = induced_map_matrix(sf, 6);
  // H(swap) in degree 6: x1 x2 |-> x2 x1 = -x1 x2.
  QMatrix hswap = induced_map_matrix(swap, 6);
  REQUIRE(hswap.rows() == 1);
  CHECK(hswap.at(0, 0) == -1);
  CHECK(lhs.at(0, 0) == Q(hswap.at(0, 0) * h6.at(0, 0)));
}

TEST_CASE("Euler characteristics with stability flags") {
  EulerReport s2 = euler_characteristic(*sphere2());
  CHECK(s2.chi == 2);
  CHECK(s2.stable);
  CHECK(s2.certified == 11);

  EulerReport cp3 = euler_characteristic(*proj_space(4, 7, 12));
  CHECK(cp3.chi == 4);
  CHECK(cp3.stable);

  EulerReport b = euler_characteristic(*b_abc());
  CHECK(b.chi == 0);
  CHECK(b.stable);

  // A truncation that is visibly not settled: the free algebra on x_2 keeps
  // producing classes, so the window never clears.
  Algebra alg = Algebra::make({{"x", 2}}, 8);
  ModelPtr poly = make_model("K", std::move(alg), {el_zero()});
  EulerReport k = euler_characteristic(*poly);
  CHECK(!k.stable);
}

TEST_CASE("wedge of odd spheres via a three-stage model") {
  // Lambda(b_3, u1_9, u2_11, u3_13; du2 = b u1, du3 = b u2) models S3 v S9
  // through the bound: Betti 1 at degrees 0, 3, 9 and nothing else <= 13.
  Algebra alg =
      Algebra::make({{"b", 3}, {"u1", 9}, {"u2", 11}, {"u3", 13}}, 14);
  std::vector<Element> d(4);
  d[2] = mul(alg, el_gen(0), el_gen(1));
  d[3] = mul(alg, el_gen(0), el_gen(2));
  ModelPtr w = make_model("S3vS9", std::move(alg), std::move(d));
  CHECK(validate_model(*w).valid);
  std::vector<size_t> want = {1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0};
  CHECK(betti_range(*w, 13) == want);
  EulerReport e = euler_characteristic(*w);
  CHECK(e.chi == -1);
  CHECK(e.stable);
}

TEST_CASE("degrees past the bound are refused") {
  ModelPtr s = sphere2();
  CHECK_THROWS(cohomology(*s, 12));
}
