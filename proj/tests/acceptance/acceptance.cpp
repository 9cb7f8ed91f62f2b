// End-to-end acceptance checks against the shipped zoo of models.  Each
// criterion prints exactly one PASS/FAIL line; the binary exits nonzero if
// any criterion fails.  Usage: sullivan_acceptance <data-dir>
#include "sullivan/cohomology.hpp"
#include "sullivan/factorization.hpp"
#include "sullivan/gottlieb.hpp"
#include "sullivan/homotopy.hpp"
#include "sullivan/minimal_model.hpp"
#include "sullivan/model.hpp"
#include "sullivan/workspace.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace sullivan;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

ModelPtr model(const Workspace& w, const std::string& name) {
  return w.models.at(name);
}

size_t gen_index(const Model& m, const std::string& name) {
  auto i = m.alg.find(name);
  if (!i) throw std::runtime_error("no generator '" + name + "' in " + m.name);
  return *i;
}

// 1. Exact Gottlieb group dimensions on the three reference models.
Criterion criterion_gottlieb_dims(const Workspace& w) {
  Criterion c{1, "Gottlieb dimensions: G3(S2)=1, G3(B_abc)=0, G5(CP2)=1"};
  GottliebGroups gs2 = gottlieb_groups(*model(w, "S2"));
  c.require(gs2.dim.at(3) == 1, "dim G3(S2) != 1");
  for (const auto& [n, d] : gs2.dim)
    if (n != 3) c.require(d == 0, "S2 has unexpected Gottlieb in degree " + std::to_string(n));
  c.require(gs2.basis.size() == 1 && gs2.basis[0].degree == 3,
            "S2 Gottlieb basis is not a single degree-3 class");

  GottliebGroups gb = gottlieb_groups(*model(w, "B_abc"));
  c.require(gb.dim.at(3) == 0, "dim G3(B_abc) != 0");

  GottliebGroups gcp2 = gottlieb_groups(*model(w, "CP2"));
  c.require(gcp2.dim.at(5) == 1, "dim G5(CP2) != 1");
  return c;
}

// 2. No even Gottlieb classes anywhere in the zoo.
Criterion criterion_even_vanishing(const Workspace& w) {
  Criterion c{2, "even Gottlieb groups vanish on every zoo model"};
  for (const std::string& name : w.model_order) {
    GottliebGroups g = gottlieb_groups(*model(w, name));
    std::vector<int> evens = even_gottlieb_degrees(g);
    c.require(evens.empty(), name + " has a nonzero even Gottlieb group");
  }
  return c;
}

// 3. The total Gottlieb construction on S2: gamma kills a, sends b to the
// sphere generator, is in normal form, and induces zero on positive
// cohomology.
Criterion criterion_total_gottlieb(const Workspace& w) {
  Criterion c{3, "total Gottlieb element of S2 in verified normal form"};
  NormalizedModel ns = normalize_gottlieb(model(w, "S2"));
  c.require(ns.conditions_verified, "normalization not verified: " + ns.failure);
  if (!ns.conditions_verified) return c;
  IdealCheck dw = check_dw_condition(ns);
  c.require(dw.ok, "differential condition fails: " + dw.witness);
  if (!dw.ok) return c;

  TotalGottliebElement tg = build_phi(ns);
  const Model& nm = *ns.change.model;
  const Model& sm = *tg.sphere_model;
  size_t ia = gen_index(nm, "a"), ib = gen_index(nm, "b");
  c.require(tg.gamma.val[ia].is_zero(), "gamma(a) != 0");
  c.require(tg.vprime.size() == 1 && tg.gamma.val[ib] == el_gen(uint32_t(tg.vprime[0])),
            "gamma(b) is not the sphere generator");
  c.require(check_ghorbal_form(tg.gamma, ns.v).ok, "gamma fails the normal-form check");

  int cert = std::min(certified_degree(nm), certified_degree(sm));
  for (int n = 1; n <= cert; ++n)
    c.require(rank(induced_map_matrix(tg.gamma, n)) == 0,
              "gamma induces a nonzero map on H^" + std::to_string(n));
  return c;
}

// 4. The homology image of the evaluation map has dimension 2^r where r is
// the number of split odd-sphere factors.
Criterion criterion_power_law(const Workspace& w) {
  Criterion c{4, "evaluation homology image has dimension 2^r"};
  auto check = [&](const std::string& name, size_t factors, size_t dim) {
    HomologyImage hi = evaluation_homology_image(model(w, name));
    c.require(hi.factor_count == factors,
              name + ": expected " + std::to_string(factors) + " factors, got " +
                  std::to_string(hi.factor_count));
    c.require(hi.dimension == dim,
              name + ": expected image dimension " + std::to_string(dim) + ", got " +
                  std::to_string(hi.dimension));
  };
  check("S3xS5", 2, 4);
  check("S3xCP2", 1, 2);
  check("CP2", 0, 1);
  HomologyImage cp2 = evaluation_homology_image(model(w, "CP2"));
  c.require(cp2.reduced_dimension == 0, "CP2: reduced image dimension != 0");
  return c;
}

// 5. Nonzero Euler characteristic forces an empty splitting and a trivial
// reduced image.
Criterion criterion_euler(const Workspace& w) {
  Criterion c{5, "nonzero Euler characteristic kills the splitting"};
  auto check = [&](const std::string& name, long long chi) {
    EulerReport r = euler_characteristic(*model(w, name));
    c.require(r.stable, name + ": Euler characteristic not stable");
    c.require(r.chi == chi, name + ": chi != " + std::to_string(chi));
    HomologyImage hi = evaluation_homology_image(model(w, name));
    c.require(hi.factor_count == 0, name + ": splitting is nonempty");
    c.require(hi.reduced_dimension == 0, name + ": reduced image is nonzero");
  };
  check("CP2", 3);
  check("CP3", 4);
  return c;
}

// 6. The projection q : S3xS3 -> S6 induces zero on indecomposables but
// rank one on sixth cohomology.
Criterion criterion_monomorphism_example(const Workspace& w) {
  Criterion c{6, "q kills indecomposables yet hits H^6"};
  const Morphism& q = w.morphisms.at("q");
  int cert = std::min(certified_degree(*q.src), certified_degree(*q.dst));
  for (int n = 1; n <= cert; ++n)
    c.require(rank(indecomposables_matrix(q, n)) == 0,
              "Q(q) nonzero in degree " + std::to_string(n));
  c.require(rank(induced_map_matrix(q, 6)) == 1, "H^6(q) does not have rank 1");
  return c;
}

// 7. The homotopy decision procedure: certifies fh ~ fk with a re-verified
// certificate, and separates h from k definitively.
Criterion criterion_homotopy(const Workspace& w) {
  Criterion c{7, "homotopy search certifies fh ~ fk and separates h from k"};
  HomotopyResult same = find_homotopy(w.morphisms.at("fh"), w.morphisms.at("fk"));
  c.require(same.homotopic, "fh and fk not found homotopic");
  c.require(same.certificate.has_value(), "no certificate produced");
  if (same.certificate) {
    std::string why;
    c.require(verify_homotopy(*same.certificate, &why),
              "certificate fails re-verification: " + why);
  }

  HomotopyResult diff = find_homotopy(w.morphisms.at("h"), w.morphisms.at("k"));
  c.require(!diff.homotopic, "h and k wrongly found homotopic");
  c.require(diff.definitive, "h vs k verdict is not definitive");
  c.require(diff.obstruction.has_value() && diff.obstruction->degree == 5,
            "expected a degree-5 cohomology obstruction");
  return c;
}

// Rebuilds a model's workspace block with the within-degree generator order
// reversed (degrees stay ascending, so the block is still well formed).
ModelPtr permuted_copy(const Model& m) {
  std::vector<size_t> order = m.alg.declaration_order();
  std::stable_sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return m.alg.degree(i) < m.alg.degree(j);
  });
  std::map<int, std::vector<size_t>> by_degree;
  for (size_t i : order) by_degree[m.alg.degree(i)].push_back(i);

  std::ostringstream text;
  text << "model perm\n  bound " << m.bound() << "\n";
  for (auto& [deg, ids] : by_degree)
    for (auto it = ids.rbegin(); it != ids.rend(); ++it)
      text << "  generator " << m.gen(*it).name << " " << deg << "\n";
  for (size_t i = 0; i < m.size(); ++i)
    if (!m.d[i].is_zero())
      text << "  d " << m.gen(i).name << " = " << el_str(m.alg, m.d[i]) << "\n";
  text << "end\n";
  return parse_workspace(text.str()).models.at("perm");
}

std::vector<int> factor_degrees(const SphereSplitting& sp) {
  std::vector<int> degs;
  for (const auto& [name, deg] : sp.factors) degs.push_back(deg);
  std::sort(degs.begin(), degs.end());
  return degs;
}

// 8. Splitting round-trips to the identity, and the factor degrees do not
// depend on how the generators were declared.
Criterion criterion_split_roundtrip(const Workspace& w) {
  Criterion c{8, "odd-sphere splitting round-trips and is declaration-order invariant"};
  for (const std::string& name : w.model_order) {
    ModelPtr m = model(w, name);
    SphereSplitting sp = sphere_split(m);
    Morphism round = compose(sp.unsplit, sp.split);
    for (size_t i = 0; i < m->size(); ++i)
      c.require(round.val[i] == el_gen(uint32_t(i)),
                name + ": unsplit(split(" + m->gen(i).name + ")) is not the identity");

    SphereSplitting sp2 = sphere_split(permuted_copy(*m));
    c.require(factor_degrees(sp) == factor_degrees(sp2),
              name + ": factor degrees change under generator reordering");
  }
  return c;
}

// 9. Minimal models of the truncated polynomial algebras, with cohomology
// matched degreewise against the presentation's own Betti numbers.
Criterion criterion_minimal_model(const Workspace& w) {
  Criterion c{9, "minimal models of Q[a]/(a^2) and Q[a]/(a^3) through degree 7"};
  auto check = [&](const std::string& pname, int odd_degree, uint32_t power) {
    const PresentedAlgebra& p = w.presentations.at(pname);
    MinimalModelResult r = minimal_model_up_to_degree(p, 7);
    const Model& m = *r.model;
    c.require(r.certified >= 7, pname + ": construction certified below degree 7");
    c.require(m.size() == 2, pname + ": expected exactly two generators");
    if (m.size() != 2) return;
    size_t a = m.alg.degree(0) == 2 ? 0 : 1, b = 1 - a;
    c.require(m.alg.degree(a) == 2 && m.alg.degree(b) == odd_degree,
              pname + ": generator degrees are not {2," + std::to_string(odd_degree) + "}");
    c.require(m.d[a].is_zero(), pname + ": the even generator is not closed");
    c.require(m.d[b] == el_pow(m.alg, el_gen(uint32_t(a)), power),
              pname + ": the odd differential is not the expected power");
    for (int n = 0; n <= 7; ++n)
      c.require(betti(m, n) == presented_betti(p, n),
                pname + ": Betti mismatch in degree " + std::to_string(n));
  };
  check("P_S2", 3, 2);
  check("P_CP2", 5, 3);
  return c;
}

// 10. Cyclic-map counts dual to the Gottlieb groups of the target.
Criterion criterion_cyclic(const Workspace& w) {
  Criterion c{10, "cyclic classification: CP2 -> S2 gives 0, S3 -> S2 gives 1"};
  GottliebGroups gs2 = gottlieb_groups(*model(w, "S2"));
  c.require(cyclic_classification(*model(w, "CP2"), gs2).total == 0,
            "even-cohomology source should admit no cyclic classes");
  c.require(cyclic_classification(*model(w, "S3"), gs2).total == 1,
            "S3 -> S2 should give exactly one cyclic class");
  return c;
}

// 11. The algebraic ground rules, checked directly: sign rule, d^2 = 0,
// Leibniz, rank-nullity of every differential slice, and the Kunneth
// formula on a product of spheres.
Criterion criterion_properties(const Workspace& w) {
  Criterion c{11, "sign rule, d^2=0, Leibniz, rank-nullity, Kunneth"};

  const Model& ss = *model(w, "S3xS3");  // two odd generators
  Element x1 = el_gen(0), x2 = el_gen(1);
  c.require(mul(ss.alg, x1, x1).is_zero(), "odd square does not vanish");
  c.require(mul(ss.alg, x1, x2) == scale(Q(-1), mul(ss.alg, x2, x1)),
            "odd generators do not anticommute");
  const Model& s2 = *model(w, "S2");  // even a, odd b
  Element a = el_gen(uint32_t(gen_index(s2, "a")));
  Element b = el_gen(uint32_t(gen_index(s2, "b")));
  c.require(mul(s2.alg, a, b) == mul(s2.alg, b, a), "even generator does not commute");

  for (const std::string& name : w.model_order)
    c.require(validate_model(*model(w, name)).valid, name + ": validation fails");

  // Leibniz on sample products with nonzero differentials on both shapes.
  const Model& cp2 = *model(w, "CP2");
  const Model& babc = *model(w, "B_abc");
  auto leibniz = [&](const Model& m, size_t i, size_t j) {
    Element xi = el_gen(uint32_t(i)), xj = el_gen(uint32_t(j));
    Element lhs = apply_d(m, mul(m.alg, xi, xj));
    int sign = m.alg.odd(i) ? -1 : 1;
    Element rhs = add(mul(m.alg, m.d[i], xj), scale(Q(sign), mul(m.alg, xi, m.d[j])));
    c.require(lhs == rhs, m.name + ": Leibniz fails on a generator product");
  };
  leibniz(cp2, gen_index(cp2, "x"), gen_index(cp2, "y"));
  leibniz(babc, gen_index(babc, "a"), gen_index(babc, "c"));
  leibniz(babc, gen_index(babc, "c"), gen_index(babc, "b"));

  for (const std::string& name : w.model_order) {
    const Model& m = *model(w, name);
    for (int n = 1; n <= certified_degree(m); ++n) {
      QMatrix dm = d_matrix(m, n);
      c.require(kernel_basis(dm).size() + rank(dm) == dm.cols(),
                name + ": rank-nullity fails in degree " + std::to_string(n));
    }
  }

  // S3 and S6 have disjoint generator names, so they can be tensored as-is.
  TensorProduct tp = tensor_product(model(w, "S3"), model(w, "S6"), "KunnethT", 12);
  std::vector<size_t> left = betti_range(*model(w, "S3"), 9);
  std::vector<size_t> right = betti_range(*model(w, "S6"), 9);
  std::vector<size_t> prod = betti_range(*tp.model, 9);
  for (int n = 0; n <= 9; ++n) {
    size_t conv = 0;
    for (int i = 0; i <= n; ++i) conv += left[i] * right[n - i];
    c.require(prod[n] == conv, "Kunneth fails in degree " + std::to_string(n));
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: sullivan_acceptance <data-dir>\n";
    return 2;
  }
  Workspace w;
  try {
    w = load_workspace(std::string(argv[1]) + "/zoo.txt");
  } catch (const std::exception& e) {
    std::cerr << "error loading zoo: " << e.what() << "\n";
    return 2;
  }

  std::vector<Criterion (*)(const Workspace&)> checks = {
      criterion_gottlieb_dims, criterion_even_vanishing, criterion_total_gottlieb,
      criterion_power_law,     criterion_euler,          criterion_monomorphism_example,
      criterion_homotopy,      criterion_split_roundtrip, criterion_minimal_model,
      criterion_cyclic,        criterion_properties,
  };

  int failed = 0;
  for (size_t k = 0; k < checks.size(); ++k) {
    Criterion c;
    try {
      c = checks[k](w);
    } catch (const std::exception& e) {
      c.id = int(k) + 1;
      c.title = "(criterion threw)";
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    if (c.failures.empty()) {
      std::cout << "PASS: " << c.id << " " << c.title << "\n";
    } else {
      std::cout << "FAIL: " << c.id << " " << c.title << " -- " << c.failures.front();
      if (c.failures.size() > 1)
        std::cout << " (+" << c.failures.size() - 1 << " more)";
      std::cout << "\n";
      ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
