#include "sullivan/factorization.hpp"

#include "sullivan/errors.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <set>
#include <sstream>

namespace sullivan {

namespace {

std::set<uint32_t> as_set(const std::vector<size_t>& ids) {
  std::set<uint32_t> s;
  for (size_t i : ids) s.insert(static_cast<uint32_t>(i));
  return s;
}

// The x-coefficient of e when written as x * alpha + beta with alpha, beta
// free of the odd generator x.  Linear, and injective on multiples of x, so
// "x-part of e vanishes" is exactly "x_coefficient(e) = 0".
Element x_coefficient(const Algebra& a, const Element& e, size_t x) {
  Element out;
  for (const auto& [mono, c] : e.t) {
    if (mono.exponent_of(static_cast<uint32_t>(x)) == 0) continue;
    int parity_before = 0;
    Monomial rest;
    for (const auto& [g, p] : mono.f) {
      if (g == static_cast<uint32_t>(x)) continue;
      if (g < x) parity_before += a.degree(g) * static_cast<int>(p);
      rest.f.emplace_back(g, p);
    }
    add_term(out, std::move(rest), parity_before % 2 ? Q(-c) : c);
  }
  return out;
}

bool mentions(const Element& e, size_t x) {
  for (const auto& [mono, c] : e.t)
    if (mono.exponent_of(static_cast<uint32_t>(x)) > 0) return true;
  return false;
}

// Scalar value of a degree-0 element (the functional part of a derivation on
// a generator of matching degree).
Q constant_of(const Element& e) {
  if (e.is_zero()) return Q(0);
  assert(e.t.size() == 1 && e.t.begin()->first.is_one());
  return e.t.begin()->second;
}

// Coefficient of the bare generator g in e.
Q linear_coefficient(const Element& e, size_t g) {
  auto it = e.t.find(mono_gen(static_cast<uint32_t>(g)));
  return it == e.t.end() ? Q(0) : it->second;
}

GeneratorChange compose_stages(const GeneratorChange& first, const GeneratorChange& next) {
  return {next.model, compose(first.to_old, next.to_old),
          compose(next.from_old, first.from_old)};
}

}  // namespace

IdealCheck check_dw_condition(const NormalizedModel& ns) {
  const Model& m = *ns.change.model;
  std::set<uint32_t> zset = as_set(ns.z);
  for (size_t i = 0; i < m.size(); ++i) {
    if (in_ideal(m.d[i], zset, 2)) continue;
    for (const auto& [mono, c] : m.d[i].t)
      if (factors_in(mono, zset) < 2)
        return {false, "d(" + m.gen(i).name + ") has the monomial " + mono.str(m.alg) +
                           " with fewer than two Z-factors"};
  }
  return {true, ""};
}

IdealCheck cycles_in_ideal_check(const Model& m, const std::vector<size_t>& vprime,
                                 const std::vector<size_t>& z, int max_degree) {
  if (max_degree > certified_degree(m))
    throw bound_error("cocycles above degree " + std::to_string(certified_degree(m)) +
                      " are not certified by bound " + std::to_string(m.bound()));
  std::set<uint32_t> ideal = as_set(vprime);
  for (size_t i : z) ideal.insert(static_cast<uint32_t>(i));
  for (int n = 1; n <= max_degree; ++n) {
    for (const Element& c : cocycle_basis(m, n)) {
      if (in_ideal(c, ideal, 1)) continue;
      for (const auto& [mono, q] : c.t)
        if (factors_in(mono, ideal) < 1)
          return {false, "degree-" + std::to_string(n) + " cocycle " + el_str(m.alg, c) +
                             " has the monomial " + mono.str(m.alg) + " outside the ideal"};
    }
  }
  return {true, ""};
}

TotalGottliebElement build_phi(const NormalizedModel& ns) {
  if (!ns.conditions_verified)
    throw std::invalid_argument("total Gottlieb element needs a verified normalization: " +
                                ns.failure);
  IdealCheck dw = check_dw_condition(ns);
  if (!dw.ok)
    throw std::invalid_argument("differential escapes Lambda(V) (x) Lambda^{>=2}(Z): " +
                                dw.witness);

  ModelPtr m = ns.change.model;
  size_t r = ns.v.size();

  // The sphere product Lambda(v'_1..v'_r): primed copies of the V-generators,
  // with enough room for the full product of all of them.
  std::set<std::string> taken;
  for (size_t i = 0; i < m->size(); ++i) taken.insert(m->gen(i).name);
  std::vector<std::pair<std::string, int>> decl;
  int sum_deg = 0;
  for (size_t i : ns.v) {
    std::string nm = m->gen(i).name + "'";
    while (!taken.insert(nm).second) nm += "'";
    decl.emplace_back(nm, m->gen(i).degree);
    sum_deg += m->gen(i).degree;
  }
  // Room for the top product of all primed generators and for cohomology
  // queries through the original model's certified range.
  int sphere_bound = std::max({1, sum_deg, m->bound()});
  ModelPtr sphere = make_model(m->name + ".spheres", Algebra::make(decl, sphere_bound),
                               std::vector<Element>(r));
  std::vector<size_t> vprime;
  for (const auto& [nm, deg] : decl) vprime.push_back(*sphere->alg.find(nm));

  TensorProduct prod = tensor_product(sphere, m, m->name + ".total",
                                      std::max(m->bound(), sphere->bound()));

  // Locations of both kinds of generators inside the product.
  std::vector<size_t> vprime_t(r), orig_t(m->size());
  for (size_t s = 0; s < r; ++s) vprime_t[s] = *prod.model->alg.find(sphere->gen(vprime[s]).name);
  for (size_t j = 0; j < m->size(); ++j) orig_t[j] = *prod.model->alg.find(m->gen(j).name);

  // theta_s carried over to the product: zero on the primed generators.
  std::vector<Derivation> theta_t(r);
  for (size_t s = 0; s < r; ++s) {
    theta_t[s].degree = ns.theta[s].degree;
    theta_t[s].val.assign(prod.model->size(), el_zero());
    for (size_t j = 0; j < m->size(); ++j)
      theta_t[s].val[orig_t[j]] = apply_morphism(prod.right_inclusion, ns.theta[s].val[j]);
  }

  // phi_s = phi_{s-1} + v'_s theta_s phi_{s-1}, starting from the inclusion.
  std::vector<Element> cur = prod.right_inclusion.val;
  for (size_t s = 0; s < r; ++s) {
    Element vs = el_gen(static_cast<uint32_t>(vprime_t[s]));
    for (size_t j = 0; j < m->size(); ++j)
      cur[j] = add(cur[j], mul(prod.model->alg, vs,
                               apply_derivation(*prod.model, theta_t[s], cur[j])));
  }
  Morphism phi{m, prod.model, std::move(cur)};
  if (!morphism_degree_preserving(phi) || !morphism_commutes_with_d(phi))
    throw std::logic_error("total Gottlieb element: phi is not a DGA map");

  // Projections onto the two factors.
  Morphism to_sphere{prod.model, sphere, std::vector<Element>(prod.model->size(), el_zero())};
  Morphism to_orig{prod.model, m, std::vector<Element>(prod.model->size(), el_zero())};
  for (size_t s = 0; s < r; ++s)
    to_sphere.val[vprime_t[s]] = el_gen(static_cast<uint32_t>(vprime[s]));
  for (size_t j = 0; j < m->size(); ++j) to_orig.val[orig_t[j]] = el_gen(static_cast<uint32_t>(j));

  Morphism gamma = compose(to_sphere, phi);

  // Re-verify everything the construction promises.
  Morphism second = compose(to_orig, phi);
  for (size_t j = 0; j < m->size(); ++j)
    if (!(second.val[j] == el_gen(static_cast<uint32_t>(j))))
      throw std::logic_error("total Gottlieb element: second projection of phi is not the identity");
  for (size_t z : ns.z)
    if (!gamma.val[z].is_zero())
      throw std::logic_error("total Gottlieb element: gamma does not kill Z");
  std::set<uint32_t> earlier;
  for (size_t i = 0; i < r; ++i) {
    Element diff = sub(gamma.val[ns.v[i]], el_gen(static_cast<uint32_t>(vprime[i])));
    if (!in_ideal(diff, earlier, 1))
      throw std::logic_error("total Gottlieb element: gamma is not triangular on V");
    earlier.insert(static_cast<uint32_t>(vprime[i]));
  }
  for (const auto& [nm, deg] : decl) {
    size_t want = 0;
    for (const auto& [nm2, deg2] : decl)
      if (deg2 == deg) ++want;
    if (rank(indecomposables_matrix(gamma, deg)) != want)
      throw std::logic_error("total Gottlieb element: gamma is not surjective on indecomposables");
  }

  return {sphere, std::move(prod), std::move(phi), std::move(gamma), std::move(vprime)};
}

namespace {

// A cocycle whose linear part pairs to 1 against a Gottlieb functional: after
// a linear-part-preserving change it becomes an honest cocycle generator dual
// to a commuting derivation, the seed of one product factor.
struct SplitCandidate {
  Element cocycle;
  size_t linear_gen;  // the generator slot the cocycle will take over
  int degree;
};

std::vector<SplitCandidate> split_candidates(const ModelPtr& m) {
  std::vector<SplitCandidate> out;
  GottliebGroups g = gottlieb_groups(*m);
  std::set<int> degrees;
  for (const auto& e : g.basis)
    if (e.degree % 2 && e.degree <= certified_degree(*m)) degrees.insert(e.degree);
  for (int n : degrees) {
    std::vector<Element> cocycles = cocycle_basis(*m, n);
    if (cocycles.empty()) continue;
    std::vector<size_t> gens_n;
    for (size_t i = 0; i < m->size(); ++i)
      if (m->gen(i).degree == n) gens_n.push_back(i);
    for (const auto& e : g.basis) {
      if (e.degree != n) continue;
      for (const Element& zc : cocycles) {
        Q pair(0);
        for (size_t gid : gens_n)
          pair += linear_coefficient(zc, gid) * constant_of(e.theta.val[gid]);
        if (pair == 0) continue;
        Element xi = scale(Q(1) / pair, zc);
        for (size_t gid : gens_n) {
          if (linear_coefficient(xi, gid) != 0) {
            out.push_back({xi, gid, n});
            break;
          }
        }
      }
    }
  }
  return out;
}

struct Stage {
  GeneratorChange change;  // current model -> model with the factor isolated
  size_t x_id;             // factor generator id inside change.model
  Submodel sub;            // everything else, with d avoiding the factor
};

// Isolates the candidate as a straight cocycle generator, then corrects the
// remaining generators degree by degree (w' = w + x c with d(c) matching the
// x-part of d(w)) until no differential mentions the factor.  Returns nothing
// when some x-part is not exact, which cannot happen for a genuine
// Gottlieb-dual cocycle.
std::optional<Stage> run_stage(const ModelPtr& start, const SplitCandidate& cand) {
  std::vector<GeneratorSpec> expose;
  for (size_t j = 0; j < start->size(); ++j)
    expose.push_back({start->gen(j).name,
                      j == cand.linear_gen ? cand.cocycle : el_gen(static_cast<uint32_t>(j))});
  GeneratorChange ch = change_of_generators(start, expose);
  size_t x = cand.linear_gen;
  const int n = cand.degree;
  assert(ch.model->d[x].is_zero());

  std::set<int> degrees;
  for (size_t j = 0; j < ch.model->size(); ++j)
    if (j != x) degrees.insert(ch.model->gen(j).degree);
  for (int deg : degrees) {
    ModelPtr cur = ch.model;
    const Algebra& alg = cur->alg;
    Element x_el = el_gen(static_cast<uint32_t>(x));
    std::vector<GeneratorSpec> specs;
    bool any = false;
    for (size_t j = 0; j < cur->size(); ++j) {
      specs.push_back({cur->gen(j).name, el_gen(static_cast<uint32_t>(j))});
      if (j == x || cur->gen(j).degree != deg) continue;
      Element alpha = x_coefficient(alg, cur->d[j], x);
      if (alpha.is_zero()) continue;

      // Solve for c with the x-part of d(w + x c) vanishing, over the x-free
      // monomials of degree |w| - n.
      std::vector<Monomial> dom, cod;
      for (const Monomial& mo : monomial_basis(alg, deg - n))
        if (mo.exponent_of(static_cast<uint32_t>(x)) == 0) dom.push_back(mo);
      for (const Monomial& mo : monomial_basis(alg, deg - n + 1))
        if (mo.exponent_of(static_cast<uint32_t>(x)) == 0) cod.push_back(mo);
      auto cod_idx = basis_index(cod);
      std::vector<QVec> cols;
      for (const Monomial& mo : dom) {
        Element dxb = apply_d(*cur, mul(alg, x_el, el_mono(mo)));
        cols.push_back(element_coords(x_coefficient(alg, dxb, x), cod_idx, cod.size()));
      }
      QVec rhs = element_coords(alpha, cod_idx, cod.size());
      for (Q& q : rhs) q = -q;
      auto sol = solve(QMatrix::from_cols(cols, cod.size()), rhs);
      if (!sol) return std::nullopt;
      Element c = coords_element(*sol, dom);
      specs.back().value = add(el_gen(static_cast<uint32_t>(j)), mul(alg, x_el, c));
      any = true;
    }
    if (any) ch = compose_stages(ch, change_of_generators(ch.model, specs));
  }

  for (size_t j = 0; j < ch.model->size(); ++j)
    if (j != x && mentions(ch.model->d[j], x)) return std::nullopt;
  std::vector<size_t> rest;
  for (size_t j = 0; j < ch.model->size(); ++j)
    if (j != x) rest.push_back(j);
  Submodel sub = submodel_on(ch.model, rest, start->name, start->bound());
  return Stage{std::move(ch), x, std::move(sub)};
}

}  // namespace

SphereSplitting sphere_split(ModelPtr m) {
  std::vector<Stage> stages;
  ModelPtr cur = m;
  for (;;) {
    bool advanced = false;
    for (const SplitCandidate& cand : split_candidates(cur)) {
      if (auto st = run_stage(cur, cand)) {
        stages.push_back(std::move(*st));
        cur = stages.back().sub.model;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }

  SphereSplitting out;
  int sum_deg = 0;
  std::vector<std::pair<std::string, int>> decl;
  for (const Stage& st : stages) {
    const Generator& g = st.change.model->gen(st.x_id);
    out.factors.emplace_back(g.name, g.degree);
    decl.emplace_back(g.name, g.degree);
    sum_deg += g.degree;
  }
  out.sphere_model =
      make_model(m->name + ".spheres", Algebra::make(decl, std::max({1, sum_deg, m->bound()})),
                 std::vector<Element>(decl.size()));
  out.remainder = cur;
  TensorProduct prod = tensor_product(out.sphere_model, out.remainder, m->name + ".split",
                                      std::max(m->bound(), out.sphere_model->bound()));
  out.product = prod.model;

  // original -> product: push each stage's change forward, sending the factor
  // to its copy in the product and everything else deeper into the recursion.
  Morphism h = prod.right_inclusion;
  for (size_t i = stages.size(); i-- > 0;) {
    const Stage& st = stages[i];
    Morphism g{st.change.model, prod.model, std::vector<Element>(st.change.model->size())};
    for (size_t j = 0; j < st.change.model->size(); ++j) {
      const std::string& nm = st.change.model->gen(j).name;
      if (j == st.x_id)
        g.val[j] = el_gen(static_cast<uint32_t>(*prod.model->alg.find(nm)));
      else
        g.val[j] = h.val[*st.sub.model->alg.find(nm)];
    }
    h = compose(g, st.change.from_old);
  }
  out.split = std::move(h);

  // product -> original: write each product generator in the coordinates of
  // the original model by walking the stage changes back down.
  auto push_down = [&](size_t stage_idx, Element e) {
    for (size_t k = stage_idx + 1; k-- > 0;) {
      e = apply_morphism(stages[k].change.to_old, e);
      if (k > 0) e = apply_morphism(stages[k - 1].sub.inclusion, e);
    }
    return e;
  };
  Morphism bwd{prod.model, m, std::vector<Element>(prod.model->size())};
  for (size_t t = 0; t < prod.model->size(); ++t) {
    const std::string& nm = prod.model->gen(t).name;
    if (auto s = out.sphere_model->alg.find(nm); s && !stages.empty()) {
      size_t i = 0;
      while (out.factors[i].first != nm) ++i;
      bwd.val[t] = push_down(i, el_gen(static_cast<uint32_t>(stages[i].x_id)));
    } else {
      Element e = el_gen(static_cast<uint32_t>(*out.remainder->alg.find(nm)));
      bwd.val[t] = stages.empty()
                       ? e
                       : push_down(stages.size() - 1,
                                   apply_morphism(stages.back().sub.inclusion, e));
    }
  }
  out.unsplit = std::move(bwd);

  Morphism round_orig = compose(out.unsplit, out.split);
  Morphism round_prod = compose(out.split, out.unsplit);
  for (size_t j = 0; j < m->size(); ++j)
    if (!(round_orig.val[j] == el_gen(static_cast<uint32_t>(j))))
      throw std::logic_error("sphere splitting: round trip is not the identity on the model");
  for (size_t t = 0; t < prod.model->size(); ++t)
    if (!(round_prod.val[t] == el_gen(static_cast<uint32_t>(t))))
      throw std::logic_error("sphere splitting: round trip is not the identity on the product");
  if (!morphism_commutes_with_d(out.split) || !morphism_commutes_with_d(out.unsplit))
    throw std::logic_error("sphere splitting: the isomorphisms do not commute with d");
  return out;
}

HomologyImage evaluation_homology_image(ModelPtr m) {
  HomologyImage out;
  out.split = sphere_split(std::move(m));
  size_t r = out.split.factors.size();
  assert(r < 63);
  out.factor_count = r;
  out.dimension = size_t{1} << r;
  out.reduced_dimension = out.dimension - 1;
  if (r <= 16) {
    std::vector<Monomial> monos;
    for (size_t mask = 0; mask < out.dimension; ++mask) {
      Monomial mo;
      for (size_t s = 0; s < r; ++s)
        if (mask & (size_t{1} << s)) mo.f.emplace_back(static_cast<uint32_t>(s), 1);
      monos.push_back(std::move(mo));
    }
    std::sort(monos.begin(), monos.end());
    for (const Monomial& mo : monos) out.basis.push_back(mo.str(out.split.sphere_model->alg));
  }
  return out;
}

CyclicClassification cyclic_classification(const Model& a, const GottliebGroups& gx) {
  CyclicClassification out;
  for (const auto& [n, dim] : gx.dim) {
    if (dim == 0) continue;
    // No monomials at all in degree n certifies H^n = 0 with any bound.
    if (monomial_basis(a.alg, n).empty()) {
      out.per_degree[n] = 0;
      continue;
    }
    if (n > certified_degree(a))
      throw bound_error("classification needs cohomology of the source in degree " +
                        std::to_string(n) + ", certified only to " +
                        std::to_string(certified_degree(a)));
    size_t count = betti(a, n) * dim;
    out.per_degree[n] = count;
    out.total += count;
  }
  return out;
}

GhorbalReport check_ghorbal_form(const Morphism& f, const std::vector<size_t>& v_part) {
  GhorbalReport rep;
  const Model& src = *f.src;
  std::set<uint32_t> v = as_set(v_part);
  std::set<uint32_t> w;
  for (size_t i = 0; i < src.size(); ++i)
    if (!v.count(static_cast<uint32_t>(i))) w.insert(static_cast<uint32_t>(i));

  auto flag = [&rep](std::string s) { rep.violations.push_back(std::move(s)); };

  if (!morphism_degree_preserving(f) || !morphism_commutes_with_d(f))
    flag("the map is not a DGA morphism");
  for (uint32_t i : w)
    if (!f.val[i].is_zero())
      flag("the map does not kill the W-generator " + src.gen(i).name);

  std::set<size_t> hit;
  for (uint32_t i : v) {
    const Element& val = f.val[i];
    bool generator = val.t.size() == 1 && val.t.begin()->first.word_length() == 1;
    if (!generator) {
      flag("the image of " + src.gen(i).name + " is not a single target generator");
      continue;
    }
    if (!hit.insert(val.t.begin()->first.f[0].first).second)
      flag("two V-generators share the image " + el_str(f.dst->alg, val));
  }
  if (rep.violations.empty() && hit.size() != f.dst->size())
    flag("the target is not the free algebra on the image of V");

  for (uint32_t i : w)
    if (!in_ideal(src.d[i], w, 2))
      flag("d(" + src.gen(i).name + ") has a monomial with fewer than two W-factors");
  for (uint32_t i : v)
    for (const auto& [mono, c] : src.d[i].t)
      if (factors_in(mono, w) == 1) {
        flag("d(" + src.gen(i).name + ") has the monomial " + mono.str(src.alg) +
             " with exactly one W-factor");
        break;
      }

  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace sullivan
