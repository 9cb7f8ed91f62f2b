#include "sullivan/homotopy.hpp"

#include "sullivan/cohomology.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sullivan {

namespace {

std::string fresh_name(std::string want, std::set<std::string>& used) {
  while (used.count(want)) want += "_";
  used.insert(want);
  return want;
}

}  // namespace

Cylinder make_cylinder(const ModelPtr& m) {
  const Algebra& a = m->alg;
  for (size_t i = 0; i < a.size(); ++i)
    if (a.degree(i) < 2)
      throw std::invalid_argument("cylinder: generator '" + a.gen(i).name +
                                  "' has degree 1, its bar would have degree 0");

  std::set<std::string> used;
  for (size_t i = 0; i < a.size(); ++i) used.insert(a.gen(i).name);
  std::vector<std::pair<std::string, int>> decl;
  std::vector<std::string> bar_names(a.size()), prime_names(a.size());
  for (size_t i = 0; i < a.size(); ++i) decl.emplace_back(a.gen(i).name, a.degree(i));
  for (size_t i = 0; i < a.size(); ++i) {
    bar_names[i] = fresh_name(a.gen(i).name + "_bar", used);
    decl.emplace_back(bar_names[i], a.degree(i) - 1);
  }
  for (size_t i = 0; i < a.size(); ++i) {
    prime_names[i] = fresh_name(a.gen(i).name + "'", used);
    decl.emplace_back(prime_names[i], a.degree(i));
  }
  // One above the base bound: the d-then-s chains pass through degree |v|+1.
  Algebra ca = Algebra::make(std::move(decl), m->bound() + 1);

  Cylinder cyl;
  cyl.base = m;
  cyl.orig.resize(a.size());
  cyl.bar.resize(a.size());
  cyl.prime.resize(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    cyl.orig[i] = *ca.find(a.gen(i).name);
    cyl.bar[i] = *ca.find(bar_names[i]);
    cyl.prime[i] = *ca.find(prime_names[i]);
  }

  // A zero-differential shell lets apply_morphism substitute the base
  // differential into the cylinder's algebra before the real model exists.
  ModelPtr shell =
      make_model(m->name + "#shell", ca, std::vector<Element>(ca.size(), el_zero()));
  Morphism into{m, shell, {}};
  into.val.resize(a.size());
  for (size_t i = 0; i < a.size(); ++i) into.val[i] = el_gen((uint32_t)cyl.orig[i]);

  std::vector<Element> d(ca.size(), el_zero());
  for (size_t i = 0; i < a.size(); ++i) {
    d[cyl.orig[i]] = apply_morphism(into, m->d[i]);
    d[cyl.bar[i]] = el_gen((uint32_t)cyl.prime[i]);
  }
  cyl.model = make_model(m->name + "#cyl", ca, std::move(d));
  cyl.include = Morphism{m, cyl.model, into.val};

  cyl.s.degree = -1;
  cyl.s.val.assign(ca.size(), el_zero());
  for (size_t i = 0; i < a.size(); ++i)
    cyl.s.val[cyl.orig[i]] = el_gen((uint32_t)cyl.bar[i]);
  return cyl;
}

std::vector<Element> sd_iterates(const Cylinder& cyl, size_t base_gen) {
  const Model& cm = *cyl.model;
  const int deg = cyl.base->alg.degree(base_gen);
  std::vector<Element> out;
  Element cur = el_gen((uint32_t)cyl.orig[base_gen]);
  for (int r = 1;; ++r) {
    Element de = apply_d(cm, cur);
    cur = apply_derivation(cm, cyl.s, de);
    if (de.truncated || cur.truncated)
      throw std::logic_error("sd iterate truncated inside the cylinder");
    if (cur.is_zero()) break;
    out.push_back(cur);
    // Every surviving monomial of (sd)^r(v) carries at least r barred or
    // primed factors of positive degree while the total degree stays |v|.
    if (r > deg) throw std::logic_error("sd series failed to terminate");
  }
  return out;
}

Element exp_sd_ds(const Cylinder& cyl, size_t base_gen) {
  Element out = add(el_gen((uint32_t)cyl.orig[base_gen]),
                    el_gen((uint32_t)cyl.prime[base_gen]));
  Q fact(1);
  std::vector<Element> terms = sd_iterates(cyl, base_gen);
  for (size_t r = 0; r < terms.size(); ++r) {
    fact *= Q((long)(r + 1));
    Q coef = Q(1) / fact;
    out = add(out, scale(coef, terms[r]));
  }
  return out;
}

Morphism exp_morphism(const Cylinder& cyl) {
  Morphism e{cyl.base, cyl.model, {}};
  e.val.resize(cyl.base->alg.size());
  for (size_t i = 0; i < e.val.size(); ++i) e.val[i] = exp_sd_ds(cyl, i);
  return e;
}

namespace {

bool refuse(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

}  // namespace

bool verify_homotopy(const HomotopyCertificate& c, std::string* why) {
  const Morphism& f0 = c.phi0;
  const Morphism& f1 = c.phi1;
  if (!f0.src || !f0.dst || f0.src != f1.src || f0.dst != f1.dst)
    return refuse(why, "phi0 and phi1 must share source and target");
  const Model& m = *f0.src;
  const Model& a = *f0.dst;
  if (c.bar_image.size() != m.size())
    return refuse(why, "expected one bar image per source generator");
  for (size_t i = 0; i < m.size(); ++i) {
    if (m.alg.degree(i) < 2)
      return refuse(why, "degree-1 generators are not supported");
    if (m.alg.degree(i) > a.bound())
      return refuse(why, "target bound too small for the source generators");
  }
  if (!morphism_degree_preserving(f0) || !morphism_commutes_with_d(f0))
    return refuse(why, "phi0 is not a dga morphism");
  if (!morphism_degree_preserving(f1) || !morphism_commutes_with_d(f1))
    return refuse(why, "phi1 is not a dga morphism");
  for (size_t i = 0; i < m.size(); ++i) {
    std::set<int> degs = degrees_of(a.alg, c.bar_image[i]);
    if (degs.size() > 1 || (degs.size() == 1 && *degs.begin() != m.alg.degree(i) - 1))
      return refuse(why, "bar image of '" + m.gen(i).name +
                             "' is not homogeneous of degree |v| - 1");
  }

  Cylinder cyl = make_cylinder(f0.src);
  Morphism h{cyl.model, f0.dst, {}};
  h.val.assign(cyl.model->alg.size(), el_zero());
  for (size_t i = 0; i < m.size(); ++i) {
    h.val[cyl.orig[i]] = f0.val[i];
    h.val[cyl.bar[i]] = c.bar_image[i];
    h.val[cyl.prime[i]] = apply_d(a, c.bar_image[i]);
  }
  for (size_t i = 0; i < m.size(); ++i) {
    Element rhs = add(f0.val[i], apply_d(a, c.bar_image[i]));
    Q fact(1);
    std::vector<Element> terms = sd_iterates(cyl, i);
    for (size_t r = 0; r < terms.size(); ++r) {
      fact *= Q((long)(r + 1));
      Q coef = Q(1) / fact;
      rhs = add(rhs, scale(coef, apply_morphism(h, terms[r])));
    }
    if (!(rhs == f1.val[i]))
      return refuse(why, "certificate identity fails at generator '" + m.gen(i).name + "'");
  }
  return true;
}

// ---------------------------------------------------------------------------
// Homotopy search.
// ---------------------------------------------------------------------------

namespace {

// A target-algebra value, affine in the search parameters: c + sum lin[p]*p.
// `nl` records that a p*q product with a nonzero coefficient was dropped, so
// the affine view of this value is no longer exact.
struct Aff {
  Element c;
  std::map<size_t, Element> lin;
  bool nl = false;

  bool is_zero() const { return !nl && lin.empty() && c.is_zero(); }
};

Aff aff_const(Element e) { return Aff{std::move(e), {}, false}; }

void aff_acc(std::map<size_t, Element>& lin, size_t p, const Element& e) {
  if (e.is_zero()) return;
  auto it = lin.find(p);
  if (it == lin.end()) {
    lin.emplace(p, e);
  } else {
    it->second = add(it->second, e);
    if (it->second.is_zero()) lin.erase(it);
  }
}

Aff aff_add(const Aff& x, const Aff& y) {
  Aff out;
  out.c = add(x.c, y.c);
  out.lin = x.lin;
  for (const auto& [p, e] : y.lin) aff_acc(out.lin, p, e);
  out.nl = x.nl || y.nl;
  return out;
}

Aff aff_scale(const Q& q, const Aff& x) {
  if (q == 0) return {};
  Aff out;
  out.c = scale(q, x.c);
  for (const auto& [p, e] : x.lin) out.lin.emplace(p, scale(q, e));
  out.nl = x.nl;
  return out;
}

Aff aff_sub(const Aff& x, const Aff& y) { return aff_add(x, aff_scale(Q(-1), y)); }

// Parameters are rational scalars, so they commute with everything and the
// Koszul signs live entirely in the Element products.
Aff aff_mul(const Algebra& a, const Aff& x, const Aff& y) {
  Aff out;
  out.nl = x.nl || y.nl;
  out.c = mul(a, x.c, y.c);
  for (const auto& [p, e] : x.lin) aff_acc(out.lin, p, mul(a, e, y.c));
  for (const auto& [p, e] : y.lin) aff_acc(out.lin, p, mul(a, x.c, e));
  for (const auto& [p, e] : x.lin)
    for (const auto& [q, f] : y.lin)
      if (!mul(a, e, f).is_zero()) out.nl = true;
  return out;
}

Aff aff_d(const Model& a, const Aff& x) {
  Aff out;
  out.c = apply_d(a, x.c);
  for (const auto& [p, e] : x.lin) {
    Element de = apply_d(a, e);
    if (!de.is_zero()) out.lin.emplace(p, de);
  }
  out.nl = x.nl;
  return out;
}

// H applied to a cylinder element, with per-cylinder-generator affine images.
// A zero factor kills its monomial up front so it cannot raise the nonlinear
// flag through a product whose value is zero anyway.
Aff aff_eval(const Algebra& dst, const Element& e, const std::vector<Aff>& im) {
  Aff out;
  for (const auto& [mono, coef] : e.t) {
    bool dead = false;
    for (const auto& [g, k] : mono.f)
      if (im[g].is_zero()) {
        dead = true;
        break;
      }
    if (dead) continue;
    Aff prod = aff_const(el_one());
    for (const auto& [g, k] : mono.f)
      for (uint32_t j = 0; j < k; ++j) prod = aff_mul(dst, prod, im[g]);
    out = aff_add(out, aff_scale(coef, prod));
  }
  return out;
}

struct SearchCtx {
  const Morphism* f0 = nullptr;
  const Morphism* f1 = nullptr;
  const Model* m = nullptr;
  const Model* a = nullptr;
  Cylinder cyl;
  std::vector<std::vector<Element>> series;  // per source generator
  // Cylinder generator id -> (0 orig / 1 bar / 2 prime, base generator id).
  std::vector<int> kind;
  std::vector<size_t> base_of;
  HomotopySearchOptions opts;
  size_t backtracks = 0;
};

struct SearchState {
  std::vector<Aff> bar;                       // per source generator
  std::vector<std::vector<Monomial>> bases;   // bar coordinate monomials
  std::vector<size_t> first;                  // first parameter id per generator
  size_t nparams = 0;
  std::vector<std::map<size_t, Q>> rowcoef;   // accumulated linear constraints
  QVec rowrhs;
  std::vector<std::optional<Q>> pinned;       // substituted-forced values
};

QMatrix dense_rows(const SearchState& st) {
  QMatrix m(st.rowcoef.size(), st.nparams);
  for (size_t r = 0; r < st.rowcoef.size(); ++r)
    for (const auto& [p, c] : st.rowcoef[r]) m.at(r, p) = c;
  return m;
}

void substitute(SearchState& st, size_t p, const Q& v) {
  for (Aff& b : st.bar) {
    auto it = b.lin.find(p);
    if (it == b.lin.end()) continue;
    b.c = add(b.c, scale(v, it->second));
    b.lin.erase(it);
  }
  st.pinned[p] = v;
}

bool rows_satisfied(const SearchState& st, const std::map<size_t, Q>& asg) {
  for (size_t r = 0; r < st.rowcoef.size(); ++r) {
    Q acc(0);
    for (const auto& [p, c] : st.rowcoef[r]) {
      Q v(0);
      if (st.pinned[p])
        v = *st.pinned[p];
      else if (auto it = asg.find(p); it != asg.end())
        v = it->second;
      acc += c * v;
    }
    if (acc != st.rowrhs[r]) return false;
  }
  return true;
}

HomotopyResult fail_at(int degree, const std::string& gen, std::string desc,
                       bool definitive) {
  HomotopyResult out;
  out.homotopic = false;
  out.definitive = definitive;
  out.obstruction = HomotopyObstruction{degree, gen, std::move(desc)};
  return out;
}

std::string coords_str(const QVec& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].get_str();
  }
  return s + "]";
}

HomotopyResult finish(SearchCtx& cx, const SearchState& st) {
  std::optional<QVec> sol = solve(dense_rows(st), st.rowrhs);
  if (!sol) throw std::logic_error("homotopy parameter system inconsistent at finish");
  HomotopyCertificate cert{*cx.f0, *cx.f1, {}};
  cert.bar_image.assign(cx.m->size(), el_zero());
  for (size_t i = 0; i < cx.m->size(); ++i) {
    Element b = el_zero();
    for (size_t k = 0; k < st.bases[i].size(); ++k) {
      const Q& c = (*sol)[st.first[i] + k];
      if (c != 0) add_term(b, st.bases[i][k], c);
    }
    cert.bar_image[i] = b;
  }
  std::string why;
  if (!verify_homotopy(cert, &why))
    throw std::logic_error("homotopy certificate failed re-verification: " + why);
  HomotopyResult out;
  out.homotopic = true;
  out.definitive = true;
  out.certificate = std::move(cert);
  return out;
}

HomotopyResult run(SearchCtx& cx, SearchState st, size_t start, bool instantiated) {
  const Model& m = *cx.m;
  const Model& a = *cx.a;
  for (size_t i = start; i < m.size(); ++i) {
    const int n = m.alg.degree(i);

    // Affine images of the cylinder generators under the partial homotopy.
    std::vector<Aff> im(cx.cyl.model->alg.size());
    for (size_t j = 0; j < m.size(); ++j) {
      im[cx.cyl.orig[j]] = aff_const(cx.f0->val[j]);
      im[cx.cyl.bar[j]] = st.bar[j];
      im[cx.cyl.prime[j]] = aff_d(a, st.bar[j]);
    }

    // Obligation: phi1(v) - phi0(v) - sum (1/r!) H((sd)^r v), to equal
    // d_A(bar_v).  The series only mentions bars of strictly lower-degree
    // generators, which the well-order has already processed.
    Aff o = aff_const(sub(cx.f1->val[i], cx.f0->val[i]));
    Q fact(1);
    for (size_t r = 0; r < cx.series[i].size(); ++r) {
      for (const auto& [mono, coef] : cx.series[i][r].t)
        for (const auto& [g, k] : mono.f)
          if (cx.kind[g] != 0 && cx.base_of[g] >= i)
            throw std::logic_error("sd series consulted an unprocessed bar");
      fact *= Q((long)(r + 1));
      Q coef = Q(-1) / fact;
      o = aff_add(o, aff_scale(coef, aff_eval(a.alg, cx.series[i][r], im)));
    }

    if (o.nl) {
      // The obligation is genuinely quadratic in the live parameters; fall
      // back to instantiating them over the grid.
      std::vector<size_t> freep;
      for (size_t p = 0; p < st.nparams; ++p)
        if (!st.pinned[p]) freep.push_back(p);
      if (freep.empty())
        throw std::logic_error("nonlinear obligation without free parameters");
      if (cx.opts.grid.empty())
        return fail_at(n, m.gen(i).name, "nonlinear parameter system and an empty search grid",
                       false);
      if (freep.size() > cx.opts.max_parameters)
        return fail_at(n, m.gen(i).name,
                       "nonlinear parameter system too wide for the grid search", false);

      std::optional<HomotopyResult> first_failure;
      std::vector<size_t> odo(freep.size(), 0);
      for (;;) {
        std::map<size_t, Q> asg;
        for (size_t k = 0; k < freep.size(); ++k) asg[freep[k]] = cx.opts.grid[odo[k]];
        if (rows_satisfied(st, asg)) {
          SearchState st2 = st;
          for (const auto& [p, v] : asg) {
            substitute(st2, p, v);
            st2.rowcoef.push_back({{p, Q(1)}});
            st2.rowrhs.push_back(v);
          }
          HomotopyResult r = run(cx, std::move(st2), i, true);
          if (r.homotopic) return r;
          if (!first_failure) first_failure = r;
          if (++cx.backtracks > cx.opts.max_backtrack)
            return fail_at(n, m.gen(i).name, "grid search budget exhausted", false);
        }
        size_t k = 0;
        while (k < odo.size() && ++odo[k] == cx.opts.grid.size()) odo[k++] = 0;
        if (k == odo.size()) break;
      }
      if (first_failure) return *first_failure;
      return fail_at(n, m.gen(i).name,
                     "no grid assignment satisfies the accumulated constraints", false);
    }

    // New parameters: the coordinates of bar_v in the degree n-1 basis.
    st.bases[i] = monomial_basis(a.alg, n - 1);
    st.first[i] = st.nparams;
    Aff barv;
    for (size_t k = 0; k < st.bases[i].size(); ++k)
      barv.lin.emplace(st.nparams + k, el_mono(st.bases[i][k]));
    st.nparams += st.bases[i].size();
    st.pinned.resize(st.nparams);
    st.bar[i] = barv;

    // Rows of d_A(bar_v) - o = 0 over the degree-n monomial basis.
    Aff full = aff_sub(aff_d(a, barv), o);
    std::vector<Monomial> nbasis = monomial_basis(a.alg, n);
    std::map<Monomial, size_t> nindex = basis_index(nbasis);
    QVec cc = element_coords(full.c, nindex, nbasis.size());
    std::map<size_t, QVec> lc;
    for (const auto& [p, e] : full.lin) lc.emplace(p, element_coords(e, nindex, nbasis.size()));
    for (size_t mu = 0; mu < nbasis.size(); ++mu) {
      std::map<size_t, Q> row;
      for (const auto& [p, v] : lc)
        if (v[mu] != 0) row.emplace(p, v[mu]);
      Q rhs = -cc[mu];
      if (row.empty() && rhs == 0) continue;
      st.rowcoef.push_back(std::move(row));
      st.rowrhs.push_back(rhs);
    }

    std::optional<QVec> sol = solve(dense_rows(st), st.rowrhs);
    if (!sol) {
      std::string desc = "certificate identity unsolvable at generator '" +
                         m.gen(i).name + "'";
      if (o.lin.empty() && !instantiated && apply_d(a, o.c).is_zero())
        desc += "; obstruction class " + coords_str(class_coordinates(a, n, o.c));
      return fail_at(n, m.gen(i).name, std::move(desc), !instantiated);
    }

    // Pin every parameter the accumulated system now forces, so later
    // obligations see it as a constant rather than a symbol.
    std::vector<QVec> ker = kernel_basis(dense_rows(st));
    for (size_t p = 0; p < st.nparams; ++p) {
      if (st.pinned[p]) continue;
      bool free_dir = false;
      for (const QVec& kv : ker)
        if (kv[p] != 0) {
          free_dir = true;
          break;
        }
      if (!free_dir) substitute(st, p, (*sol)[p]);
    }
  }
  return finish(cx, st);
}

}  // namespace

HomotopyResult find_homotopy(const Morphism& phi0, const Morphism& phi1,
                             const HomotopySearchOptions& opts) {
  if (!phi0.src || !phi0.dst || phi0.src != phi1.src || phi0.dst != phi1.dst)
    throw std::invalid_argument("find_homotopy: morphisms must share source and target");
  const Model& m = *phi0.src;
  const Model& a = *phi0.dst;
  if (!morphism_degree_preserving(phi0) || !morphism_commutes_with_d(phi0))
    throw std::invalid_argument("find_homotopy: phi0 is not a dga morphism");
  if (!morphism_degree_preserving(phi1) || !morphism_commutes_with_d(phi1))
    throw std::invalid_argument("find_homotopy: phi1 is not a dga morphism");
  for (size_t i = 0; i < m.size(); ++i)
    if (m.alg.degree(i) > a.bound())
      throw std::invalid_argument(
          "find_homotopy: target bound too small for the source generators");
  ValidationReport vr = validate_model(m);
  if (!vr.valid)
    throw std::invalid_argument("find_homotopy: source is not a valid minimal model: " +
                                (vr.violations.empty() ? std::string("invalid")
                                                       : vr.violations[0].detail));

  // Identical morphisms: the zero homotopy, no search needed.
  bool equal = true;
  for (size_t i = 0; i < m.size() && equal; ++i)
    if (!(phi0.val[i] == phi1.val[i])) equal = false;
  if (equal) {
    HomotopyResult out;
    out.homotopic = true;
    out.definitive = true;
    out.certificate =
        HomotopyCertificate{phi0, phi1, std::vector<Element>(m.size(), el_zero())};
    return out;
  }

  // Cohomology pre-filter: homotopic morphisms induce the same map, so a
  // difference in any certified degree is a definitive negative answer.
  const int top = std::min(certified_degree(m), certified_degree(a));
  for (int n = 1; n <= top; ++n)
    if (!(induced_map_matrix(phi0, n) == induced_map_matrix(phi1, n)))
      return fail_at(n, "", "induced cohomology maps differ in degree " + std::to_string(n),
                     true);

  SearchCtx cx;
  cx.f0 = &phi0;
  cx.f1 = &phi1;
  cx.m = &m;
  cx.a = &a;
  cx.cyl = make_cylinder(phi0.src);
  cx.opts = opts;
  cx.series.resize(m.size());
  for (size_t i = 0; i < m.size(); ++i) cx.series[i] = sd_iterates(cx.cyl, i);
  cx.kind.assign(cx.cyl.model->alg.size(), 0);
  cx.base_of.assign(cx.cyl.model->alg.size(), 0);
  for (size_t j = 0; j < m.size(); ++j) {
    cx.kind[cx.cyl.orig[j]] = 0;
    cx.kind[cx.cyl.bar[j]] = 1;
    cx.kind[cx.cyl.prime[j]] = 2;
    cx.base_of[cx.cyl.orig[j]] = j;
    cx.base_of[cx.cyl.bar[j]] = j;
    cx.base_of[cx.cyl.prime[j]] = j;
  }

  SearchState st;
  st.bar.assign(m.size(), Aff{});
  st.bases.resize(m.size());
  st.first.assign(m.size(), 0);
  return run(cx, std::move(st), 0, false);
}

}  // namespace sullivan
