#include "sullivan/model.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sullivan {

ModelPtr make_model(std::string name, Algebra alg, std::vector<Element> d) {
  assert(d.size() == alg.size());
  auto m = std::make_shared<Model>();
  m->name = std::move(name);
  m->alg = std::move(alg);
  m->d = std::move(d);
  return m;
}

int parity_of(int degree) { return ((degree % 2) + 2) % 2; }

Element apply_derivation(const Model& m, const Derivation& th, const Element& e) {
  const Algebra& a = m.alg;
  int tpar = parity_of(th.degree);
  Element acc;
  acc.truncated = e.truncated;
  for (const auto& [mono, c] : e.t) {
    int prefix_par = 0;
    for (size_t i = 0; i < mono.f.size(); ++i) {
      auto [g, ex] = mono.f[i];
      const Element& tg = th.val[g];
      if (!tg.is_zero()) {
        Monomial pre;
        pre.f.assign(mono.f.begin(), mono.f.begin() + i);
        if (ex > 1) pre.f.push_back({g, ex - 1});
        Monomial suf;
        suf.f.assign(mono.f.begin() + i + 1, mono.f.end());
        Element term = mul(a, mul(a, el_mono(pre), tg), el_mono(suf));
        int sgn = (tpar && (prefix_par & 1)) ? -1 : 1;
        acc = add(acc, scale(Q(sgn * static_cast<int>(ex)) * c, term));
      }
      prefix_par = (prefix_par + a.degree(g) * static_cast<int>(ex)) % 2;
    }
  }
  return acc;
}

Element apply_d(const Model& m, const Element& e) {
  Derivation dd{1, m.d};
  return apply_derivation(m, dd, e);
}

bool derivation_commutes(const Model& m, const Derivation& th, int sign) {
  for (size_t i = 0; i < m.size(); ++i) {
    Element lhs = apply_d(m, th.val[i]);
    Element rhs = scale(Q(sign), apply_derivation(m, th, m.d[i]));
    if (!(lhs == rhs)) return false;
  }
  return true;
}

ValidationReport validate_model(const Model& m) {
  ValidationReport rep;
  const Algebra& a = m.alg;
  for (size_t i = 0; i < m.size(); ++i) {
    const Element& dv = m.d[i];
    const std::string& nm = a.gen(i).name;
    rep.truncated = rep.truncated || dv.truncated;
    if (dv.is_zero()) continue;
    auto deg = homogeneous_degree(a, dv);
    if (!deg) {
      rep.violations.push_back({"d-not-homogeneous", "d(" + nm + ") mixes degrees"});
    } else if (*deg != a.degree(i) + 1) {
      rep.violations.push_back(
          {"d-wrong-degree", "d(" + nm + ") has degree " + std::to_string(*deg) +
                                 ", expected " + std::to_string(a.degree(i) + 1)});
    }
    if (!word_length_part(dv, 0).is_zero() || !word_length_part(dv, 1).is_zero())
      rep.violations.push_back(
          {"d-not-decomposable", "d(" + nm + ") has a constant or linear term"});
    for (const auto& [mono, c] : dv.t)
      for (const auto& [g, e] : mono.f)
        if (g >= i) {
          rep.violations.push_back(
              {"d-not-nilpotent", "d(" + nm + ") references " + a.gen(g).name +
                                      ", which is not earlier in the well order"});
          goto nilpotence_done;
        }
  nilpotence_done:
    Element dd = apply_d(m, dv);
    rep.truncated = rep.truncated || dd.truncated;
    if (!dd.is_zero())
      rep.violations.push_back(
          {"d-squared", "d(d(" + nm + ")) = " + el_str(a, dd) + ", expected 0"});
  }
  rep.valid = rep.violations.empty();
  return rep;
}

namespace {
// The multiplicative extension of generator images, independent of any
// differential.
Element map_element(const Algebra& dst, const std::vector<Element>& val,
                    const Element& e) {
  Element acc;
  acc.truncated = e.truncated;
  for (const auto& [mono, c] : e.t) {
    Element term = el_const(c);
    for (const auto& [g, ex] : mono.f) term = mul(dst, term, el_pow(dst, val[g], ex));
    acc = add(acc, term);
  }
  return acc;
}
}  // namespace

Element apply_morphism(const Morphism& f, const Element& e) {
  return map_element(f.dst->alg, f.val, e);
}

Morphism identity_morphism(ModelPtr m) {
  Morphism f{m, m, {}};
  for (size_t i = 0; i < m->size(); ++i) f.val.push_back(el_gen(i));
  return f;
}

Morphism compose(const Morphism& g, const Morphism& f) {
  assert(f.dst == g.src && "composition needs matching middle model");
  Morphism h{f.src, g.dst, {}};
  for (const auto& v : f.val) h.val.push_back(apply_morphism(g, v));
  return h;
}

bool morphism_degree_preserving(const Morphism& f) {
  for (size_t i = 0; i < f.src->size(); ++i) {
    if (f.val[i].is_zero()) continue;
    auto deg = homogeneous_degree(f.dst->alg, f.val[i]);
    if (!deg || *deg != f.src->alg.degree(i)) return false;
  }
  return true;
}

bool morphism_commutes_with_d(const Morphism& f) {
  for (size_t i = 0; i < f.src->size(); ++i) {
    Element lhs = apply_morphism(f, f.src->d[i]);
    Element rhs = apply_d(*f.dst, f.val[i]);
    if (!(lhs == rhs)) return false;
  }
  return true;
}

QMatrix indecomposables_matrix(const Morphism& f, int n) {
  std::vector<size_t> rows, cols;
  for (size_t i = 0; i < f.dst->size(); ++i)
    if (f.dst->alg.degree(i) == n) rows.push_back(i);
  for (size_t i = 0; i < f.src->size(); ++i)
    if (f.src->alg.degree(i) == n) cols.push_back(i);
  QMatrix m(rows.size(), cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    Element lin = word_length_part(f.val[cols[j]], 1);
    for (size_t i = 0; i < rows.size(); ++i) {
      auto it = lin.t.find(mono_gen(static_cast<uint32_t>(rows[i])));
      if (it != lin.t.end()) m.at(i, j) = it->second;
    }
  }
  return m;
}

GeneratorChange change_of_generators(ModelPtr m, const std::vector<GeneratorSpec>& specs) {
  const Algebra& old = m->alg;
  if (specs.size() != old.size())
    throw std::invalid_argument("generator change must keep the generator count");

  std::vector<std::pair<std::string, int>> decl;
  for (const auto& s : specs) {
    auto deg = homogeneous_degree(old, s.value);
    if (!deg || *deg < 1)
      throw std::invalid_argument("generator '" + s.name +
                                  "' needs a homogeneous positive-degree value");
    decl.push_back({s.name, *deg});
  }
  Algebra neu = Algebra::make(decl, old.bound());

  // `specs` is ordered like the caller's declaration; generator ids in `neu`
  // follow the canonical (degree, decl) order.
  auto spec_of = [&](size_t new_id) -> const GeneratorSpec& {
    return specs[static_cast<size_t>(neu.gen(new_id).decl_index)];
  };

  // Invert the linear part degree by degree, ascending, expressing every old
  // generator in the new ones.  Higher-order terms only involve factors of
  // strictly lower degree, so they can be pushed through the part of the
  // inverse that is already known.
  std::vector<Element> from_old_val(old.size());
  std::map<int, std::vector<size_t>> old_by_deg, new_by_deg;
  for (size_t i = 0; i < old.size(); ++i) old_by_deg[old.degree(i)].push_back(i);
  for (size_t u = 0; u < neu.size(); ++u) new_by_deg[neu.degree(u)].push_back(u);
  if (old_by_deg.size() != new_by_deg.size())
    throw std::invalid_argument("generator change must match degrees");

  for (const auto& [n, olds] : old_by_deg) {
    auto it = new_by_deg.find(n);
    if (it == new_by_deg.end() || it->second.size() != olds.size())
      throw std::invalid_argument("generator counts differ in degree " +
                                  std::to_string(n));
    const auto& news = it->second;
    // Linear system: sum_j L[u][j] * from_old(old_j) = u - from_old(high_u).
    QMatrix L(news.size(), olds.size());
    std::vector<Element> rhs(news.size());
    for (size_t r = 0; r < news.size(); ++r) {
      const Element& value = spec_of(news[r]).value;
      Element lin = word_length_part(value, 1);
      for (size_t c = 0; c < olds.size(); ++c) {
        auto itc = lin.t.find(mono_gen(static_cast<uint32_t>(olds[c])));
        if (itc != lin.t.end()) L.at(r, c) = itc->second;
      }
      Element high = map_element(neu, from_old_val, word_length_min_part(value, 2));
      rhs[r] = sub(el_gen(static_cast<uint32_t>(news[r])), high);
    }
    // from_old(old_c) = sum_r X[r] rhs[r] with L^T X = e_c.
    QMatrix LT(olds.size(), news.size());
    for (size_t r = 0; r < news.size(); ++r)
      for (size_t c = 0; c < olds.size(); ++c) LT.at(c, r) = L.at(r, c);
    for (size_t c = 0; c < olds.size(); ++c) {
      QVec e(olds.size(), Q(0));
      e[c] = 1;
      auto x = solve(LT, e);
      if (!x)
        throw std::invalid_argument("linear parts are not invertible in degree " +
                                    std::to_string(n));
      Element acc;
      for (size_t r = 0; r < news.size(); ++r)
        if ((*x)[r] != 0) acc = add(acc, scale((*x)[r], rhs[r]));
      from_old_val[olds[c]] = std::move(acc);
    }
  }

  std::vector<Element> d_new(neu.size());
  for (size_t u = 0; u < neu.size(); ++u)
    d_new[u] = map_element(neu, from_old_val, apply_d(*m, spec_of(u).value));

  ModelPtr nm = make_model(m->name, neu, std::move(d_new));
  Morphism to_old{nm, m, {}};
  for (size_t u = 0; u < neu.size(); ++u) to_old.val.push_back(spec_of(u).value);
  Morphism from_old{m, nm, from_old_val};

  // Cheap round-trip sanity: both composites fix every generator.
  for (size_t u = 0; u < neu.size(); ++u)
    assert(apply_morphism(from_old, to_old.val[u]) == el_gen(static_cast<uint32_t>(u)));
  for (size_t j = 0; j < old.size(); ++j)
    assert(apply_morphism(to_old, from_old.val[j]) == el_gen(static_cast<uint32_t>(j)));

  return GeneratorChange{nm, std::move(to_old), std::move(from_old)};
}

Derivation transport_derivation(const GeneratorChange& ch, const Derivation& th) {
  Derivation out{th.degree, {}};
  const Model& old = *ch.to_old.dst;
  for (size_t u = 0; u < ch.model->size(); ++u) {
    Element in_old = apply_derivation(old, th, ch.to_old.val[u]);
    out.val.push_back(apply_morphism(ch.from_old, in_old));
  }
  return out;
}

namespace {
Element remap_by_name(const Algebra& src, const Algebra& dst, const Element& e) {
  std::vector<Element> val(src.size());
  for (const auto& [mono, c] : e.t) {
    for (const auto& [g, ex] : mono.f) {
      auto j = dst.find(src.gen(g).name);
      assert(j && "generator missing in remap target");
      val[g] = el_gen(static_cast<uint32_t>(*j));
    }
  }
  return map_element(dst, val, e);
}
}  // namespace

TensorProduct tensor_product(ModelPtr a, ModelPtr b, std::string name, int bound) {
  std::vector<std::pair<std::string, int>> decl;
  for (size_t i : a->alg.declaration_order())
    decl.push_back({a->gen(i).name, a->alg.degree(i)});
  for (size_t i : b->alg.declaration_order()) {
    if (a->alg.find(b->gen(i).name))
      throw std::invalid_argument("tensor factors share generator '" +
                                  b->gen(i).name + "'");
    decl.push_back({b->gen(i).name, b->alg.degree(i)});
  }
  Algebra alg = Algebra::make(decl, bound);
  std::vector<Element> d(alg.size());
  for (size_t g = 0; g < alg.size(); ++g) {
    const std::string& nm = alg.gen(g).name;
    if (auto i = a->alg.find(nm))
      d[g] = remap_by_name(a->alg, alg, a->d[*i]);
    else
      d[g] = remap_by_name(b->alg, alg, b->d[*b->alg.find(nm)]);
  }
  ModelPtr t = make_model(std::move(name), std::move(alg), std::move(d));
  Morphism incl_a{a, t, {}};
  for (size_t i = 0; i < a->size(); ++i)
    incl_a.val.push_back(el_gen(static_cast<uint32_t>(*t->alg.find(a->gen(i).name))));
  Morphism incl_b{b, t, {}};
  for (size_t i = 0; i < b->size(); ++i)
    incl_b.val.push_back(el_gen(static_cast<uint32_t>(*t->alg.find(b->gen(i).name))));
  return TensorProduct{t, std::move(incl_a), std::move(incl_b)};
}

Submodel submodel_on(ModelPtr m, const std::vector<size_t>& gens, std::string name,
                     int bound) {
  std::set<size_t> keep(gens.begin(), gens.end());
  std::vector<std::pair<std::string, int>> decl;
  for (size_t i : m->alg.declaration_order())
    if (keep.count(i)) decl.push_back({m->gen(i).name, m->alg.degree(i)});
  Algebra alg = Algebra::make(decl, bound);
  std::vector<Element> d(alg.size());
  for (size_t g = 0; g < alg.size(); ++g) {
    size_t i = *m->alg.find(alg.gen(g).name);
    for (const auto& [mono, c] : m->d[i].t)
      for (const auto& [h, e] : mono.f)
        if (!keep.count(h))
          throw std::invalid_argument("differential leaves the selected generators at '" +
                                      m->gen(i).name + "'");
    d[g] = remap_by_name(m->alg, alg, m->d[i]);
  }
  ModelPtr s = make_model(std::move(name), std::move(alg), std::move(d));
  Morphism incl{s, m, {}};
  for (size_t g = 0; g < s->size(); ++g)
    incl.val.push_back(el_gen(static_cast<uint32_t>(*m->alg.find(s->gen(g).name))));
  return Submodel{s, std::move(incl)};
}

namespace {
std::string fresh_name(std::set<std::string>& used, std::string base) {
  while (used.count(base)) base += "'";
  used.insert(base);
  return base;
}

GeneratorChange compose_changes(const GeneratorChange& first, const GeneratorChange& second) {
  return GeneratorChange{second.model, compose(first.to_old, second.to_old),
                         compose(second.from_old, first.from_old)};
}
}  // namespace

H0NormalForm h0_normal_form(const Morphism& f) {
  const Model& src = *f.src;
  const Model& dst = *f.dst;
  for (size_t i = 0; i < src.size(); ++i)
    if (!src.d[i].is_zero())
      throw std::invalid_argument("normal form needs zero differentials (source)");
  for (size_t i = 0; i < dst.size(); ++i)
    if (!dst.d[i].is_zero())
      throw std::invalid_argument("normal form needs zero differentials (target)");
  if (!morphism_degree_preserving(f))
    throw std::invalid_argument("normal form needs a degree-preserving map");

  // Step 1: split the source generators into V (pivots of the linear part)
  // and R, and strip the V-components from the R generators.
  std::set<int> degrees;
  for (size_t i = 0; i < src.size(); ++i) degrees.insert(src.alg.degree(i));

  std::vector<GeneratorSpec> src_specs(src.size());
  std::vector<bool> is_pivot(src.size(), false);
  for (int n : degrees) {
    std::vector<size_t> cols;
    for (size_t i = 0; i < src.size(); ++i)
      if (src.alg.degree(i) == n) cols.push_back(i);
    QMatrix q = indecomposables_matrix(f, n);
    QMatrix r = q;
    std::vector<size_t> piv = rref(r);
    std::set<size_t> pivset(piv.begin(), piv.end());
    for (size_t c = 0; c < cols.size(); ++c) {
      Element v = el_gen(static_cast<uint32_t>(cols[c]));
      if (pivset.count(c)) {
        is_pivot[cols[c]] = true;
      } else {
        // Column c = sum over pivots of rref coefficients; subtracting the
        // matching combination of pivot generators kills the linear part of
        // the image.
        for (size_t k = 0; k < piv.size(); ++k)
          if (r.at(k, c) != 0)
            v = sub(v, scale(r.at(k, c), el_gen(static_cast<uint32_t>(cols[piv[k]]))));
      }
      src_specs[cols[c]] = {src.gen(cols[c]).name, std::move(v)};
    }
  }
  std::vector<GeneratorSpec> ordered;
  for (size_t i : src.alg.declaration_order()) ordered.push_back(src_specs[i]);
  GeneratorChange src_ch = change_of_generators(f.src, ordered);
  Morphism f1 = compose(f, src_ch.to_old);  // new source -> old target

  // Step 2: new target generators: the images of V, completed by the target
  // generators away from the image's pivot coordinates (S).
  std::vector<size_t> v_ids, r_ids;
  for (size_t u = 0; u < src_ch.model->size(); ++u) {
    size_t old_id = *src.alg.find(src_ch.model->gen(u).name);
    (is_pivot[old_id] ? v_ids : r_ids).push_back(u);
  }

  std::set<std::string> used;
  std::vector<GeneratorSpec> dst_specs;
  std::vector<std::string> image_names;  // parallel to v_ids
  std::set<size_t> s_old;
  {
    // Pivot coordinates of the image linear parts, per degree.
    std::map<int, std::set<size_t>> image_pivots;
    for (int n : degrees) {
      std::vector<QVec> rows;
      std::vector<size_t> dst_gens;
      for (size_t i = 0; i < dst.size(); ++i)
        if (dst.alg.degree(i) == n) dst_gens.push_back(i);
      for (size_t u : v_ids) {
        if (src_ch.model->alg.degree(u) != n) continue;
        Element lin = word_length_part(f1.val[u], 1);
        QVec row(dst_gens.size(), Q(0));
        for (size_t k = 0; k < dst_gens.size(); ++k) {
          auto it = lin.t.find(mono_gen(static_cast<uint32_t>(dst_gens[k])));
          if (it != lin.t.end()) row[k] = it->second;
        }
        rows.push_back(std::move(row));
      }
      if (rows.empty()) continue;
      QMatrix mat = QMatrix::from_rows(rows, dst_gens.size());
      for (size_t p : rref(mat)) image_pivots[n].insert(dst_gens[p]);
    }
    for (size_t i = 0; i < dst.size(); ++i)
      if (!image_pivots[dst.alg.degree(i)].count(i)) s_old.insert(i);
  }
  for (size_t i : dst.alg.declaration_order())
    if (s_old.count(i))
      dst_specs.push_back({fresh_name(used, dst.gen(i).name), el_gen(static_cast<uint32_t>(i))});
  for (size_t u : v_ids) {
    std::string nm = fresh_name(used, src_ch.model->gen(u).name + "'");
    image_names.push_back(nm);
    dst_specs.push_back({nm, f1.val[u]});
  }
  GeneratorChange dst_ch = change_of_generators(f.dst, dst_specs);
  Morphism f2 = compose(dst_ch.from_old, f1);  // new source -> new target

  // Step 3: one decomposable correction makes f(R) land in the ideal of S:
  // f2(v) is exactly the generator named v', so the pure-image part of f2(r)
  // pulls back verbatim.
  std::map<uint32_t, uint32_t> image_to_v;  // target gen id -> source gen id
  for (size_t k = 0; k < v_ids.size(); ++k)
    image_to_v[static_cast<uint32_t>(*dst_ch.model->alg.find(image_names[k]))] =
        static_cast<uint32_t>(v_ids[k]);

  std::vector<GeneratorSpec> corr(src_ch.model->size());
  for (size_t u = 0; u < src_ch.model->size(); ++u)
    corr[u] = {src_ch.model->gen(u).name, el_gen(static_cast<uint32_t>(u))};
  for (size_t r : r_ids) {
    Element pure;  // monomials of f2(r) built entirely from image generators
    for (const auto& [mono, c] : f2.val[r].t) {
      bool all_image = !mono.is_one();
      std::vector<uint32_t> word;
      for (const auto& [g, e] : mono.f) {
        auto it = image_to_v.find(g);
        if (it == image_to_v.end()) {
          all_image = false;
          break;
        }
        for (uint32_t k = 0; k < e; ++k) word.push_back(it->second);
      }
      if (!all_image) continue;
      // The pullback v' |-> v is an algebra map; resorting the substituted
      // word picks up the Koszul sign.
      auto p = normalize_word(src_ch.model->alg, word);
      assert(p && "pullback of a valid monomial cannot vanish");
      add_term(pure, p->first, Q(c * p->second));
    }
    corr[r].value = sub(corr[r].value, pure);
  }
  std::vector<GeneratorSpec> corr_ordered;
  for (size_t i : src_ch.model->alg.declaration_order()) corr_ordered.push_back(corr[i]);
  GeneratorChange src_ch2 = change_of_generators(src_ch.model, corr_ordered);
  GeneratorChange src_total = compose_changes(src_ch, src_ch2);

  Morphism normalized = compose(f2, src_ch2.to_old);

  H0NormalForm out;
  out.source_change = src_total;
  out.target_change = dst_ch;
  out.normalized = normalized;
  for (size_t u = 0; u < src_total.model->size(); ++u) {
    size_t old_id = *src.alg.find(src_total.model->gen(u).name);
    (is_pivot[old_id] ? out.v_part : out.r_part).push_back(u);
  }
  for (size_t i = 0; i < dst_ch.model->size(); ++i)
    if (!image_to_v.count(static_cast<uint32_t>(i))) out.s_part.push_back(i);
  return out;
}

}  // namespace sullivan
