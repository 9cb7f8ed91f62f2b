#include "sullivan/gottlieb.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace sullivan {

namespace {
struct Unknown {
  size_t gen;
  Monomial mono;  // value monomial, degree = |gen| - n
};

// Unknowns for a degree -n derivation, functional block first.
std::vector<Unknown> unknown_layout(const Model& m, int n) {
  std::vector<Unknown> u;
  for (size_t g = 0; g < m.size(); ++g)
    if (m.alg.degree(g) == n) u.push_back({g, mono_one()});
  for (size_t g = 0; g < m.size(); ++g) {
    int vd = m.alg.degree(g) - n;
    if (vd <= 0) continue;
    for (const auto& mono : monomial_basis(m.alg, vd)) u.push_back({g, mono});
  }
  return u;
}

Derivation unit_derivation(const Model& m, int n, const Unknown& u) {
  Derivation th{-n, std::vector<Element>(m.size())};
  th.val[u.gen] = el_mono(u.mono);
  return th;
}

Derivation coords_derivation(const Model& m, int n, const std::vector<Unknown>& layout,
                             const QVec& x) {
  Derivation th{-n, std::vector<Element>(m.size())};
  for (size_t k = 0; k < layout.size(); ++k)
    if (x[k] != 0) add_term(th.val[layout[k].gen], layout[k].mono, x[k]);
  return th;
}
}  // namespace

std::vector<Derivation> derivation_space(const Model& m, int n) {
  assert(n >= 1);
  std::vector<Unknown> layout = unknown_layout(m, n);
  if (layout.empty()) return {};
  int sign = n % 2 ? -1 : 1;

  // Constraint rows: for every generator h, the element
  // d(theta(h)) - sign * theta(d h) must vanish; it is linear in theta.
  std::vector<std::vector<Monomial>> row_basis(m.size());
  std::vector<std::map<Monomial, size_t>> row_index(m.size());
  std::vector<size_t> row_offset(m.size() + 1, 0);
  for (size_t h = 0; h < m.size(); ++h) {
    int cd = m.alg.degree(h) + 1 - n;
    if (cd >= 0) row_basis[h] = monomial_basis(m.alg, cd);
    row_index[h] = basis_index(row_basis[h]);
    row_offset[h + 1] = row_offset[h] + row_basis[h].size();
  }

  QMatrix c(row_offset[m.size()], layout.size());
  for (size_t k = 0; k < layout.size(); ++k) {
    Derivation e = unit_derivation(m, n, layout[k]);
    for (size_t h = 0; h < m.size(); ++h) {
      Element lhs = (h == layout[k].gen) ? apply_d(m, el_mono(layout[k].mono)) : el_zero();
      Element rhs = apply_derivation(m, e, m.d[h]);
      Element cons = sub(lhs, scale(Q(sign), rhs));
      assert(!cons.truncated && "commutation constraint exceeded the bound");
      for (const auto& [mono, coef] : cons.t)
        c.at(row_offset[h] + row_index[h].at(mono), k) = coef;
    }
  }

  std::vector<QVec> kernel = kernel_basis(c);
  std::vector<QVec> canon = row_space_basis(kernel, layout.size());
  std::vector<Derivation> out;
  for (const auto& x : canon) out.push_back(coords_derivation(m, n, layout, x));
  return out;
}

GottliebGroups gottlieb_groups(const Model& m) {
  GottliebGroups g;
  std::set<int> gen_degrees;
  for (size_t i = 0; i < m.size(); ++i) gen_degrees.insert(m.alg.degree(i));
  for (int n = 1; n <= m.bound(); ++n) g.dim[n] = 0;

  for (int n : gen_degrees) {
    std::vector<Unknown> layout = unknown_layout(m, n);
    size_t functional = 0;
    for (const auto& u : layout)
      if (m.alg.degree(u.gen) == n) ++functional;
    for (const auto& th : derivation_space(m, n)) {
      // The canonical basis is reduced, so the functional parts of the rows
      // with a functional-block pivot are dual to single generators.
      size_t pivot_gen = m.size();
      size_t funcs_seen = 0;
      for (size_t k = 0; k < layout.size() && k < functional; ++k) {
        const Element& val = th.val[layout[k].gen];
        auto it = val.t.find(mono_one());
        if (it != val.t.end() && it->second != 0) {
          ++funcs_seen;
          if (pivot_gen == m.size() && it->second == 1) pivot_gen = layout[k].gen;
        }
      }
      if (funcs_seen == 0) continue;  // zero functional part: not Gottlieb
      assert(pivot_gen != m.size());
      g.dim[n] += 1;
      g.basis.push_back({n, pivot_gen, th});
    }
  }
  std::sort(g.basis.begin(), g.basis.end(), [](const auto& a, const auto& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.pivot < b.pivot;
  });
  return g;
}

std::vector<int> even_gottlieb_degrees(const GottliebGroups& g) {
  std::vector<int> bad;
  for (const auto& [n, dim] : g.dim)
    if (n % 2 == 0 && dim > 0) bad.push_back(n);
  return bad;
}

bool verify_normalization(const Model& m, const std::vector<size_t>& v,
                          const std::vector<size_t>& z,
                          const std::vector<Derivation>& theta, std::string* why) {
  std::set<uint32_t> zset;
  for (size_t g : z) zset.insert(static_cast<uint32_t>(g));
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (size_t i = 0; i < theta.size(); ++i) {
    int ni = -theta[i].degree;
    for (size_t j = 0; j < v.size(); ++j) {
      const Element& val = theta[i].val[v[j]];
      if (m.alg.degree(v[j]) == ni) {
        Element want = (i == j) ? el_one() : el_zero();
        if (!(val == want))
          return fail("theta_" + std::to_string(i + 1) + "(" + m.gen(v[j]).name +
                      ") = " + el_str(m.alg, val) + ", expected " +
                      el_str(m.alg, want));
      } else if (j > i && !in_ideal(val, zset)) {
        return fail("theta_" + std::to_string(i + 1) + "(" + m.gen(v[j]).name +
                    ") = " + el_str(m.alg, val) + " escapes the ideal (Z)");
      }
    }
    for (size_t g : z)
      if (!in_ideal(theta[i].val[g], zset))
        return fail("theta_" + std::to_string(i + 1) + "(" + m.gen(g).name + ") = " +
                    el_str(m.alg, theta[i].val[g]) + " escapes the ideal (Z)");
  }
  return true;
}

NormalizedModel normalize_gottlieb(ModelPtr m) {
  GottliebGroups g = gottlieb_groups(*m);
  auto evens = even_gottlieb_degrees(g);
  if (!evens.empty()) {
    NormalizedModel out;
    out.original = m;
    std::ostringstream os;
    os << "nonzero even Gottlieb group in degree";
    for (int n : evens) os << " " << n;
    os << "; normalization needs an odd-only total Gottlieb group";
    out.failure = os.str();
    return out;
  }
  return normalize_gottlieb(m, g.basis);
}

NormalizedModel normalize_gottlieb(ModelPtr m, const std::vector<GottliebElement>& basis) {
  NormalizedModel out;
  out.original = m;

  // Step 1: linear change splitting the generators into the Gottlieb pivots V
  // and the common kernel Z of the functionals.
  std::vector<GeneratorSpec> specs(m->size());
  std::map<int, std::vector<size_t>> entries_by_deg;
  for (size_t i = 0; i < basis.size(); ++i) entries_by_deg[basis[i].degree].push_back(i);

  std::set<size_t> pivots;
  for (const auto& e : basis) pivots.insert(e.pivot);
  for (size_t g = 0; g < m->size(); ++g)
    specs[g] = {m->gen(g).name, el_gen(static_cast<uint32_t>(g))};

  for (const auto& [n, idxs] : entries_by_deg) {
    std::vector<size_t> gens_n;
    for (size_t g = 0; g < m->size(); ++g)
      if (m->alg.degree(g) == n) gens_n.push_back(g);
    QMatrix f(idxs.size(), gens_n.size());
    for (size_t r = 0; r < idxs.size(); ++r)
      for (size_t cidx = 0; cidx < gens_n.size(); ++cidx) {
        const Element& val = basis[idxs[r]].theta.val[gens_n[cidx]];
        auto it = val.t.find(mono_one());
        if (it != val.t.end()) f.at(r, cidx) = it->second;
      }
    std::vector<QVec> kern = kernel_basis(f);
    // Free-column convention: kernel vector k has a unit coordinate at its
    // free generator; that generator donates its name and its spec.
    std::set<size_t> named;
    for (const auto& k : kern) {
      size_t unit = gens_n.size();
      Element val;
      for (size_t cidx = 0; cidx < gens_n.size(); ++cidx) {
        if (k[cidx] == 0) continue;
        if (k[cidx] == 1 && unit == gens_n.size() && !pivots.count(gens_n[cidx]) &&
            !named.count(gens_n[cidx]))
          unit = gens_n[cidx];
        add_term(val, mono_gen(static_cast<uint32_t>(gens_n[cidx])), k[cidx]);
      }
      assert(unit != gens_n.size());
      named.insert(unit);
      specs[unit] = {m->gen(unit).name, std::move(val)};
    }
  }

  std::vector<GeneratorSpec> ordered;
  for (size_t i : m->alg.declaration_order()) ordered.push_back(specs[i]);
  GeneratorChange ch = change_of_generators(m, ordered);
  std::vector<Derivation> theta;
  for (const auto& e : basis) theta.push_back(transport_derivation(ch, e.theta));

  auto refind = [&](ModelPtr cur) {
    std::vector<size_t> v, z;
    std::set<size_t> vset;
    for (const auto& e : basis) {
      size_t id = *cur->alg.find(m->gen(e.pivot).name);
      v.push_back(id);
      vset.insert(id);
    }
    for (size_t g = 0; g < cur->size(); ++g)
      if (!vset.count(g)) z.push_back(g);
    return std::make_pair(v, z);
  };
  auto [v, z] = refind(ch.model);

  // Step 2: substitution passes.  Pass k removes the pure-V words of length k
  // from theta_j(z) whenever every V-factor sits strictly before v_j; the
  // hypotheses make all other pure-V words vanish, which the final
  // verification checks.
  size_t r = basis.size();
  for (size_t pass = 1; pass <= r && r > 0; ++pass) {
    std::set<uint32_t> vset;
    std::map<uint32_t, size_t> vpos;
    for (size_t j = 0; j < v.size(); ++j) {
      vset.insert(static_cast<uint32_t>(v[j]));
      vpos[static_cast<uint32_t>(v[j])] = j;
    }
    ModelPtr cur = ch.model;
    std::vector<GeneratorSpec> pass_specs(cur->size());
    for (size_t g = 0; g < cur->size(); ++g)
      pass_specs[g] = {cur->gen(g).name, el_gen(static_cast<uint32_t>(g))};
    bool any = false;
    for (size_t zz : z) {
      Element corr;
      for (size_t j = 0; j < theta.size(); ++j) {
        for (const auto& [mono, coef] : theta[j].val[zz].t) {
          if (mono.word_length() != pass || mono.is_one()) continue;
          bool pure = true;
          size_t top = 0;
          for (const auto& [gg, ee] : mono.f) {
            if (!vset.count(gg)) {
              pure = false;
              break;
            }
            top = std::max(top, vpos[gg]);
          }
          if (!pure || top >= j) continue;
          corr = add(corr, scale(coef, mul(cur->alg, el_gen(static_cast<uint32_t>(v[j])),
                                           el_mono(mono))));
        }
      }
      if (!corr.is_zero()) {
        any = true;
        pass_specs[zz].value = sub(pass_specs[zz].value, corr);
      }
    }
    if (!any) continue;
    std::vector<GeneratorSpec> pass_ordered;
    for (size_t i : cur->alg.declaration_order()) pass_ordered.push_back(pass_specs[i]);
    GeneratorChange step = change_of_generators(cur, pass_ordered);
    for (auto& th : theta) th = transport_derivation(step, th);
    ch = GeneratorChange{step.model, compose(ch.to_old, step.to_old),
                         compose(step.from_old, ch.from_old)};
    std::tie(v, z) = refind(ch.model);
  }

  out.change = ch;
  out.v = v;
  out.z = z;
  out.theta = theta;
  out.conditions_verified =
      verify_normalization(*ch.model, v, z, theta, &out.failure);
  return out;
}

}  // namespace sullivan
