#include "sullivan/presented.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include "sullivan/errors.hpp"

namespace sullivan {

namespace {

// Degree of a homogeneous element, -1 for zero; throws naming the offender
// otherwise.
int homogeneous_or_throw(const Algebra& a, const Element& e, const std::string& what) {
  std::set<int> degs = degrees_of(a, e);
  if (degs.empty()) return -1;
  if (degs.size() > 1)
    throw std::invalid_argument(what + " is not homogeneous");
  return *degs.begin();
}

std::vector<std::pair<std::string, int>> decl_of(const Algebra& a) {
  std::vector<std::pair<std::string, int>> decl;
  decl.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    decl.emplace_back(a.gen(i).name, a.gen(i).degree);
  return decl;
}

int max_gen_degree(const Algebra& a) {
  int deg = 1;
  for (size_t i = 0; i < a.size(); ++i) deg = std::max(deg, a.gen(i).degree);
  return deg;
}

}  // namespace

PresentedAlgebra make_presented(std::string name, Algebra alg,
                                std::vector<Element> rel,
                                std::vector<Element> d) {
  for (size_t r = 0; r < rel.size(); ++r) {
    int deg = homogeneous_or_throw(alg, rel[r], "relation " + std::to_string(r));
    if (deg < 0)
      throw std::invalid_argument("relation " + std::to_string(r) + " is zero");
    if (deg < 2)
      throw std::invalid_argument("relation " + std::to_string(r) +
                                  " has degree " + std::to_string(deg) +
                                  "; relations must have degree >= 2");
    if (deg > alg.bound())
      throw std::invalid_argument("relation " + std::to_string(r) +
                                  " exceeds the ambient degree bound");
  }
  if (d.empty()) d.assign(alg.size(), el_zero());
  if (d.size() != alg.size())
    throw std::invalid_argument("expected one differential value per generator");
  for (size_t i = 0; i < alg.size(); ++i) {
    int deg = homogeneous_or_throw(alg, d[i], "d(" + alg.gen(i).name + ")");
    if (deg >= 0 && deg != alg.gen(i).degree + 1)
      throw std::invalid_argument("d(" + alg.gen(i).name + ") has degree " +
                                  std::to_string(deg) + ", expected " +
                                  std::to_string(alg.gen(i).degree + 1));
  }
  return PresentedAlgebra{std::move(name), std::move(alg), std::move(rel),
                          std::move(d)};
}

PresentedAlgebra with_bound(const PresentedAlgebra& p, int bound) {
  PresentedAlgebra q = p;
  q.alg = Algebra::make(decl_of(p.alg), std::max(bound, max_gen_degree(p.alg)));
  return q;
}

ModelPtr ambient_model(const PresentedAlgebra& p) {
  return make_model(p.name + "_ambient", p.alg, p.d);
}

std::vector<Element> ideal_slice(const PresentedAlgebra& p, int n) {
  std::vector<Element> out;
  if (n > p.alg.bound())
    throw bound_error("ideal slice " + std::to_string(n) +
                      " is above the ambient bound " + std::to_string(p.alg.bound()));
  for (const Element& r : p.rel) {
    int deg = *degrees_of(p.alg, r).begin();
    if (deg > n) continue;
    for (const Monomial& m : monomial_basis(p.alg, n - deg))
      out.push_back(mul(p.alg, el_mono(m), r));
  }
  return out;
}

QuotientSlice quotient_slice(const PresentedAlgebra& p, int n) {
  QuotientSlice s;
  s.degree = n;
  s.ambient = monomial_basis(p.alg, n);
  std::map<Monomial, size_t> index = basis_index(s.ambient);
  std::vector<QVec> rows;
  for (const Element& e : ideal_slice(p, n))
    if (!e.is_zero()) rows.push_back(element_coords(e, index, s.ambient.size()));
  QMatrix m = QMatrix::from_rows(rows, s.ambient.size());
  std::vector<size_t> pivots = rref(m);
  for (size_t r = 0; r < pivots.size(); ++r) {
    QVec row(s.ambient.size());
    for (size_t j = 0; j < s.ambient.size(); ++j) row[j] = m.at(r, j);
    s.ideal_rref.push_back(std::move(row));
  }
  s.ideal_pivots = pivots;
  for (size_t j = 0; j < s.ambient.size(); ++j)
    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end())
      s.rep_cols.push_back(j);
  return s;
}

QVec reduce_mod_ideal(const QuotientSlice& s, const Element& e) {
  std::map<Monomial, size_t> index = basis_index(s.ambient);
  QVec v = element_coords(e, index, s.ambient.size());
  for (size_t r = 0; r < s.ideal_rref.size(); ++r) {
    Q c = v[s.ideal_pivots[r]];
    if (c == 0) continue;
    for (size_t j = 0; j < v.size(); ++j) v[j] -= Q(c * s.ideal_rref[r][j]);
  }
  QVec out(s.rep_cols.size());
  for (size_t k = 0; k < s.rep_cols.size(); ++k) out[k] = v[s.rep_cols[k]];
  return out;
}

Element slice_element(const QuotientSlice& s, const QVec& coords) {
  assert(coords.size() == s.rep_cols.size());
  Element e;
  for (size_t k = 0; k < coords.size(); ++k)
    if (coords[k] != 0) e = add(e, el_mono(s.ambient[s.rep_cols[k]], coords[k]));
  return e;
}

size_t quotient_dim(const PresentedAlgebra& p, int n) {
  if (n == 0) return 1;
  return quotient_slice(p, n).rep_cols.size();
}

QMatrix quotient_d_matrix(const PresentedAlgebra& p, const QuotientSlice& from,
                          const QuotientSlice& to) {
  assert(to.degree == from.degree + 1);
  ModelPtr shell = ambient_model(p);
  std::vector<QVec> cols;
  for (size_t j : from.rep_cols) {
    Element de = apply_d(*shell, el_mono(from.ambient[j]));
    if (de.truncated)
      throw bound_error("differential overflow above ambient bound " +
                        std::to_string(p.alg.bound()));
    cols.push_back(reduce_mod_ideal(to, de));
  }
  return QMatrix::from_cols(cols, to.rep_cols.size());
}

PresentedCohomology presented_cohomology(const PresentedAlgebra& p, int n) {
  PresentedCohomology h;
  h.degree = n;
  if (n < 0) return h;
  if (n == 0) {
    // No degree-0 generators exist, so the slice is the span of 1 and the
    // differential out of it vanishes.
    h.reps.push_back(el_one());
    return h;
  }
  if (n + 1 > p.alg.bound())
    throw bound_error("cohomology of a presented algebra in degree " +
                      std::to_string(n) + " needs ambient bound " +
                      std::to_string(n + 1));
  QuotientSlice below = quotient_slice(p, n - 1);
  QuotientSlice here = quotient_slice(p, n);
  QuotientSlice above = quotient_slice(p, n + 1);
  QMatrix dn = quotient_d_matrix(p, here, above);
  QMatrix dprev = quotient_d_matrix(p, below, here);
  std::vector<QVec> cocycles = kernel_basis(dn);
  std::vector<QVec> exact = image_basis(dprev);
  for (const QVec& v : quotient_basis(exact, cocycles, here.rep_cols.size()))
    h.reps.push_back(slice_element(here, v));
  return h;
}

size_t presented_betti(const PresentedAlgebra& p, int n) {
  return presented_cohomology(p, n).reps.size();
}

PresentedValidation validate_presented(const PresentedAlgebra& p) {
  PresentedValidation v;
  int need = max_gen_degree(p.alg) + 2;
  for (const Element& r : p.rel)
    need = std::max(need, *degrees_of(p.alg, r).begin() + 1);
  PresentedAlgebra q = with_bound(p, need);
  ModelPtr shell = ambient_model(q);

  // d must send each relation into the ideal, so it descends to the quotient.
  for (size_t r = 0; r < q.rel.size(); ++r) {
    Element dr = apply_d(*shell, q.rel[r]);
    if (dr.is_zero()) continue;
    int deg = *degrees_of(q.alg, dr).begin();
    QVec red = reduce_mod_ideal(quotient_slice(q, deg), dr);
    if (std::any_of(red.begin(), red.end(), [](const Q& c) { return c != 0; })) {
      v.valid = false;
      v.problems.push_back("d of relation " + std::to_string(r) +
                           " is not in the relation ideal");
    }
  }

  // d^2 must vanish in the quotient.
  for (size_t i = 0; i < q.alg.size(); ++i) {
    Element dd = apply_d(*shell, q.d[i]);
    if (dd.is_zero()) continue;
    int deg = *degrees_of(q.alg, dd).begin();
    QVec red = reduce_mod_ideal(quotient_slice(q, deg), dd);
    if (std::any_of(red.begin(), red.end(), [](const Q& c) { return c != 0; })) {
      v.valid = false;
      v.problems.push_back("d(d(" + q.alg.gen(i).name +
                           ")) is nonzero in the quotient");
    }
  }
  return v;
}

}  // namespace sullivan
