#include "sullivan/cohomology.hpp"

#include "sullivan/errors.hpp"

#include <cassert>
#include <stdexcept>

namespace sullivan {

QMatrix d_matrix(const Model& m, int n) {
  if (n >= m.bound())
    throw bound_error("degree " + std::to_string(n) + " not certified by bound " +
                      std::to_string(m.bound()));
  std::vector<Monomial> dom = monomial_basis(m.alg, n);
  std::vector<Monomial> cod = monomial_basis(m.alg, n + 1);
  auto idx = basis_index(cod);
  QMatrix a(cod.size(), dom.size());
  for (size_t j = 0; j < dom.size(); ++j) {
    Element dm = apply_d(m, el_mono(dom[j]));
    assert(!dm.truncated && "d image exceeds the bound");
    for (const auto& [mono, c] : dm.t) a.at(idx.at(mono), j) = c;
  }
  return a;
}

std::vector<Element> cocycle_basis(const Model& m, int n) {
  auto basis = monomial_basis(m.alg, n);
  std::vector<Element> out;
  for (const auto& v : kernel_basis(d_matrix(m, n))) out.push_back(coords_element(v, basis));
  return out;
}

std::vector<Element> coboundary_basis(const Model& m, int n) {
  std::vector<Element> out;
  if (n == 0) return out;
  auto basis = monomial_basis(m.alg, n);
  for (const auto& v : image_basis(d_matrix(m, n - 1)))
    out.push_back(coords_element(v, basis));
  return out;
}

Cohomology cohomology(const Model& m, int n) {
  auto basis = monomial_basis(m.alg, n);
  std::vector<QVec> cocycles = kernel_basis(d_matrix(m, n));
  std::vector<QVec> bounds;
  if (n > 0) bounds = image_basis(d_matrix(m, n - 1));
  Cohomology h;
  h.degree = n;
  for (const auto& v : quotient_basis(bounds, cocycles, basis.size()))
    h.reps.push_back(coords_element(v, basis));
  return h;
}

size_t betti(const Model& m, int n) { return cohomology(m, n).reps.size(); }

int certified_degree(const Model& m) { return m.bound() - 1; }

std::vector<size_t> betti_range(const Model& m, int up_to) {
  std::vector<size_t> b;
  for (int n = 0; n <= up_to; ++n) b.push_back(betti(m, n));
  return b;
}

QVec class_coordinates(const Model& m, int n, const Element& z) {
  if (!apply_d(m, z).is_zero())
    throw std::invalid_argument("class coordinates of a non-cocycle");
  auto basis = monomial_basis(m.alg, n);
  auto idx = basis_index(basis);
  Cohomology h = cohomology(m, n);
  std::vector<QVec> cols;
  for (const auto& rep : h.reps) cols.push_back(element_coords(rep, idx, basis.size()));
  size_t nreps = cols.size();
  if (n > 0)
    for (const auto& b : image_basis(d_matrix(m, n - 1))) cols.push_back(b);
  QVec target = element_coords(z, idx, basis.size());
  if (cols.empty()) {
    // H^n = 0 and no boundaries: z must be zero.
    return {};
  }
  auto x = solve(QMatrix::from_cols(cols, basis.size()), target);
  assert(x && "cocycle failed to reduce against representatives and boundaries");
  return QVec(x->begin(), x->begin() + static_cast<long>(nreps));
}

QMatrix induced_map_matrix(const Morphism& f, int n) {
  Cohomology hs = cohomology(*f.src, n);
  size_t rows = betti(*f.dst, n);
  QMatrix out(rows, hs.reps.size());
  for (size_t j = 0; j < hs.reps.size(); ++j) {
    Element img = apply_morphism(f, hs.reps[j]);
    QVec cls = class_coordinates(*f.dst, n, img);
    assert(cls.size() == rows || (cls.empty() && rows == 0));
    for (size_t i = 0; i < cls.size(); ++i) out.at(i, j) = cls[i];
  }
  return out;
}

EulerReport euler_characteristic(const Model& m, int window) {
  EulerReport rep;
  rep.window = window;
  rep.certified = certified_degree(m);
  rep.betti = betti_range(m, rep.certified);
  for (int n = 0; n <= rep.certified; ++n) {
    long long b = static_cast<long long>(rep.betti[static_cast<size_t>(n)]);
    rep.chi += (n % 2 == 0) ? b : -b;
  }
  rep.stable = rep.certified >= window;
  for (int n = rep.certified - window + 1; rep.stable && n <= rep.certified; ++n)
    rep.stable = rep.betti[static_cast<size_t>(n)] == 0;
  return rep;
}

}  // namespace sullivan
