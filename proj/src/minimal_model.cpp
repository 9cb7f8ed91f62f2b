#include "sullivan/minimal_model.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <stdexcept>

#include "sullivan/cohomology.hpp"
#include "sullivan/errors.hpp"

namespace sullivan {

namespace {

// Presented cohomology in one degree, kept in slice coordinates so closed
// vectors can be expressed in class coordinates afterwards.
struct AmbientCohomology {
  QuotientSlice here;
  std::vector<QVec> hbasis;  // class representatives
  std::vector<QVec> exact;   // image of d from one degree below
};

AmbientCohomology ambient_cohomology(const PresentedAlgebra& p, int n) {
  AmbientCohomology a;
  a.here = quotient_slice(p, n);
  QuotientSlice below = quotient_slice(p, n - 1);
  QuotientSlice above = quotient_slice(p, n + 1);
  std::vector<QVec> cocycles = kernel_basis(quotient_d_matrix(p, a.here, above));
  a.exact = image_basis(quotient_d_matrix(p, below, a.here));
  a.hbasis = quotient_basis(a.exact, cocycles, a.here.rep_cols.size());
  return a;
}

// Class coordinates of a closed slice vector: the hbasis part of a solution
// of [hbasis | exact] x = v.
QVec class_coords(const AmbientCohomology& a, const QVec& v) {
  std::vector<QVec> cols;
  cols.reserve(a.hbasis.size() + a.exact.size());
  for (const QVec& c : a.hbasis) cols.push_back(c);
  for (const QVec& c : a.exact) cols.push_back(c);
  std::optional<QVec> x =
      solve(QMatrix::from_cols(cols, a.here.rep_cols.size()), v);
  if (!x)
    throw std::logic_error("comparison image is not a quotient cocycle class");
  return QVec(x->begin(), x->begin() + a.hbasis.size());
}

// The ambient generator a class representative reduces to, when it is one:
// a single monomial, coefficient 1, one generator, exponent 1.
std::optional<uint32_t> plain_generator(const Element& e) {
  if (e.t.size() != 1) return std::nullopt;
  const auto& [m, c] = *e.t.begin();
  if (c != 1 || m.f.size() != 1 || m.f[0].second != 1) return std::nullopt;
  return m.f[0].first;
}

}  // namespace

MinimalModelResult minimal_model_up_to_degree(const PresentedAlgebra& p0,
                                              int max_degree) {
  if (max_degree < 1)
    throw std::invalid_argument("max_degree must be at least 1");
  for (size_t i = 0; i < p0.alg.size(); ++i)
    if (p0.alg.gen(i).degree == 1)
      throw std::invalid_argument(
          "presentation has the degree-1 generator '" + p0.alg.gen(i).name +
          "'; only simply connected presentations are supported");
  PresentedValidation pv = validate_presented(p0);
  if (!pv.valid)
    throw std::invalid_argument("presentation is not a valid cdga: " +
                                pv.problems.front());

  const int N = max_degree;
  int need = N + 2;
  for (const Element& r : p0.rel)
    need = std::max(need, *degrees_of(p0.alg, r).begin());
  PresentedAlgebra p = with_bound(p0, need);
  ModelPtr ambient = ambient_model(p);

  // The growing model.  Generators are appended in nondecreasing degree, so
  // the sorted order of the rebuilt algebra keeps every existing id stable
  // and the recorded d-values and rho images stay valid verbatim.
  std::vector<std::pair<std::string, int>> decl;
  std::vector<Element> dval;
  std::vector<Element> rho;

  auto rebuild = [&]() {
    ModelPtr m = make_model(p.name + "_minimal", Algebra::make(decl, N + 2), dval);
    for (size_t i = 0; i < decl.size(); ++i)
      assert(m->alg.gen(i).name == decl[i].first &&
             "generator ids drifted across rebuild");
    return m;
  };
  ModelPtr cur = rebuild();

  auto rho_of = [&](const Element& e) {
    Morphism f{cur, ambient, rho};
    return apply_morphism(f, e);
  };
  auto fresh_name = [&](int degree, const Element& image) {
    std::string name;
    if (auto g = plain_generator(image)) name = p.alg.gen(*g).name;
    if (name.empty()) {
      size_t k = 0;
      for (const auto& [nm, dg] : decl)
        if (dg == degree) ++k;
      name = "v" + std::to_string(degree) + "_" + std::to_string(k);
    }
    auto taken = [&](const std::string& s) {
      return std::any_of(decl.begin(), decl.end(),
                         [&](const auto& g) { return g.first == s; });
    };
    while (taken(name)) name += "_";
    return name;
  };

  for (int n = 2; n <= N; ++n) {
    // Add closed generators until the comparison map hits every degree-n
    // class of the presented algebra.
    AmbientCohomology ha = ambient_cohomology(p, n);
    if (!ha.hbasis.empty()) {
      std::vector<QVec> image;
      for (const Element& rep : cohomology(*cur, n).reps)
        image.push_back(class_coords(ha, reduce_mod_ideal(ha.here, rho_of(rep))));
      bool added = false;
      for (size_t k = 0; k < ha.hbasis.size(); ++k) {
        QVec unit(ha.hbasis.size(), Q(0));
        unit[k] = Q(1);
        if (span_contains(image, unit)) continue;
        Element target = slice_element(ha.here, ha.hbasis[k]);
        decl.emplace_back(fresh_name(n, target), n);
        dval.push_back(el_zero());
        rho.push_back(target);
        image.push_back(unit);
        added = true;
      }
      if (added) cur = rebuild();
    }

    // Kill the kernel of the comparison map one degree up: every model
    // class that dies in the quotient gains a degree-n generator whose
    // differential is that cocycle, with rho assigned a d-primitive of its
    // image so the chain condition survives.
    AmbientCohomology ha1 = ambient_cohomology(p, n + 1);
    Cohomology hm1 = cohomology(*cur, n + 1);
    if (hm1.reps.empty()) continue;
    std::vector<QVec> cols;
    for (const Element& rep : hm1.reps)
      cols.push_back(class_coords(ha1, reduce_mod_ideal(ha1.here, rho_of(rep))));
    std::vector<QVec> kernel =
        kernel_basis(QMatrix::from_cols(cols, ha1.hbasis.size()));
    if (kernel.empty()) continue;
    QuotientSlice sn = quotient_slice(p, n);
    QMatrix dn = quotient_d_matrix(p, sn, ha1.here);
    for (const QVec& kappa : kernel) {
      Element z = el_zero();
      for (size_t j = 0; j < kappa.size(); ++j)
        if (kappa[j] != 0) z = add(z, scale(kappa[j], hm1.reps[j]));
      std::optional<QVec> x = solve(dn, reduce_mod_ideal(ha1.here, rho_of(z)));
      if (!x)
        throw std::logic_error("kernel class image has no quotient primitive");
      decl.emplace_back(fresh_name(n, el_zero()), n);
      dval.push_back(z);
      rho.push_back(slice_element(sn, *x));
    }
    cur = rebuild();
  }

  ValidationReport mv = validate_model(*cur);
  if (!mv.valid)
    throw std::logic_error("constructed model failed validation: " +
                           mv.violations.front().detail);
  return MinimalModelResult{cur, ambient, rho, N};
}

Element rho_image(const MinimalModelResult& r, const Element& e) {
  Morphism f{r.model, r.ambient, r.rho};
  return apply_morphism(f, e);
}

}  // namespace sullivan
