#include "sullivan/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace sullivan {

Algebra Algebra::make(std::vector<std::pair<std::string, int>> decl, int bound) {
  Algebra a;
  int max_deg = 0;
  std::set<std::string> seen;
  for (size_t i = 0; i < decl.size(); ++i) {
    const auto& [name, deg] = decl[i];
    if (deg < 1)
      throw std::invalid_argument("generator '" + name + "' has degree < 1");
    if (!seen.insert(name).second)
      throw std::invalid_argument("duplicate generator '" + name + "'");
    a.gens_.push_back({name, deg, static_cast<int>(i)});
    max_deg = std::max(max_deg, deg);
  }
  if (bound < max_deg)
    throw std::invalid_argument("degree bound " + std::to_string(bound) +
                                " below top generator degree " + std::to_string(max_deg));
  std::stable_sort(a.gens_.begin(), a.gens_.end(), [](const auto& x, const auto& y) {
    return x.degree != y.degree ? x.degree < y.degree : x.decl_index < y.decl_index;
  });
  a.bound_ = bound;
  return a;
}

std::optional<size_t> Algebra::find(std::string_view name) const {
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return i;
  return std::nullopt;
}

std::vector<size_t> Algebra::declaration_order() const {
  std::vector<size_t> ids(gens_.size());
  for (size_t i = 0; i < gens_.size(); ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(),
            [&](size_t x, size_t y) { return gens_[x].decl_index < gens_[y].decl_index; });
  return ids;
}

bool Algebra::operator==(const Algebra& o) const {
  if (bound_ != o.bound_ || gens_.size() != o.gens_.size()) return false;
  for (size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name != o.gens_[i].name || gens_[i].degree != o.gens_[i].degree ||
        gens_[i].decl_index != o.gens_[i].decl_index)
      return false;
  return true;
}

bool Monomial::operator<(const Monomial& o) const {
  // Lexicographic on the expanded word g g g ... with lazy expansion.
  size_t i = 0, j = 0;
  uint32_t ri = 0, rj = 0;  // consumed repetitions of factor i / j
  while (i < f.size() && j < o.f.size()) {
    if (f[i].first != o.f[j].first) return f[i].first < o.f[j].first;
    uint32_t avail_i = f[i].second - ri, avail_j = o.f[j].second - rj;
    uint32_t step = std::min(avail_i, avail_j);
    ri += step;
    rj += step;
    if (ri == f[i].second) { ++i; ri = 0; }
    if (rj == o.f[j].second) { ++j; rj = 0; }
  }
  return i == f.size() && j != o.f.size();
}

size_t Monomial::word_length() const {
  size_t n = 0;
  for (const auto& [g, e] : f) n += e;
  return n;
}

int Monomial::degree(const Algebra& a) const {
  int d = 0;
  for (const auto& [g, e] : f) d += a.degree(g) * static_cast<int>(e);
  return d;
}

int Monomial::parity(const Algebra& a) const { return degree(a) % 2; }

uint32_t Monomial::exponent_of(uint32_t g) const {
  for (const auto& [h, e] : f)
    if (h == g) return e;
  return 0;
}

std::string Monomial::str(const Algebra& a) const {
  if (f.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, e] : f) {
    if (!first) os << " ";
    first = false;
    os << a.gen(g).name;
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

Monomial mono_one() { return {}; }

Monomial mono_gen(uint32_t g) {
  Monomial m;
  m.f.push_back({g, 1});
  return m;
}

std::optional<std::pair<Monomial, int>> mono_mul(const Algebra& a, const Monomial& x,
                                                 const Monomial& y) {
  Monomial r;
  r.f.reserve(x.f.size() + y.f.size());
  // Parity of the not-yet-consumed suffix of x, maintained as i advances.
  std::vector<int> suffix_par(x.f.size() + 1, 0);
  for (size_t i = x.f.size(); i > 0; --i) {
    const auto& [g, e] = x.f[i - 1];
    suffix_par[i - 1] = (suffix_par[i] + a.degree(g) * static_cast<int>(e)) % 2;
  }
  size_t i = 0, j = 0;
  int sign = 1;
  while (i < x.f.size() || j < y.f.size()) {
    bool take_y;
    if (i == x.f.size()) take_y = true;
    else if (j == y.f.size()) take_y = false;
    else take_y = y.f[j].first <= x.f[i].first;
    if (take_y) {
      const auto& [g, e] = y.f[j];
      int par_y = (a.degree(g) * static_cast<int>(e)) % 2;
      if (i < x.f.size() && x.f[i].first == g) {
        if (a.odd(g)) return std::nullopt;  // odd square
        // Crossing only the strictly-later factors of x.
        if (par_y && suffix_par[i + 1]) sign = -sign;
        r.f.push_back({g, x.f[i].second + e});
        ++i;
      } else {
        if (par_y && suffix_par[i]) sign = -sign;
        r.f.push_back({g, e});
      }
      ++j;
    } else {
      r.f.push_back(x.f[i]);
      ++i;
    }
  }
  // Merge duplicates produced when y's factor was pushed right before an
  // equal factor taken from x later -- cannot happen: equal ids merged above.
  return std::make_pair(std::move(r), sign);
}

std::optional<std::pair<Monomial, int>> normalize_word(const Algebra& a,
                                                       std::span<const uint32_t> word) {
  Monomial m;
  int sign = 1;
  for (uint32_t g : word) {
    auto p = mono_mul(a, m, mono_gen(g));
    if (!p) return std::nullopt;
    m = std::move(p->first);
    sign *= p->second;
  }
  return std::make_pair(std::move(m), sign);
}

Element el_zero() { return {}; }
Element el_one() { return el_const(Q(1)); }

Element el_const(const Q& c) {
  Element e;
  if (c != 0) e.t[mono_one()] = c;
  return e;
}

Element el_gen(uint32_t g) { return el_mono(mono_gen(g)); }

Element el_mono(Monomial m, Q c) {
  Element e;
  if (c != 0) e.t[std::move(m)] = std::move(c);
  return e;
}

void add_term(Element& e, Monomial m, const Q& c) {
  if (c == 0) return;
  auto it = e.t.find(m);
  if (it == e.t.end()) {
    e.t.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second == 0) e.t.erase(it);
  }
}

Element add(const Element& x, const Element& y) {
  Element r = x;
  r.truncated = x.truncated || y.truncated;
  for (const auto& [m, c] : y.t) add_term(r, m, c);
  return r;
}

Element sub(const Element& x, const Element& y) {
  Element r = x;
  r.truncated = x.truncated || y.truncated;
  for (const auto& [m, c] : y.t) add_term(r, m, Q(-c));
  return r;
}

Element scale(const Q& c, const Element& x) {
  Element r;
  r.truncated = x.truncated;
  if (c == 0) return r;
  for (const auto& [m, k] : x.t) r.t[m] = Q(c * k);
  return r;
}

Element mul(const Algebra& a, const Element& x, const Element& y) {
  Element r;
  r.truncated = x.truncated || y.truncated;
  for (const auto& [mx, cx] : x.t) {
    for (const auto& [my, cy] : y.t) {
      auto p = mono_mul(a, mx, my);
      if (!p) continue;
      if (p->first.degree(a) > a.bound()) {
        r.truncated = true;
        continue;
      }
      add_term(r, p->first, Q(cx * cy * p->second));
    }
  }
  return r;
}

Element el_pow(const Algebra& a, const Element& x, uint32_t n) {
  Element r = el_one();
  for (uint32_t i = 0; i < n; ++i) r = mul(a, r, x);
  return r;
}

std::set<int> degrees_of(const Algebra& a, const Element& e) {
  std::set<int> ds;
  for (const auto& [m, c] : e.t) ds.insert(m.degree(a));
  return ds;
}

std::optional<int> homogeneous_degree(const Algebra& a, const Element& e) {
  auto ds = degrees_of(a, e);
  if (ds.size() != 1) return std::nullopt;
  return *ds.begin();
}

Element word_length_part(const Element& e, size_t k) {
  Element r;
  r.truncated = e.truncated;
  for (const auto& [m, c] : e.t)
    if (m.word_length() == k) r.t[m] = c;
  return r;
}

Element word_length_min_part(const Element& e, size_t k) {
  Element r;
  r.truncated = e.truncated;
  for (const auto& [m, c] : e.t)
    if (m.word_length() >= k) r.t[m] = c;
  return r;
}

size_t factors_in(const Monomial& m, const std::set<uint32_t>& gens) {
  size_t n = 0;
  for (const auto& [g, e] : m.f)
    if (gens.count(g)) n += e;
  return n;
}

bool in_ideal(const Element& e, const std::set<uint32_t>& gens, size_t min_count) {
  for (const auto& [m, c] : e.t)
    if (factors_in(m, gens) < min_count) return false;
  return true;
}

namespace {
void basis_rec(const Algebra& a, size_t g, int remaining, Monomial& cur,
               std::vector<Monomial>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  if (g == a.size()) return;
  int d = a.degree(g);
  uint32_t max_e = a.odd(g) ? 1 : static_cast<uint32_t>(remaining / d);
  basis_rec(a, g + 1, remaining, cur, out);  // exponent 0
  for (uint32_t e = 1; e <= max_e && static_cast<int>(e) * d <= remaining; ++e) {
    cur.f.push_back({static_cast<uint32_t>(g), e});
    basis_rec(a, g + 1, remaining - static_cast<int>(e) * d, cur, out);
    cur.f.pop_back();
  }
}
}  // namespace

std::vector<Monomial> monomial_basis(const Algebra& a, int n) {
  std::vector<Monomial> out;
  if (n < 0) return out;
  if (n == 0) {
    out.push_back(mono_one());
    return out;
  }
  Monomial cur;
  basis_rec(a, 0, n, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

QVec element_coords(const Element& e, const std::map<Monomial, size_t>& index,
                    size_t dim) {
  QVec v(dim, Q(0));
  for (const auto& [m, c] : e.t) {
    auto it = index.find(m);
    assert(it != index.end() && "element outside the coordinate basis");
    v[it->second] = c;
  }
  return v;
}

Element coords_element(const QVec& v, const std::vector<Monomial>& basis) {
  Element e;
  for (size_t i = 0; i < basis.size(); ++i)
    if (v[i] != 0) e.t[basis[i]] = v[i];
  return e;
}

std::map<Monomial, size_t> basis_index(const std::vector<Monomial>& basis) {
  std::map<Monomial, size_t> idx;
  for (size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = i;
  return idx;
}

std::string el_str(const Algebra& a, const Element& e) {
  if (e.t.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : e.t) {
    Q coef = c;
    if (first) {
      if (coef < 0) {
        os << "-";
        coef = -coef;
      }
    } else {
      os << (coef < 0 ? " - " : " + ");
      if (coef < 0) coef = -coef;
    }
    first = false;
    if (m.is_one()) {
      os << coef.get_str();
    } else {
      if (coef != 1) os << coef.get_str() << " * ";
      os << m.str(a);
    }
  }
  return os.str();
}

}  // namespace sullivan
