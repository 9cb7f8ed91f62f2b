#pragma once

#include "sullivan/linalg.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sullivan {

struct Generator {
  std::string name;
  int degree = 0;      // always >= 1
  int decl_index = 0;  // position in the declaration order, kept for printing
};

// The free graded-commutative algebra Lambda(V) on a finite set of
// generators, together with the degree bound past which products are
// truncated.  Generators are stored sorted by (degree, decl_index); the index
// into that order is the canonical generator id used by monomials, by
// nilpotence checks ("earlier generators only") and by every triangularity
// convention in the library.
class Algebra {
 public:
  Algebra() = default;

  // `decl` in declaration order.  Throws std::invalid_argument on duplicate
  // names, degrees < 1, or bound < max degree.
  static Algebra make(std::vector<std::pair<std::string, int>> decl, int bound);

  size_t size() const { return gens_.size(); }
  const Generator& gen(size_t i) const { return gens_[i]; }
  int degree(size_t i) const { return gens_[i].degree; }
  bool odd(size_t i) const { return gens_[i].degree % 2 != 0; }
  int bound() const { return bound_; }
  std::optional<size_t> find(std::string_view name) const;

  // Generator ids in declaration order (for serialization).
  std::vector<size_t> declaration_order() const;

  bool operator==(const Algebra& o) const;

 private:
  std::vector<Generator> gens_;
  int bound_ = 0;
};

// A product of generator powers, factors sorted by generator id, exponents
// >= 1, odd generators never exceeding exponent 1.  The empty monomial is 1.
struct Monomial {
  std::vector<std::pair<uint32_t, uint32_t>> f;  // (generator id, exponent)

  bool operator==(const Monomial& o) const = default;
  // Total order: lexicographic on the expanded generator word, prefixes first.
  bool operator<(const Monomial& o) const;

  bool is_one() const { return f.empty(); }
  size_t word_length() const;
  int degree(const Algebra& a) const;
  int parity(const Algebra& a) const;
  uint32_t exponent_of(uint32_t g) const;
  std::string str(const Algebra& a) const;
};

Monomial mono_one();
Monomial mono_gen(uint32_t g);

// Product of two sorted monomials with the Koszul sign; nullopt when an odd
// generator would square to zero.
std::optional<std::pair<Monomial, int>> mono_mul(const Algebra& a, const Monomial& x,
                                                 const Monomial& y);

// Sorts an arbitrary generator word into a monomial, tracking the sign.
std::optional<std::pair<Monomial, int>> normalize_word(const Algebra& a,
                                                       std::span<const uint32_t> word);

// A finite Q-linear combination of monomials.  `truncated` records that some
// product overflowed the algebra's degree bound and was dropped, so results
// above the bound must not be trusted.
struct Element {
  std::map<Monomial, Q> t;
  bool truncated = false;

  bool is_zero() const { return t.empty(); }
  bool operator==(const Element& o) const { return t == o.t; }
};

Element el_zero();
Element el_one();
Element el_const(const Q& c);
Element el_gen(uint32_t g);
Element el_mono(Monomial m, Q c = Q(1));

void add_term(Element& e, Monomial m, const Q& c);
Element add(const Element& x, const Element& y);
Element sub(const Element& x, const Element& y);
Element scale(const Q& c, const Element& x);
Element mul(const Algebra& a, const Element& x, const Element& y);
Element el_pow(const Algebra& a, const Element& x, uint32_t n);

// Degrees of the monomials present (constants count as degree 0).
std::set<int> degrees_of(const Algebra& a, const Element& e);
// Degree if the element is homogeneous (zero -> nullopt counts as any degree).
std::optional<int> homogeneous_degree(const Algebra& a, const Element& e);

// The part of e spanned by monomials whose word length is exactly / at least k.
Element word_length_part(const Element& e, size_t k);
Element word_length_min_part(const Element& e, size_t k);

// Number of factors of m (with multiplicity) drawn from `gens`.
size_t factors_in(const Monomial& m, const std::set<uint32_t>& gens);
// True if every monomial of e has at least `min_count` factors from `gens`.
bool in_ideal(const Element& e, const std::set<uint32_t>& gens, size_t min_count = 1);

// All monomials of the given degree, sorted in canonical order.
std::vector<Monomial> monomial_basis(const Algebra& a, int n);

// Coordinates of a homogeneous element in a monomial basis (index map).
QVec element_coords(const Element& e, const std::map<Monomial, size_t>& index,
                    size_t dim);
Element coords_element(const QVec& v, const std::vector<Monomial>& basis);
std::map<Monomial, size_t> basis_index(const std::vector<Monomial>& basis);

std::string el_str(const Algebra& a, const Element& e);

}  // namespace sullivan
