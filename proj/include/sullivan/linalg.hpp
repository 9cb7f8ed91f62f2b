#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

namespace sullivan {

using Q = mpq_class;
using QVec = std::vector<Q>;

// Dense rational matrix, row-major.  All algorithms below are deterministic:
// pivots are always chosen as the first nonzero entry scanning rows top-down
// within a column, columns left to right, so every basis this module returns
// is canonical for its input.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Q& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Q& at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  QVec row(size_t i) const;
  void set_row(size_t i, const QVec& v);

  bool operator==(const QMatrix& o) const = default;

  static QMatrix from_rows(const std::vector<QVec>& rows, size_t cols);
  static QMatrix from_cols(const std::vector<QVec>& cols, size_t rows);

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Q> a_;
};

// In-place reduced row echelon form; returns the pivot column indices in
// increasing order.  Zero rows end up at the bottom.
std::vector<size_t> rref(QMatrix& m);

size_t rank(QMatrix m);

// Basis of { x : A x = 0 } using the standard free-column convention: one
// vector per non-pivot column j, with x[j] = 1 and the pivot coordinates
// filled from the reduced rows.  Canonical given A.
std::vector<QVec> kernel_basis(const QMatrix& a);

// One solution of A x = b, if any.  Combine with kernel_basis for all of them.
std::optional<QVec> solve(const QMatrix& a, const QVec& b);

// Canonical basis of the column space: RREF rows of the transpose, i.e. the
// unique reduced generating set.  Returned as vectors of length a.rows().
std::vector<QVec> image_basis(const QMatrix& a);

// Canonical basis of span(rows).
std::vector<QVec> row_space_basis(const std::vector<QVec>& rows, size_t dim);

bool span_contains(const std::vector<QVec>& span, const QVec& v);
bool spans_equal(const std::vector<QVec>& a, const std::vector<QVec>& b, size_t dim);

// Representatives of span(ambient)/span(sub), assuming sub ⊆ span(ambient):
// the rows of rref(ambient) whose pivot column is not a pivot column of
// rref(sub), each reduced modulo rref(sub).  Canonical, and independent of
// the presentation of either span.
std::vector<QVec> quotient_basis(const std::vector<QVec>& sub,
                                 const std::vector<QVec>& ambient, size_t dim);

}  // namespace sullivan
