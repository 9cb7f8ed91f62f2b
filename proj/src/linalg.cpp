#include "sullivan/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace sullivan {

QVec QMatrix::row(size_t i) const {
  QVec v(cols_);
  for (size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

void QMatrix::set_row(size_t i, const QVec& v) {
  assert(v.size() == cols_);
  for (size_t j = 0; j < cols_; ++j) at(i, j) = v[j];
}

QMatrix QMatrix::from_rows(const std::vector<QVec>& rows, size_t cols) {
  QMatrix m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

QMatrix QMatrix::from_cols(const std::vector<QVec>& cols, size_t rows) {
  QMatrix m(rows, cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    assert(cols[j].size() == rows);
    for (size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

std::vector<size_t> rref(QMatrix& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t p = r;
    while (p < m.rows() && m.at(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(r, j));
    Q inv = 1 / m.at(r, c);
    for (size_t j = c; j < m.cols(); ++j) m.at(r, j) = Q(m.at(r, j) * inv);
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Q f = m.at(i, c);
      for (size_t j = c; j < m.cols(); ++j)
        m.at(i, j) = Q(m.at(i, j) - f * m.at(r, j));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(QMatrix m) { return rref(m).size(); }

std::vector<QVec> kernel_basis(const QMatrix& a) {
  QMatrix m = a;
  std::vector<size_t> piv = rref(m);
  std::set<size_t> pivset(piv.begin(), piv.end());
  std::vector<QVec> basis;
  for (size_t j = 0; j < a.cols(); ++j) {
    if (pivset.count(j)) continue;
    QVec v(a.cols(), Q(0));
    v[j] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = Q(-m.at(i, j));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVec> solve(const QMatrix& a, const QVec& b) {
  assert(b.size() == a.rows());
  QMatrix m(a.rows(), a.cols() + 1);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    m.at(i, a.cols()) = b[i];
  }
  std::vector<size_t> piv = rref(m);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  QVec x(a.cols(), Q(0));
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = m.at(i, a.cols());
  return x;
}

std::vector<QVec> image_basis(const QMatrix& a) {
  QMatrix t(a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
  size_t nr = rref(t).size();
  std::vector<QVec> basis;
  for (size_t i = 0; i < nr; ++i) basis.push_back(t.row(i));
  return basis;
}

std::vector<QVec> row_space_basis(const std::vector<QVec>& rows, size_t dim) {
  QMatrix m = QMatrix::from_rows(rows, dim);
  size_t nr = rref(m).size();
  std::vector<QVec> basis;
  for (size_t i = 0; i < nr; ++i) basis.push_back(m.row(i));
  return basis;
}

bool span_contains(const std::vector<QVec>& span, const QVec& v) {
  if (std::all_of(v.begin(), v.end(), [](const Q& q) { return q == 0; })) return true;
  QMatrix a = QMatrix::from_cols(span, v.size());
  return solve(a, v).has_value();
}

bool spans_equal(const std::vector<QVec>& a, const std::vector<QVec>& b, size_t dim) {
  return row_space_basis(a, dim) == row_space_basis(b, dim);
}

std::vector<QVec> quotient_basis(const std::vector<QVec>& sub,
                                 const std::vector<QVec>& ambient, size_t dim) {
  QMatrix ms = QMatrix::from_rows(sub, dim);
  std::vector<size_t> ps = rref(ms);
  std::set<size_t> pivsub(ps.begin(), ps.end());

  QMatrix ma = QMatrix::from_rows(ambient, dim);
  std::vector<size_t> pa = rref(ma);

  std::vector<QVec> reps;
  for (size_t i = 0; i < pa.size(); ++i) {
    if (pivsub.count(pa[i])) continue;
    QVec v = ma.row(i);
    // Reduce modulo the subspace so the representative is canonical.
    for (size_t k = 0; k < ps.size(); ++k) {
      Q f = v[ps[k]];
      if (f == 0) continue;
      for (size_t j = 0; j < dim; ++j) v[j] = Q(v[j] - f * ms.at(k, j));
    }
    reps.push_back(std::move(v));
  }
  return reps;
}

}  // namespace sullivan
