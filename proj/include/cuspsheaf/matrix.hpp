#pragma once

// Dense matrices over an exact field and the elimination routines every
// rank, kernel and injectivity test goes through.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/errors.hpp"
#include "cuspsheaf/field.hpp"

namespace cuspsheaf {

template <ExactField K>
using KVector = std::vector<K>;

template <ExactField K>
class KMatrix {
 public:
  KMatrix() = default;
  KMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static KMatrix identity(std::size_t n) {
    KMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

  static KMatrix from_rows(const std::vector<std::vector<K>>& rows, std::size_t cols_if_empty = 0) {
    std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    KMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InvariantError("ragged matrix rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static KMatrix from_columns(const std::vector<KVector<K>>& columns, std::size_t rows_if_empty = 0) {
    std::size_t rows = columns.empty() ? rows_if_empty : columns.front().size();
    KMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw InvariantError("ragged matrix columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const K& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  KVector<K> column(std::size_t j) const {
    KVector<K> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  KVector<K> row(std::size_t i) const {
    return KVector<K>(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_));
  }
  std::vector<KVector<K>> columns() const {
    std::vector<KVector<K>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  KMatrix transpose() const {
    KMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  KMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    KMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  static KMatrix vstack(const KMatrix& top, const KMatrix& bottom) {
    if (top.cols_ != bottom.cols_) throw InvariantError("vstack column mismatch");
    KMatrix m(top.rows_ + bottom.rows_, top.cols_);
    for (std::size_t i = 0; i < top.rows_; ++i)
      for (std::size_t j = 0; j < top.cols_; ++j) m(i, j) = top(i, j);
    for (std::size_t i = 0; i < bottom.rows_; ++i)
      for (std::size_t j = 0; j < top.cols_; ++j) m(top.rows_ + i, j) = bottom(i, j);
    return m;
  }

  static KMatrix hstack(const KMatrix& left, const KMatrix& right) {
    return vstack(left.transpose(), right.transpose()).transpose();
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  KMatrix& operator+=(const KMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  KMatrix& operator-=(const KMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  friend KMatrix operator+(KMatrix a, const KMatrix& b) { return a += b; }
  friend KMatrix operator-(KMatrix a, const KMatrix& b) { return a -= b; }
  friend KMatrix operator*(const K& k, KMatrix a) {
    for (auto& x : a.a_) x *= k;
    return a;
  }

  friend KMatrix operator*(const KMatrix& a, const KMatrix& b) {
    if (a.cols_ != b.rows_)
      throw InvariantError("matrix product shape mismatch " + a.shape() + " * " + b.shape());
    KMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const K& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend KVector<K> operator*(const KMatrix& a, const KVector<K>& x) {
    if (a.cols_ != x.size()) throw InvariantError("matrix-vector shape mismatch");
    KVector<K> y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j)
        if (!a(i, j).is_zero() && !x[j].is_zero()) y[i] += a(i, j) * x[j];
    return y;
  }

  friend bool operator==(const KMatrix&, const KMatrix&) = default;

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  void require_same_shape(const KMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw InvariantError("matrix shape mismatch " + shape() + " vs " + o.shape());
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> a_;
};

template <ExactField K>
struct RowEchelon {
  KMatrix<K> reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
};

/// Gauss-Jordan elimination to reduced row echelon form.
template <ExactField K>
RowEchelon<K> rref(KMatrix<K> m) {
  RowEchelon<K> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    K inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      K f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

template <ExactField K>
std::size_t rank(const KMatrix<K>& m) {
  // Forward elimination only; cheaper than a full reduction.
  KMatrix<K> w = m;
  std::size_t r = 0;
  for (std::size_t c = 0; c < w.cols() && r < w.rows(); ++c) {
    std::size_t p = r;
    while (p < w.rows() && w(p, c).is_zero()) ++p;
    if (p == w.rows()) continue;
    if (p != r)
      for (std::size_t j = c; j < w.cols(); ++j) std::swap(w(p, j), w(r, j));
    K inv = w(r, c).inverse();
    for (std::size_t i = r + 1; i < w.rows(); ++i) {
      if (w(i, c).is_zero()) continue;
      K f = w(i, c) * inv;
      for (std::size_t j = c; j < w.cols(); ++j)
        if (!w(r, j).is_zero()) w(i, j) -= f * w(r, j);
    }
    ++r;
  }
  return r;
}

/// Basis of the right null space {x : m x = 0}; empty iff rank(m) = cols.
template <ExactField K>
std::vector<KVector<K>> kernel_basis(const KMatrix<K>& m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<KVector<K>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    KVector<K> v(m.cols());
    v[free] = K(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Some x with m x = b, or nullopt when inconsistent. Free variables are 0.
template <ExactField K>
std::optional<KVector<K>> solve(const KMatrix<K>& m, const KVector<K>& b) {
  if (b.size() != m.rows()) throw InvariantError("solve: right-hand side length mismatch");
  auto e = rref(KMatrix<K>::hstack(m, KMatrix<K>::from_columns({b}, m.rows())));
  KVector<K> x(m.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == m.cols()) return std::nullopt;
    x[e.pivots[i]] = e.reduced(i, m.cols());
  }
  return x;
}

/// Some X with m X = b (column by column), or nullopt.
template <ExactField K>
std::optional<KMatrix<K>> solve(const KMatrix<K>& m, const KMatrix<K>& b) {
  if (b.rows() != m.rows()) throw InvariantError("solve: right-hand side shape mismatch");
  auto e = rref(KMatrix<K>::hstack(m, b));
  KMatrix<K> x(m.cols(), b.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] >= m.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[i], j) = e.reduced(i, m.cols() + j);
  }
  return x;
}

template <ExactField K>
std::optional<KMatrix<K>> inverse(const KMatrix<K>& m) {
  if (m.rows() != m.cols()) throw InvariantError("inverse of non-square matrix");
  if (rank(m) != m.rows()) return std::nullopt;
  return solve(m, KMatrix<K>::identity(m.rows()));
}

template <ExactField K>
K determinant(KMatrix<K> m) {
  if (m.rows() != m.cols()) throw InvariantError("determinant of non-square matrix");
  K det(1);
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return K{};
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    K inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      K f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Reduced column echelon form with zero columns removed: a canonical basis
/// of the column space.
template <ExactField K>
KMatrix<K> column_space_basis(const KMatrix<K>& m) {
  auto e = rref(m.transpose());
  return e.reduced.block(0, 0, e.pivots.size(), m.rows()).transpose();
}

/// Extends independent columns `cols` (of length n) to a basis of k^n with
/// standard basis vectors taken in index order.
template <ExactField K>
std::vector<KVector<K>> complete_with_unit_vectors(std::vector<KVector<K>> cols, std::size_t n) {
  std::vector<KVector<K>> added;
  for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
    KVector<K> e(n);
    e[i] = K(1);
    auto trial = cols;
    trial.push_back(e);
    if (rank(KMatrix<K>::from_columns(trial, n)) == trial.size()) {
      cols = std::move(trial);
      added.push_back(std::move(e));
    }
  }
  return added;
}

}  // namespace cuspsheaf
