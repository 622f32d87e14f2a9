#pragma once

// Vectors and matrices with truncated-series entries.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/matrix.hpp"
#include "cuspsheaf/series.hpp"

namespace cuspsheaf {

template <ExactField K>
using SeriesVector = std::vector<PSeries<K>>;

template <ExactField K>
SeriesVector<K> zero_vector(std::size_t n, int precision) {
  return SeriesVector<K>(n, PSeries<K>(precision));
}

template <ExactField K>
SeriesVector<K> unit_vector(std::size_t n, std::size_t i, int precision) {
  auto v = zero_vector<K>(n, precision);
  v[i] = PSeries<K>::constant(precision, K(1));
  return v;
}

/// Minimum entry valuation.
template <ExactField K>
int valuation(const SeriesVector<K>& v) {
  int m = kInfiniteValuation;
  for (const auto& s : v) m = std::min(m, s.valuation());
  return m;
}

template <ExactField K>
bool is_zero(const SeriesVector<K>& v) {
  return valuation(v) == kInfiniteValuation;
}

template <ExactField K>
SeriesVector<K> operator+(SeriesVector<K> a, const SeriesVector<K>& b) {
  if (a.size() != b.size()) throw InvariantError("vector length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

template <ExactField K>
SeriesVector<K> operator-(SeriesVector<K> a, const SeriesVector<K>& b) {
  if (a.size() != b.size()) throw InvariantError("vector length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

template <ExactField K>
SeriesVector<K> operator*(const PSeries<K>& s, SeriesVector<K> v) {
  for (auto& x : v) x = s * x;
  return v;
}

template <ExactField K>
SeriesVector<K> shifted_up(SeriesVector<K> v, int k) {
  for (auto& x : v) x = x.shifted_up(k);
  return v;
}

template <ExactField K>
SeriesVector<K> with_precision(const SeriesVector<K>& v, int precision) {
  SeriesVector<K> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.with_precision(precision));
  return out;
}

/// Coefficient of t^e of every entry.
template <ExactField K>
KVector<K> coefficient_vector(const SeriesVector<K>& v, int e) {
  KVector<K> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.coefficient(e));
  return out;
}

/// Image of v in (R-bar/t^2)^n as (constant terms, linear terms).
template <ExactField K>
KVector<K> two_jet(const SeriesVector<K>& v) {
  auto out = coefficient_vector(v, 0);
  auto lin = coefficient_vector(v, 1);
  out.insert(out.end(), lin.begin(), lin.end());
  return out;
}

template <ExactField K>
SeriesVector<K> constant_vector(const KVector<K>& v, int precision) {
  SeriesVector<K> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(PSeries<K>::constant(precision, x));
  return out;
}

template <ExactField K>
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  SeriesMatrix(std::size_t rows, std::size_t cols, int precision)
      : rows_(rows), cols_(cols), precision_(precision), a_(rows * cols, PSeries<K>(precision)) {}

  static SeriesMatrix identity(std::size_t n, int precision) {
    SeriesMatrix m(n, n, precision);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = PSeries<K>::constant(precision, K(1));
    return m;
  }

  static SeriesMatrix from_columns(const std::vector<SeriesVector<K>>& cols, std::size_t rows, int precision) {
    SeriesMatrix m(rows, cols.size(), precision);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw InvariantError("ragged series matrix columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  /// Polynomial matrix sum_e t^e jets[e].
  static SeriesMatrix from_jets(const std::vector<KMatrix<K>>& jets, std::size_t rows, std::size_t cols,
                                int precision) {
    SeriesMatrix m(rows, cols, precision);
    for (std::size_t e = 0; e < jets.size() && static_cast<int>(e) <= precision; ++e) {
      if (jets[e].rows() != rows || jets[e].cols() != cols) throw InvariantError("jet shape mismatch");
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j).set(static_cast<int>(e), jets[e](i, j));
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int precision() const { return precision_; }

  PSeries<K>& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const PSeries<K>& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  SeriesVector<K> column(std::size_t j) const {
    SeriesVector<K> v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }

  std::vector<SeriesVector<K>> columns() const {
    std::vector<SeriesVector<K>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  /// Coefficient matrix of t^e.
  KMatrix<K> jet(int e) const {
    KMatrix<K> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).coefficient(e);
    return m;
  }

  SeriesMatrix with_precision(int precision) const {
    SeriesMatrix m(rows_, cols_, precision);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i].with_precision(precision);
    return m;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend SeriesVector<K> operator*(const SeriesMatrix& m, const SeriesVector<K>& x) {
    if (x.size() != m.cols_) throw InvariantError("series matrix-vector shape mismatch");
    auto y = zero_vector<K>(m.rows_, m.precision_);
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j)
        if (!m(i, j).is_zero() && !x[j].is_zero()) y[i] += m(i, j) * x[j];
    return y;
  }

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.cols_ != b.rows_) throw InvariantError("series matrix product shape mismatch");
    SeriesMatrix c(a.rows_, b.cols_, a.precision_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend SeriesMatrix operator+(SeriesMatrix a, const SeriesMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvariantError("series matrix shape mismatch");
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
    return a;
  }

  friend SeriesMatrix operator-(SeriesMatrix a, const SeriesMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvariantError("series matrix shape mismatch");
    for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
    return a;
  }

  friend bool operator==(const SeriesMatrix&, const SeriesMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int precision_ = 0;
  std::vector<PSeries<K>> a_;
};

template <ExactField K>
SeriesMatrix<K> operator*(const KMatrix<K>& k, const SeriesMatrix<K>& s) {
  return SeriesMatrix<K>::from_jets({k}, k.rows(), k.cols(), s.precision()) * s;
}

template <ExactField K>
SeriesVector<K> operator*(const KMatrix<K>& k, const SeriesVector<K>& v) {
  if (k.cols() != v.size()) throw InvariantError("matrix-vector shape mismatch");
  int n = v.empty() ? 0 : v.front().precision();
  auto y = zero_vector<K>(k.rows(), n);
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j)
      if (!k(i, j).is_zero()) y[i] += k(i, j) * v[j];
  return y;
}

/// Inverse of a square series matrix whose constant term is invertible.
template <ExactField K>
SeriesMatrix<K> inverse(const SeriesMatrix<K>& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw InvariantError("inverse of non-square series matrix");
  SeriesMatrix<K> a = m;
  auto inv = SeriesMatrix<K>::identity(n, m.precision());
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !a(p, c).is_unit()) ++p;
    if (p == n) throw MathError(MathError::Reason::non_unit, "series matrix is not invertible over R-bar");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(p, j), a(c, j));
      std::swap(inv(p, j), inv(c, j));
    }
    auto piv = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = piv * a(c, j);
      inv(c, j) = piv * inv(c, j);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      auto f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(c, j);
        inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace cuspsheaf
