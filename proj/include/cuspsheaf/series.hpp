#pragma once

// Truncated power series in t: k[t]/(t^{N+1}), the desk-scale model of the
// normalization ring.

#include <algorithm>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/errors.hpp"
#include "cuspsheaf/field.hpp"

namespace cuspsheaf {

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

template <ExactField K>
class PSeries {
 public:
  /// Zero series at precision 0.
  PSeries() : c_(1) {}

  /// Zero series at precision N (coefficients for t^0..t^N).
  explicit PSeries(int precision) : c_(checked_size(precision)) {}

  PSeries(int precision, std::vector<K> coeffs) : c_(std::move(coeffs)) {
    auto n = checked_size(precision);
    if (c_.size() > n) {
      bool tail_zero = std::all_of(c_.begin() + static_cast<long>(n), c_.end(),
                                   [](const K& x) { return x.is_zero(); });
      if (!tail_zero)
        throw InvariantError("series has " + std::to_string(c_.size()) +
                             " coefficients, exceeding precision " + std::to_string(precision));
    }
    c_.resize(n);
  }

  PSeries(int precision, std::initializer_list<long> coeffs)
      : PSeries(precision, std::vector<K>(coeffs.begin(), coeffs.end())) {}

  static PSeries constant(int precision, K c) {
    PSeries s(precision);
    s.c_[0] = std::move(c);
    return s;
  }

  static PSeries monomial(int precision, K c, int exponent) {
    PSeries s(precision);
    if (exponent <= precision) s.c_[static_cast<std::size_t>(exponent)] = std::move(c);
    return s;
  }

  /// Drops coefficients above `precision` (or pads with zeros).
  static PSeries truncated(int precision, std::vector<K> coeffs) {
    coeffs.resize(checked_size(precision));
    PSeries s;
    s.c_ = std::move(coeffs);
    return s;
  }

  int precision() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<K>& coeffs() const { return c_; }

  const K& operator[](int e) const { return c_[static_cast<std::size_t>(e)]; }
  K coefficient(int e) const { return e >= 0 && e <= precision() ? c_[static_cast<std::size_t>(e)] : K{}; }
  void set(int e, K value) { c_.at(static_cast<std::size_t>(e)) = std::move(value); }

  /// Smallest exponent with a nonzero coefficient, kInfiniteValuation for 0.
  int valuation() const {
    for (std::size_t e = 0; e < c_.size(); ++e)
      if (!c_[e].is_zero()) return static_cast<int>(e);
    return kInfiniteValuation;
  }

  bool is_zero() const { return valuation() == kInfiniteValuation; }
  bool is_unit() const { return !c_[0].is_zero(); }

  PSeries with_precision(int precision) const { return truncated(precision, c_); }

  /// Multiplication by t^k.
  PSeries shifted_up(int k) const {
    PSeries s(precision());
    for (int e = 0; e + k <= precision(); ++e) s.c_[static_cast<std::size_t>(e + k)] = c_[static_cast<std::size_t>(e)];
    return s;
  }

  /// Exact division by t^k; the top k coefficients of the result are set to
  /// zero since they are not determined at this precision.
  PSeries shifted_down(int k) const {
    if (valuation() < k)
      throw MathError(MathError::Reason::non_unit,
                      "series of valuation " + std::to_string(valuation()) + " is not divisible by t^" +
                          std::to_string(k));
    PSeries s(precision());
    for (int e = k; e <= precision(); ++e) s.c_[static_cast<std::size_t>(e - k)] = c_[static_cast<std::size_t>(e)];
    return s;
  }

  PSeries inverse() const {
    if (!is_unit())
      throw MathError(MathError::Reason::non_unit,
                      "series of valuation " + std::to_string(valuation()) + " is not a unit");
    PSeries g(precision());
    K inv0 = c_[0].inverse();
    g.c_[0] = inv0;
    for (std::size_t n = 1; n < c_.size(); ++n) {
      K acc{};
      for (std::size_t k = 1; k <= n; ++k)
        if (!c_[k].is_zero()) acc += c_[k] * g.c_[n - k];
      g.c_[n] = -(acc * inv0);
    }
    return g;
  }

  PSeries operator-() const {
    PSeries s(*this);
    for (auto& x : s.c_) x = -x;
    return s;
  }

  PSeries& operator+=(const PSeries& o) {
    require_same_precision(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  PSeries& operator-=(const PSeries& o) {
    require_same_precision(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  PSeries& operator*=(const K& k) {
    for (auto& x : c_) x *= k;
    return *this;
  }

  friend PSeries operator+(PSeries a, const PSeries& b) { return a += b; }
  friend PSeries operator-(PSeries a, const PSeries& b) { return a -= b; }
  friend PSeries operator*(PSeries a, const K& k) { return a *= k; }
  friend PSeries operator*(const K& k, PSeries a) { return a *= k; }

  friend PSeries operator*(const PSeries& a, const PSeries& b) {
    a.require_same_precision(b);
    PSeries s(a.precision());
    const std::size_t n = a.c_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j < n; ++j)
        if (!b.c_[j].is_zero()) s.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return s;
  }
  PSeries& operator*=(const PSeries& o) { return *this = *this * o; }

  friend bool operator==(const PSeries&, const PSeries&) = default;

  std::string str() const {
    std::string out;
    for (std::size_t e = 0; e < c_.size(); ++e) {
      if (c_[e].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += "(" + c_[e].str() + ")";
      if (e > 0) out += "t^" + std::to_string(e);
    }
    return out.empty() ? "0" : out;
  }

 private:
  static std::size_t checked_size(int precision) {
    if (precision < 0) throw InvariantError("negative series precision");
    return static_cast<std::size_t>(precision) + 1;
  }

  void require_same_precision(const PSeries& o) const {
    if (o.c_.size() != c_.size())
      throw MathError(MathError::Reason::precision_mismatch,
                      "series precisions differ: " + std::to_string(precision()) + " vs " +
                          std::to_string(o.precision()));
  }

  std::vector<K> c_;
};

enum class SeriesOp { add, sub, mul };

template <ExactField K>
PSeries<K> ps_arith(const PSeries<K>& f, const PSeries<K>& g, SeriesOp op) {
  switch (op) {
    case SeriesOp::add: return f + g;
    case SeriesOp::sub: return f - g;
    case SeriesOp::mul: return f * g;
  }
  return f;
}

template <ExactField K>
PSeries<K> ps_invert(const PSeries<K>& f) {
  return f.inverse();
}

}  // namespace cuspsheaf
