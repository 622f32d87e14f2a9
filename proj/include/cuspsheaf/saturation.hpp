#pragma once

// The R-bar span of a set of vectors in (k[t]/t^{N+1})^r, put in a pivoted
// triangular form by column operations. Pivots are taken at an entry of
// globally minimal valuation, so the span decomposes as the direct sum of the
// cyclic modules generated by the pivot columns and the pivot valuations are
// the elementary divisors of the span.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cuspsheaf/series_matrix.hpp"

namespace cuspsheaf {

template <ExactField K>
class SaturatedSpan {
 public:
  SaturatedSpan(std::size_t rank, std::span<const SeriesVector<K>> vectors, int precision)
      : rank_(rank), precision_(precision) {
    std::vector<SeriesVector<K>> cols(vectors.begin(), vectors.end());
    std::vector<bool> used_row(rank, false), used_col(cols.size(), false);
    while (pivots_.size() < rank) {
      int best = kInfiniteValuation;
      std::size_t bc = 0, br = 0;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (used_col[c]) continue;
        for (std::size_t i = 0; i < rank; ++i) {
          if (used_row[i]) continue;
          int v = cols[c][i].valuation();
          if (v < best) best = v, bc = c, br = i;
        }
      }
      if (best == kInfiniteValuation) break;
      used_col[bc] = used_row[br] = true;
      Pivot p{br, best, cols[bc][br].shifted_down(best).inverse(), cols[bc]};
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (used_col[c] || cols[c][br].is_zero()) continue;
        auto q = cols[c][br].shifted_down(best) * p.unit_inverse;
        for (std::size_t i = 0; i < rank; ++i)
          if (!p.column[i].is_zero()) cols[c][i] -= q * p.column[i];
      }
      pivots_.push_back(std::move(p));
    }
  }

  std::size_t rank() const { return rank_; }
  int precision() const { return precision_; }

  /// Number of pivots found; equals rank() iff the span has full rank at
  /// this precision.
  std::size_t pivot_count() const { return pivots_.size(); }
  bool full_rank() const { return pivots_.size() == rank_; }

  std::vector<int> elementary_divisors() const {
    std::vector<int> out;
    for (const auto& p : pivots_) out.push_back(p.valuation);
    return out;
  }

  int max_elementary_divisor() const {
    int m = 0;
    for (const auto& p : pivots_) m = std::max(m, p.valuation);
    return m;
  }

  /// True iff the truncated span determines the true span, i.e. it contains
  /// t^{N-1} R-bar^r; then t^{N+1} R-bar^r lies in t^2 times the span.
  bool faithful() const { return full_rank() && max_elementary_divisor() <= precision_ - 1; }

  std::vector<SeriesVector<K>> basis() const {
    std::vector<SeriesVector<K>> out;
    for (const auto& p : pivots_) out.push_back(p.column);
    return out;
  }

  /// Coefficients x with sum_k x_k basis()[k] = y, or nullopt if y is not in
  /// the span. x_k is determined modulo t^{N+1-d_k}; undetermined top
  /// coefficients are returned as zero.
  std::optional<SeriesVector<K>> coordinates(SeriesVector<K> y) const {
    SeriesVector<K> x;
    for (const auto& p : pivots_) {
      const auto& entry = y[p.row];
      if (entry.valuation() < p.valuation) return std::nullopt;
      auto coeff = entry.shifted_down(p.valuation) * p.unit_inverse;
      if (p.valuation > 0)
        for (int e = precision_ + 1 - p.valuation; e <= precision_; ++e) coeff.set(e, K{});
      for (std::size_t i = 0; i < rank_; ++i)
        if (!p.column[i].is_zero()) y[i] -= coeff * p.column[i];
      x.push_back(std::move(coeff));
    }
    if (!is_zero(y)) return std::nullopt;
    return x;
  }

  bool contains(const SeriesVector<K>& y) const { return coordinates(y).has_value(); }

 private:
  struct Pivot {
    std::size_t row;
    int valuation;
    PSeries<K> unit_inverse;
    SeriesVector<K> column;
  };

  std::size_t rank_;
  int precision_;
  std::vector<Pivot> pivots_;
};

}  // namespace cuspsheaf
