#pragma once

// Raw presentations shared by the algorithms and the independent oracles:
// lattices given by generators inside R-bar^r, and the extension datum phi.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/errors.hpp"
#include "cuspsheaf/series_matrix.hpp"

namespace cuspsheaf {

/// A finitely generated R-submodule of R-bar^r, given by generators.
template <ExactField K>
class Lattice {
 public:
  Lattice(std::size_t rank, std::vector<SeriesVector<K>> generators)
      : rank_(rank), gens_(std::move(generators)) {
    if (rank_ == 0) throw InvariantError("lattice rank must be positive");
    if (gens_.empty()) throw InvariantError("lattice needs at least one generator");
    precision_ = gens_.front().empty() ? -1 : gens_.front().front().precision();
    for (const auto& g : gens_) {
      if (g.size() != rank_)
        throw InvariantError("generator has " + std::to_string(g.size()) + " entries, expected " +
                             std::to_string(rank_));
      for (const auto& s : g)
        if (s.precision() != precision_)
          throw MathError(MathError::Reason::precision_mismatch, "generators have mixed precision");
    }
  }

  std::size_t rank() const { return rank_; }
  int precision() const { return precision_; }
  const std::vector<SeriesVector<K>>& generators() const { return gens_; }

  Lattice with_precision(int precision) const {
    std::vector<SeriesVector<K>> g;
    for (const auto& v : gens_) g.push_back(cuspsheaf::with_precision(v, precision));
    return Lattice(rank_, std::move(g));
  }

  /// Largest valuation among nonzero generators.
  int max_generator_valuation() const {
    int m = 0;
    for (const auto& g : gens_) {
      int v = valuation(g);
      if (v != kInfiniteValuation) m = std::max(m, v);
    }
    return m;
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  std::size_t rank_;
  std::vector<SeriesVector<K>> gens_;
  int precision_ = 0;
};

/// phi : k^a -> W = (O/m^2) (x) E_p, phi(e_i) = sum_j (A(j,i) 1-bar + B(j,i) t-bar) (x) s_j,
/// together with optional lift tails H of phi_P(t^2 e_i) = sum_j (A + B t + H t^2)(j,i) t^2 e_j.
template <ExactField K>
class PhiMap {
 public:
  PhiMap(std::size_t r, KMatrix<K> a_part, KMatrix<K> b_part, std::optional<SeriesMatrix<K>> tails = std::nullopt)
      : r_(r), a_(std::move(a_part)), b_(std::move(b_part)), h_(std::move(tails)) {
    if (r_ == 0) throw InvariantError("phi map rank must be positive");
    if (a_.rows() != r_ || b_.rows() != r_ || a_.cols() != b_.cols())
      throw InvariantError("phi map blocks must both be r x a, got " + a_.shape() + " and " + b_.shape());
    if (h_ && (h_->rows() != r_ || h_->cols() != a_.cols()))
      throw InvariantError("lift tails must be r x a");
    if (h_ && h_->is_zero()) h_.reset();
  }

  /// The zero-extension datum for a = 0.
  static PhiMap empty(std::size_t r) { return PhiMap(r, KMatrix<K>(r, 0), KMatrix<K>(r, 0)); }

  std::size_t a() const { return a_.cols(); }
  std::size_t r() const { return r_; }
  const KMatrix<K>& A() const { return a_; }
  const KMatrix<K>& B() const { return b_; }
  const std::optional<SeriesMatrix<K>>& H() const { return h_; }

  /// [A; B], the 2r x a matrix of phi in the block ordering (1-bar block, t-bar block).
  KMatrix<K> stacked() const { return KMatrix<K>::vstack(a_, b_); }

  /// Lift tail entry at precision N (zero when absent).
  PSeries<K> tail(std::size_t j, std::size_t i, int precision) const {
    return h_ ? (*h_)(j, i).with_precision(precision) : PSeries<K>(precision);
  }

  /// Column i of the series matrix A + B t + H t^2 (so phi_P(x e_i) = x * column).
  SeriesVector<K> lift_column(std::size_t i, int precision) const {
    SeriesVector<K> u;
    for (std::size_t j = 0; j < r_; ++j) {
      PSeries<K> s = tail(j, i, precision).shifted_up(2);
      s.set(0, s[0] + a_(j, i));
      if (precision >= 1) s.set(1, s[1] + b_(j, i));
      u.push_back(std::move(s));
    }
    return u;
  }

  friend bool operator==(const PhiMap&, const PhiMap&) = default;

 private:
  std::size_t r_;
  KMatrix<K> a_;
  KMatrix<K> b_;
  std::optional<SeriesMatrix<K>> h_;
};

}  // namespace cuspsheaf
