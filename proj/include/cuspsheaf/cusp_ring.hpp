#pragma once

// The local ring of an ordinary cusp, R = k + t^2 k[[t]], inside its
// normalization R-bar = k[[t]], with maximal ideal m = t^2 R-bar.

#include "cuspsheaf/field.hpp"
#include "cuspsheaf/series.hpp"

namespace cuspsheaf {

struct CuspRingContext {
  int precision = 12;
  FieldDesc field;
};

/// True iff f lies in R (the t^1 coefficient vanishes).
template <ExactField K>
bool in_subring(const PSeries<K>& f) {
  return f.coefficient(1).is_zero();
}

/// Coordinate of the class of f in R-bar/R = k * t-bar.
template <ExactField K>
K quotient_class(const PSeries<K>& f) {
  return f.coefficient(1);
}

template <ExactField K>
bool in_maximal_ideal(const PSeries<K>& f) {
  return f.valuation() >= 2;
}

/// The R-linear bijection R-bar -> m, x |-> t^2 x.
template <ExactField K>
PSeries<K> to_maximal_ideal(const PSeries<K>& x) {
  return x.shifted_up(2);
}

/// R-module generators t^2, t^3 of m.
template <ExactField K>
std::pair<PSeries<K>, PSeries<K>> maximal_ideal_generators(int precision) {
  return {PSeries<K>::monomial(precision, K(1), 2), PSeries<K>::monomial(precision, K(1), 3)};
}

}  // namespace cuspsheaf
