#pragma once

#include <initializer_list>
#include <vector>

#include "cuspsheaf/cuspsheaf.hpp"

namespace cuspsheaf::testing {

using Q = Rational;

/// Series over Q at precision n from integer coefficients.
inline PSeries<Q> s(int n, std::initializer_list<long> c) { return PSeries<Q>(n, c); }

/// Vector of series at precision n, one coefficient list per entry.
inline SeriesVector<Q> v(int n, std::initializer_list<std::initializer_list<long>> entries) {
  SeriesVector<Q> out;
  for (auto e : entries) out.push_back(PSeries<Q>(n, e));
  return out;
}

inline Lattice<Q> lattice(std::size_t r, int n, std::initializer_list<std::initializer_list<std::initializer_list<long>>> gens) {
  std::vector<SeriesVector<Q>> g;
  for (auto x : gens) g.push_back(v(n, x));
  return Lattice<Q>(r, std::move(g));
}

inline KMatrix<Q> mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<Q>> out;
  for (auto r : rows) out.emplace_back(r.begin(), r.end());
  return KMatrix<Q>::from_rows(out);
}

}  // namespace cuspsheaf::testing
