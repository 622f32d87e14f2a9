#pragma once

// Brute-force checks over truncated coefficient vectors. Nothing here calls
// the lattice or extension algorithms; only raw presentations and exact
// field arithmetic are used.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cuspsheaf/cusp_ring.hpp"
#include "cuspsheaf/presentation.hpp"

namespace cuspsheaf {

struct OracleReport {
  std::string check;
  std::uint64_t seed = 0;
  bool agree = true;
  nlohmann::json payload;  // instance and outputs, filled on disagreement

  nlohmann::json to_json() const {
    nlohmann::json j{{"check", check}, {"seed", seed}, {"verdict", agree ? "agree" : "disagree"}};
    if (!payload.is_null()) j["payload"] = payload;
    return j;
  }
};

namespace oracle_detail {

/// Echelon basis grown one vector at a time; each stored row has a leading
/// one at its pivot and zeros at the other rows' pivots.
template <ExactField K>
class GrowingBasis {
 public:
  explicit GrowingBasis(std::size_t dim) : dim_(dim) {}

  /// Adds v if independent of the current rows; returns whether it was added.
  bool insert(std::vector<K> v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const auto p = pivots_[i];
      if (v[p].is_zero()) continue;
      K f = v[p];
      for (std::size_t j = 0; j < dim_; ++j)
        if (!rows_[i][j].is_zero()) v[j] -= f * rows_[i][j];
    }
    std::size_t p = 0;
    while (p < dim_ && v[p].is_zero()) ++p;
    if (p == dim_) return false;
    K inv = v[p].inverse();
    for (auto& x : v) x *= inv;
    for (auto& row : rows_) {
      if (row[p].is_zero()) continue;
      K f = row[p];
      for (std::size_t j = 0; j < dim_; ++j)
        if (!v[j].is_zero()) row[j] -= f * v[j];
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  std::size_t size() const { return rows_.size(); }

 private:
  std::size_t dim_;
  std::vector<std::vector<K>> rows_;
  std::vector<std::size_t> pivots_;
};

template <ExactField K>
std::vector<K> flatten(const SeriesVector<K>& v, int n) {
  std::vector<K> out;
  out.reserve(v.size() * static_cast<std::size_t>(n + 1));
  for (const auto& s : v)
    for (int e = 0; e <= n; ++e) out.push_back(s.coefficient(e));
  return out;
}

}  // namespace oracle_detail

/// dim_k M/mM computed as dim(M_N) - dim(mM_N), where mM = span{t^e g : e >= 2}
/// and M_N = mM + span{g}, all as k-subspaces of k^{r(N+1)}.
template <ExactField K>
std::size_t oracle_min_generators(const Lattice<K>& m) {
  const int n = m.precision();
  oracle_detail::GrowingBasis<K> basis(m.rank() * static_cast<std::size_t>(n + 1));
  for (const auto& g : m.generators())
    for (int e = 2; e <= n; ++e) {
      SeriesVector<K> shifted;
      for (const auto& s : g) shifted.push_back(s.shifted_up(e));
      basis.insert(oracle_detail::flatten(shifted, n));
    }
  std::size_t extra = 0;
  for (const auto& g : m.generators())
    if (basis.insert(oracle_detail::flatten(g, n))) ++extra;
  return extra;
}

/// Looks for a class z = (y, w) of O^a ⊕ m^r, y not in m^a, with t^2 z and
/// t^3 z in the relation module {(x, -phi_P(x))}. Unknowns: the coefficients
/// of y (degrees 0, 2..N) and of w (degrees 2..N); conditions: t^2 (w + sum
/// y_i u_i) and t^3 (w + sum y_i u_i) vanish in R-bar^r truncated at N.
/// Returns y(0) of a witness.
template <ExactField K>
std::optional<std::vector<K>> oracle_torsion(const PhiMap<K>& phi, int precision) {
  const int n = precision;
  const auto r = phi.r(), a = phi.a();
  if (a == 0) return std::nullopt;
  std::vector<int> y_degrees{0};
  for (int e = 2; e <= n; ++e) y_degrees.push_back(e);
  const std::size_t ny = a * y_degrees.size();
  const std::size_t nw = r * static_cast<std::size_t>(n - 1);
  const std::size_t rows_per_shift = r * static_cast<std::size_t>(n + 1);
  KMatrix<K> sys(2 * rows_per_shift, ny + nw);
  // column of the monomial t^e in slot (entry j): row index of degree e + shift
  auto put = [&](std::size_t col, std::size_t j, int degree, const K& c) {
    for (int shift : {2, 3}) {
      int d = degree + shift;
      if (d > n) continue;
      std::size_t row = (shift == 2 ? 0 : rows_per_shift) + j * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(d);
      sys(row, col) += c;
    }
  };
  for (std::size_t i = 0; i < a; ++i) {
    std::vector<PSeries<K>> u;
    for (std::size_t j = 0; j < r; ++j) {
      PSeries<K> s(n);
      s.set(0, phi.A()(j, i));
      if (n >= 1) s.set(1, phi.B()(j, i));
      if (phi.H())
        for (int e = 0; e + 2 <= n; ++e) s.set(e + 2, s[e + 2] + (*phi.H())(j, i).coefficient(e));
      u.push_back(std::move(s));
    }
    for (std::size_t k = 0; k < y_degrees.size(); ++k) {
      const std::size_t col = i * y_degrees.size() + k;
      for (std::size_t j = 0; j < r; ++j)
        for (int e = 0; e + y_degrees[k] <= n; ++e)
          if (!u[j][e].is_zero()) put(col, j, e + y_degrees[k], u[j][e]);
    }
  }
  for (std::size_t j = 0; j < r; ++j)
    for (int e = 2; e <= n; ++e) put(ny + j * static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(e - 2), j, e, K(1));
  for (const auto& z : kernel_basis(sys)) {
    std::vector<K> y0;
    bool nonzero = false;
    for (std::size_t i = 0; i < a; ++i) {
      y0.push_back(z[i * y_degrees.size()]);
      nonzero = nonzero || !y0.back().is_zero();
    }
    if (nonzero) return y0;
  }
  return std::nullopt;
}

/// Reruns `compute` at N, N+1, N+2 and compares the discrete outputs.
inline OracleReport oracle_precision_stability(const std::string& check, std::uint64_t seed,
                                               const std::function<std::vector<long>(int)>& compute, int precision) {
  OracleReport rep{check, seed, true, nullptr};
  auto base = compute(precision);
  nlohmann::json outputs = nlohmann::json::array({nlohmann::json{{"precision", precision}, {"outputs", base}}});
  for (int k = 1; k <= 2; ++k) {
    auto other = compute(precision + k);
    outputs.push_back({{"precision", precision + k}, {"outputs", other}});
    if (other != base) rep.agree = false;
  }
  if (!rep.agree) rep.payload = nlohmann::json{{"runs", outputs}};
  return rep;
}

}  // namespace cuspsheaf
