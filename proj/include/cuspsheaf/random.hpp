#pragma once

// Seeded random instances for the property suites and selftest.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cuspsheaf/triples.hpp"

namespace cuspsheaf {

class InstanceRng {
 public:
  explicit InstanceRng(std::uint64_t seed) : eng_(seed) {}

  /// Seed for the i-th instance of a named suite; keeps instances
  /// reproducible one by one.
  static std::uint64_t instance_seed(std::uint64_t seed, std::uint64_t suite, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(index)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t{out[0]} << 32) | out[1];
  }

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  bool chance(int percent) { return uniform(0, 99) < percent; }

  template <ExactField K>
  K scalar() {
    if constexpr (std::is_same_v<K, Rational>) {
      long den = uniform(1, 9);
      return Rational(uniform(-9, 9), chance(50) ? den : 1);
    } else {
      return K(uniform(0, static_cast<long>(ModP::modulus()) - 1));
    }
  }

  template <ExactField K>
  K nonzero_scalar() {
    K x;
    do x = scalar<K>();
    while (x.is_zero());
    return x;
  }

  /// Sparse series of valuation in [0, max_val] (or zero).
  template <ExactField K>
  PSeries<K> series(int precision, int max_val = 4, int zero_percent = 15) {
    PSeries<K> s(precision);
    if (chance(zero_percent)) return s;
    int v = static_cast<int>(uniform(0, max_val));
    s.set(v, nonzero_scalar<K>());
    for (int extra = static_cast<int>(uniform(0, 3)); extra > 0; --extra) {
      int e = static_cast<int>(uniform(v + 1, v + 5));
      if (e <= precision) s.set(e, scalar<K>());
    }
    return s;
  }

  template <ExactField K>
  KMatrix<K> matrix(std::size_t rows, std::size_t cols, int zero_percent = 30) {
    KMatrix<K> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (!chance(zero_percent)) m(i, j) = scalar<K>();
    return m;
  }

  template <ExactField K>
  KMatrix<K> invertible_matrix(std::size_t n) {
    for (;;) {
      auto m = matrix<K>(n, n, 20);
      if (rank(m) == n) return m;
    }
  }

  template <ExactField K>
  SeriesMatrix<K> series_matrix(std::size_t rows, std::size_t cols, int precision, int max_val = 4) {
    SeriesMatrix<K> m(rows, cols, precision);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = series<K>(precision, max_val, 40);
    return m;
  }

  /// Unit of R: nonzero constant plus an element of m.
  template <ExactField K>
  PSeries<K> unit_of_subring(int precision) {
    auto s = series<K>(precision, 2, 30);
    s.set(0, nonzero_scalar<K>());
    s.set(1, K{});
    return s;
  }

  /// Element of R (zero linear term) of valuation 0, 2 or 3, or zero.
  template <ExactField K>
  PSeries<K> subring_element(int precision) {
    PSeries<K> s(precision);
    if (chance(30)) return s;
    const int v = std::array<int, 3>{0, 2, 3}[static_cast<std::size_t>(uniform(0, 2))];
    s.set(v, nonzero_scalar<K>());
    for (int extra = static_cast<int>(uniform(0, 3)); extra > 0; --extra) {
      int e = static_cast<int>(uniform(v + 1, v + 5));
      if (e != 1 && e <= precision) s.set(e, scalar<K>());
    }
    return s;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Random lattice of rank r with r..r+2 generators, valid at `precision`.
template <ExactField K>
Lattice<K> random_lattice(InstanceRng& rng, std::size_t r, int precision) {
  for (;;) {
    auto count = static_cast<std::size_t>(rng.uniform(static_cast<long>(r), static_cast<long>(r + 2)));
    std::vector<SeriesVector<K>> gens;
    for (std::size_t g = 0; g < count; ++g) {
      SeriesVector<K> v;
      for (std::size_t j = 0; j < r; ++j) v.push_back(rng.series<K>(precision));
      gens.push_back(std::move(v));
    }
    Lattice<K> m(r, std::move(gens));
    try {
      LatticeAnalysis<K> check(m);
      return m;
    } catch (const MathError&) {
    }
  }
}

/// Lattice isomorphic to R^a ⊕ R-bar^b (b = r - a): the standard generators
/// moved by a random automorphism of R-bar^r, scaled by t^k, plus redundant
/// generators. Used to reach every (a, b) stratum.
template <ExactField K>
Lattice<K> random_stratified_lattice(InstanceRng& rng, std::size_t r, std::size_t a, int precision) {
  for (;;) {
    std::vector<SeriesVector<K>> gens;
    for (std::size_t i = 0; i < r; ++i) {
      gens.push_back(unit_vector<K>(r, i, precision));
      if (i >= a) gens.push_back(shifted_up(unit_vector<K>(r, i, precision), 1));
    }
    std::vector<KMatrix<K>> jets{rng.invertible_matrix<K>(r)};
    for (int e = 1; e <= 2; ++e) jets.push_back(rng.matrix<K>(r, r, 70));
    auto p = SeriesMatrix<K>::from_jets(jets, r, r, precision);
    const int k = static_cast<int>(rng.uniform(0, 2));
    for (auto& g : gens) g = shifted_up(p * g, k);
    for (long extra = rng.uniform(0, 2); extra > 0; --extra) {
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(gens.size()) - 1));
      auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(gens.size()) - 1));
      if (i != j) gens[i] = gens[i] + rng.subring_element<K>(precision) * gens[j];
    }
    Lattice<K> m(r, std::move(gens));
    try {
      LatticeAnalysis<K> check(m);
      return m;
    } catch (const MathError&) {
    }
  }
}

template <ExactField K>
Lattice<K> random_generator_move_once(InstanceRng& rng, const Lattice<K>& m) {
  auto gens = m.generators();
  const int n = m.precision();
  const auto count = gens.size();
  switch (rng.uniform(0, 3)) {
    case 0:
      std::shuffle(gens.begin(), gens.end(), rng.engine());
      break;
    case 1: {
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(count) - 1));
      gens[i] = rng.unit_of_subring<K>(n) * gens[i];
      break;
    }
    case 2: {
      if (count < 2) break;
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(count) - 1));
      auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(count) - 2));
      if (j >= i) ++j;
      gens[i] = gens[i] + rng.subring_element<K>(n) * gens[j];
      break;
    }
    default: {
      // redundant generator
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(count) - 1));
      gens.push_back(rng.subring_element<K>(n) * gens[i]);
      break;
    }
  }
  return Lattice<K>(m.rank(), std::move(gens));
}

/// One of the generator-set moves that leave the lattice unchanged,
/// redrawn until the generators still satisfy the precision rule.
template <ExactField K>
Lattice<K> random_generator_move(InstanceRng& rng, const Lattice<K>& m) {
  for (;;) {
    auto moved = random_generator_move_once(rng, m);
    if (minimum_precision(moved.max_generator_valuation()) <= m.precision()) return moved;
  }
}

/// Change of ambient basis by an invertible constant matrix (an isomorphism,
/// not an equality of submodules).
template <ExactField K>
Lattice<K> random_ambient_change(InstanceRng& rng, const Lattice<K>& m) {
  auto g = rng.invertible_matrix<K>(m.rank());
  std::vector<SeriesVector<K>> gens;
  for (const auto& v : m.generators()) gens.push_back(g * v);
  return Lattice<K>(m.rank(), std::move(gens));
}

/// PhiMap with a <= r; injective with the given probability (in percent).
template <ExactField K>
PhiMap<K> random_phi(InstanceRng& rng, std::size_t r, std::size_t a, int injective_percent, int tail_precision) {
  const bool want_injective = rng.chance(injective_percent);
  for (;;) {
    KMatrix<K> amat = rng.matrix<K>(r, a, 40), bmat = rng.matrix<K>(r, a, 40);
    if (!want_injective && a > 0) {
      // force a dependency among the columns of [A; B]
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(a) - 1));
      K c = rng.scalar<K>();
      for (std::size_t j = 0; j < r; ++j) {
        amat(j, i) = K{};
        bmat(j, i) = K{};
        for (std::size_t k = 0; k < a; ++k)
          if (k != i) {
            amat(j, i) += c * amat(j, k);
            bmat(j, i) += c * bmat(j, k);
          }
      }
    }
    std::optional<SeriesMatrix<K>> tails;
    if (rng.chance(50)) tails = rng.series_matrix<K>(r, a, tail_precision, 3);
    PhiMap<K> phi(r, std::move(amat), std::move(bmat), std::move(tails));
    if (is_injective(phi) == want_injective || a == 0) return phi;
  }
}

/// Arbitrary triple with one cusp; V drawn with some probability inside the
/// omega-fiber summand (the semirank mismatch family).
template <ExactField K>
Triple<K> random_triple(InstanceRng& rng, std::size_t r, std::size_t a, int omega_percent) {
  Triple<K> t;
  t.bundle.rank = r;
  t.bundle.degree = rng.uniform(-3, 3);
  KMatrix<K> span;
  for (;;) {
    span = rng.matrix<K>(2 * r, a, 30);
    if (rng.chance(omega_percent) && a > 0) {
      auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(a) - 1));
      for (std::size_t j = 0; j < r; ++j) span(j, i) = K{};
    }
    if (rank(span) == a) break;
  }
  t.cusps.push_back(CuspTriple<K>{a, column_space_basis(span), rng.invertible_matrix<K>(a)});
  return t;
}

/// Random lattice morphism between two sheaf models at one cusp: a germ
/// Phi0 + t Phi1 + t^2 Psi whose fiber action carries V into V'. The
/// constraint on (Phi0, Phi1) is linear; a random kernel element is used.
template <ExactField K>
SeriesMatrix<K> random_germ(InstanceRng& rng, const PhiMap<K>& src, const PhiMap<K>& dst, int precision) {
  const auto rs = src.r(), rt = dst.r();
  const std::size_t unknowns = 2 * rt * rs;
  auto image_basis = mu<K>(rt) * w_matrix(dst);
  auto v = mu<K>(rs) * w_matrix(src);
  // annihilator of V': rows y with y V' = 0
  auto ann = kernel_basis(image_basis.transpose());
  // conditions y J v_i = 0 for y in ann, v_i columns of V
  KMatrix<K> sys(ann.size() * v.cols(), unknowns);
  auto index = [&](int block, std::size_t i, std::size_t k) { return static_cast<std::size_t>(block) * rt * rs + i * rs + k; };
  for (std::size_t y = 0; y < ann.size(); ++y)
    for (std::size_t c = 0; c < v.cols(); ++c) {
      const auto row = y * v.cols() + c;
      // (J v)_top = Phi0 x, (J v)_bottom = Phi1 x + Phi0 z with v = (x; z)
      for (std::size_t i = 0; i < rt; ++i)
        for (std::size_t k = 0; k < rs; ++k) {
          const K& x = v(k, c);
          const K& z = v(rs + k, c);
          sys(row, index(0, i, k)) += ann[y][i] * x + ann[y][rt + i] * z;
          sys(row, index(1, i, k)) += ann[y][rt + i] * x;
        }
    }
  auto kernel = kernel_basis(sys);
  std::vector<K> sol(unknowns);
  for (const auto& kv : kernel) {
    K c = rng.scalar<K>();
    for (std::size_t u = 0; u < unknowns; ++u) sol[u] += c * kv[u];
  }
  KMatrix<K> phi0(rt, rs), phi1(rt, rs);
  for (std::size_t i = 0; i < rt; ++i)
    for (std::size_t k = 0; k < rs; ++k) {
      phi0(i, k) = sol[index(0, i, k)];
      phi1(i, k) = sol[index(1, i, k)];
    }
  auto germ = SeriesMatrix<K>::from_jets({phi0, phi1}, rt, rs, precision);
  auto tail = rng.series_matrix<K>(rt, rs, precision, 3);
  for (std::size_t i = 0; i < rt; ++i)
    for (std::size_t k = 0; k < rs; ++k) germ(i, k) += tail(i, k).shifted_up(2);
  return germ;
}

}  // namespace cuspsheaf
