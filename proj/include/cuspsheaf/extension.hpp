#pragma once

// Extensions 0 -> E -> F -> k_P^a -> 0 at a cusp, with E_P ≅ m^r, described
// by phi : k^a -> W = (O/m^2) (x) E_p. Covers the torsion criterion, the
// pushout reconstruction F_P = (O^a ⊕ m^r) / {(x, -phi_P(x))}, and reading
// phi back off a lattice.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/lattice.hpp"

namespace cuspsheaf {

/// W with its tagged basis: index 2j is 1-bar (x) s_j, index 2j+1 is t-bar (x) s_j.
/// Kept as a plain 2r-dimensional space; never formed as a tensor product.
struct WSpace {
  std::size_t r = 0;

  std::size_t dimension() const { return 2 * r; }
  static std::size_t one_index(std::size_t j) { return 2 * j; }
  static std::size_t t_index(std::size_t j) { return 2 * j + 1; }
  std::string label(std::size_t i) const {
    return std::string(i % 2 == 0 ? "1" : "t") + "-bar(x)s_" + std::to_string(i / 2 + 1);
  }
};

/// Matrix of phi in the tagged basis of W.
template <ExactField K>
KMatrix<K> w_matrix(const PhiMap<K>& phi) {
  KMatrix<K> m(2 * phi.r(), phi.a());
  for (std::size_t j = 0; j < phi.r(); ++j)
    for (std::size_t i = 0; i < phi.a(); ++i) {
      m(WSpace::one_index(j), i) = phi.A()(j, i);
      m(WSpace::t_index(j), i) = phi.B()(j, i);
    }
  return m;
}

/// mu : W -> E_(p) ⊕ (E (x) omega)_(p); 1-bar (x) s_j goes to the j-th fiber
/// coordinate, t-bar (x) s_j to the j-th omega-fiber coordinate (via dt).
template <ExactField K>
KMatrix<K> mu(std::size_t r) {
  KMatrix<K> m(2 * r, 2 * r);
  for (std::size_t j = 0; j < r; ++j) {
    m(j, WSpace::one_index(j)) = K(1);
    m(r + j, WSpace::t_index(j)) = K(1);
  }
  return m;
}

/// phi is injective iff [A; B] has full column rank.
template <ExactField K>
bool is_injective(const PhiMap<K>& phi) {
  return rank(phi.stacked()) == phi.a();
}

/// A nonzero class (v, y) of O^a ⊕ m^r, v in k^a, killed by t^2 in F_P.
template <ExactField K>
struct TorsionWitness {
  KVector<K> v;
  SeriesVector<K> y;  // -t^2 sum_i v_i h_i
};

template <ExactField K>
struct PushoutPresentation {
  PhiMap<K> phi;
  int precision = 0;
  std::optional<Lattice<K>> lattice;  // present iff F_P is torsion-free
};

inline constexpr int kPushoutMinPrecision = 6;

/// F_P realized inside R-bar^r when phi is injective: generated by m^r
/// (t^2 e_j, t^3 e_j) and u_i = sum_j (A + B t + H t^2)(j, i) e_j.
template <ExactField K>
PushoutPresentation<K> pushout(const PhiMap<K>& phi, int precision) {
  if (precision < kPushoutMinPrecision)
    throw MathError(MathError::Reason::insufficient_precision,
                    "pushout needs precision at least " + std::to_string(kPushoutMinPrecision));
  PushoutPresentation<K> p{phi, precision, std::nullopt};
  if (!is_injective(phi)) return p;
  const auto r = phi.r();
  std::vector<SeriesVector<K>> gens;
  for (std::size_t j = 0; j < r; ++j) {
    gens.push_back(shifted_up(unit_vector<K>(r, j, precision), 2));
    gens.push_back(shifted_up(unit_vector<K>(r, j, precision), 3));
  }
  for (std::size_t i = 0; i < phi.a(); ++i) gens.push_back(phi.lift_column(i, precision));
  p.lattice.emplace(r, std::move(gens));
  return p;
}

/// Searches for v in k^a, v != 0, with t^2 (v, -t^2 sum v_i h_i) in the
/// relation module, i.e. phi_P(t^2 v) = t^4 sum v_i h_i.
template <ExactField K>
std::optional<TorsionWitness<K>> torsion_search(const PushoutPresentation<K>& p) {
  const auto& phi = p.phi;
  const int n = p.precision;
  const auto r = phi.r(), a = phi.a();
  // column i: coefficients of phi_P(t^2 e_i) - t^4 h_i, flattened entry-major
  KMatrix<K> sys(r * static_cast<std::size_t>(n + 1), a);
  for (std::size_t i = 0; i < a; ++i) {
    auto image = shifted_up(phi.lift_column(i, n), 2);
    for (std::size_t j = 0; j < r; ++j) {
      auto diff = image[j] - phi.tail(j, i, n).shifted_up(4);
      for (int e = 0; e <= n; ++e) sys(j * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(e), i) = diff[e];
    }
  }
  auto kernel = kernel_basis(sys);
  if (kernel.empty()) return std::nullopt;
  TorsionWitness<K> w{kernel.front(), zero_vector<K>(r, n)};
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < r; ++j) w.y[j] -= w.v[i] * phi.tail(j, i, n).shifted_up(2);
  return w;
}

/// Checks that t^2 (v, y) = (t^2 v, t^2 y) equals (x, -phi_P(x)) for x = t^2 v
/// and that the class is nonzero (v is not in m^a).
template <ExactField K>
bool verify_torsion_witness(const PushoutPresentation<K>& p, const TorsionWitness<K>& w) {
  const int n = p.precision;
  bool nonzero = false;
  for (const auto& x : w.v) nonzero = nonzero || !x.is_zero();
  auto lhs = shifted_up(w.y, 2);
  auto phi_x = zero_vector<K>(p.phi.r(), n);
  for (std::size_t i = 0; i < p.phi.a(); ++i)
    phi_x = phi_x + PSeries<K>::monomial(n, w.v[i], 2) * p.phi.lift_column(i, n);
  return nonzero && is_zero(lhs + phi_x);
}

/// Changing phi-bar by a morphism O^a -> E, e_i |-> t^2 psi_i, only moves the
/// lift tails: H += psi.
template <ExactField K>
PhiMap<K> lift_class_normalize(const PhiMap<K>& phi, const SeriesMatrix<K>& psi) {
  if (psi.rows() != phi.r() || psi.cols() != phi.a()) throw InvariantError("lift must be an r x a series matrix");
  SeriesMatrix<K> h = phi.H() ? phi.H()->with_precision(psi.precision()) : SeriesMatrix<K>(phi.r(), phi.a(), psi.precision());
  return PhiMap<K>(phi.r(), phi.A(), phi.B(), h + psi);
}

/// Coordinates of the pushout lattice of extract_phi, as seen in the ambient
/// space of the original lattice: ambient = Q * B * diag(1^a, t^{-2} ^b) * x.
template <ExactField K>
struct ExtensionFrame {
  SeriesMatrix<K> nakayama_basis;  // Q
  KMatrix<K> basis_change;         // B
  std::size_t a = 0;

  SeriesVector<K> to_ambient(SeriesVector<K> x) const {
    for (std::size_t j = a; j < x.size(); ++j) x[j] = x[j].shifted_down(2);
    return nakayama_basis * (basis_change * x);
  }
};

template <ExactField K>
struct ExtractedPhi {
  PhiMap<K> phi;
  Decomposition<K> decomposition;
  ExtensionFrame<K> frame;
};

/// Reads off phi from M = ⊕ R v_i ⊕ ⊕ R-bar w_j. With E = ⊕ m v_i ⊕ ⊕ R-bar w_j
/// identified with m^r through t^2 e_i -> t^2 v_i, t^2 e_{a+j} -> w_j, the free
/// generators v_i become e_i, so phi = [I_a; 0] over the trivialization s_j = e_j.
template <ExactField K>
ExtractedPhi<K> extract_phi(const Lattice<K>& m) {
  auto nf = normal_form(m);
  const auto r = m.rank();
  const auto a = nf.decomposition.a;
  KMatrix<K> amat(r, a);
  for (std::size_t i = 0; i < a; ++i) amat(i, i) = K(1);
  return ExtractedPhi<K>{PhiMap<K>(r, std::move(amat), KMatrix<K>(r, a)), nf.decomposition,
                         ExtensionFrame<K>{nf.standard.coordinates.basis(), nf.decomposition.basis_change, a}};
}

/// The pushout lattice transported into the ambient coordinates of the
/// lattice phi was extracted from.
template <ExactField K>
Lattice<K> reconstruct_in_frame(const ExtensionFrame<K>& frame, const Lattice<K>& pushout_lattice) {
  std::vector<SeriesVector<K>> gens;
  for (const auto& g : pushout_lattice.generators()) gens.push_back(frame.to_ambient(g));
  return Lattice<K>(pushout_lattice.rank(), std::move(gens));
}

/// Equality of lattices as submodules of R-bar^r (mutual containment of generators).
template <ExactField K>
bool same_lattice(const Lattice<K>& m1, const Lattice<K>& m2) {
  if (m1.rank() != m2.rank() || m1.precision() != m2.precision()) return false;
  LatticeAnalysis<K> a1(m1), a2(m2);
  for (const auto& g : m1.generators())
    if (!a2.contains(g)) return false;
  for (const auto& g : m2.generators())
    if (!a1.contains(g)) return false;
  return true;
}

/// Whether the pushout of an injective phi has semirank a. It does exactly
/// when A has full column rank, i.e. V = mu(phi(k^a)) meets the omega-fiber
/// summand only in 0; `omega_intersection` is dim V ∩ (0 ⊕ (E (x) omega)_(p)).
struct SemirankDiagnostic {
  std::size_t expected = 0;
  std::size_t observed = 0;
  std::size_t omega_intersection = 0;
  bool match() const { return expected == observed; }
  bool in_omega_family() const { return omega_intersection > 0; }
};

template <ExactField K>
SemirankDiagnostic semirank_diagnostic(const PhiMap<K>& phi, int precision) {
  auto p = pushout(phi, precision);
  if (!p.lattice) throw MathError(MathError::Reason::torsion, "semirank diagnostic needs an injective phi");
  SemirankDiagnostic d;
  d.expected = phi.a();
  d.observed = semirank(*p.lattice);
  d.omega_intersection = phi.a() - rank(phi.A());
  return d;
}

}  // namespace cuspsheaf
