#pragma once

// Triples (E, {V_i}, {sigma_i}) on the normalization and the functor from
// torsion-free sheaves, on objects and on morphisms, in both directions.
//
// The global bundle E is bookkeeping (rank, degree, optional splitting type,
// fiber frames); all computation is local at the cusps. A sheaf is modelled
// by its extension data phi_i, and its stalk at the i-th cusp is the pushout
// lattice of phi_i, whose submodule m^r is E near p_i in the frame t^2 e_j.

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/extension.hpp"

namespace cuspsheaf {

template <ExactField K>
struct BundleData {
  std::size_t rank = 0;
  long degree = 0;
  std::optional<std::vector<long>> splitting_type;
  /// Frame of E at each marked point: model coordinates = T * frame
  /// coordinates. Empty means identity at every point.
  std::vector<KMatrix<K>> trivializations;

  friend bool operator==(const BundleData&, const BundleData&) = default;
};

template <ExactField K>
struct CuspTriple {
  std::size_t a = 0;
  KMatrix<K> V;      // 2r x a, reduced column echelon form
  KMatrix<K> sigma;  // a x a, matrix of sigma in the basis given by V's columns

  friend bool operator==(const CuspTriple&, const CuspTriple&) = default;
};

template <ExactField K>
struct Triple {
  BundleData<K> bundle;
  std::vector<CuspTriple<K>> cusps;

  friend bool operator==(const Triple&, const Triple&) = default;
};

template <ExactField K>
struct SheafCusp {
  std::size_t a = 0;
  PhiMap<K> phi;

  friend bool operator==(const SheafCusp&, const SheafCusp&) = default;
};

template <ExactField K>
struct SheafModel {
  std::size_t rank = 0;
  long degree = 0;
  std::vector<SheafCusp<K>> cusps;
  long e_degree = 0;

  friend bool operator==(const SheafModel&, const SheafModel&) = default;
};

/// deg E from (r, d, a). The default follows the Euler characteristic
/// computation d + sum a_i - n r; `theorem_statement` gives d - n r - sum a_i.
enum class DegreeConvention { proof, theorem_statement };

inline long degree_ledger(std::size_t r, long d, std::span<const std::size_t> semiranks,
                          DegreeConvention conv = DegreeConvention::proof) {
  long sum = 0;
  for (auto a : semiranks) {
    if (a > r)
      throw InvariantError("semirank " + std::to_string(a) + " exceeds rank " + std::to_string(r));
    sum += static_cast<long>(a);
  }
  long nr = static_cast<long>(semiranks.size() * r);
  return conv == DegreeConvention::proof ? d + sum - nr : d - nr - sum;
}

/// Inverse of degree_ledger: d from deg E.
inline long sheaf_degree(std::size_t r, long e_degree, std::span<const std::size_t> semiranks,
                         DegreeConvention conv = DegreeConvention::proof) {
  long at_zero = degree_ledger(r, 0, semiranks, conv);
  return e_degree - at_zero;
}

template <ExactField K>
std::vector<std::size_t> semiranks_of(const SheafModel<K>& s) {
  std::vector<std::size_t> out;
  for (const auto& c : s.cusps) out.push_back(c.a);
  return out;
}

template <ExactField K>
std::vector<std::size_t> semiranks_of(const Triple<K>& t) {
  std::vector<std::size_t> out;
  for (const auto& c : t.cusps) out.push_back(c.a);
  return out;
}

template <ExactField K>
void validate(const SheafModel<K>& s) {
  if (s.rank == 0) throw InvariantError("sheaf model rank must be positive");
  for (std::size_t i = 0; i < s.cusps.size(); ++i) {
    const auto& c = s.cusps[i];
    if (c.a > s.rank || c.phi.a() != c.a || c.phi.r() != s.rank)
      throw InvariantError("cusp " + std::to_string(i) + ": phi shape does not match (r, a)");
    if (!is_injective(c.phi))
      throw MathError(MathError::Reason::torsion,
                      "cusp " + std::to_string(i) + ": phi is not injective, the sheaf has torsion");
  }
}

template <ExactField K>
SheafModel<K> make_sheaf_model(std::size_t r, long d, std::vector<SheafCusp<K>> cusps,
                               DegreeConvention conv = DegreeConvention::proof) {
  SheafModel<K> s{r, d, std::move(cusps), 0};
  validate(s);
  auto a = semiranks_of(s);
  s.e_degree = degree_ledger(r, d, a, conv);
  return s;
}

template <ExactField K>
KMatrix<K> block_diagonal(const KMatrix<K>& t) {
  const auto n = t.rows();
  KMatrix<K> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = m(n + i, n + j) = t(i, j);
  return m;
}

template <ExactField K>
void validate(const Triple<K>& t) {
  const auto r = t.bundle.rank;
  if (r == 0) throw InvariantError("triple bundle rank must be positive");
  if (t.bundle.splitting_type) {
    const auto& s = *t.bundle.splitting_type;
    if (s.size() != r || std::accumulate(s.begin(), s.end(), 0L) != t.bundle.degree)
      throw InvariantError("splitting type must have r entries summing to the degree");
  }
  if (!t.bundle.trivializations.empty()) {
    if (t.bundle.trivializations.size() != t.cusps.size())
      throw InvariantError("need one fiber trivialization per cusp");
    for (const auto& m : t.bundle.trivializations)
      if (m.rows() != r || m.cols() != r || rank(m) != r)
        throw InvariantError("fiber trivialization must be an invertible r x r matrix");
  }
  for (std::size_t i = 0; i < t.cusps.size(); ++i) {
    const auto& c = t.cusps[i];
    auto where = "cusp " + std::to_string(i) + ": ";
    if (c.a > r) throw InvariantError(where + "dim V exceeds the rank");
    if (c.V.rows() != 2 * r || c.V.cols() != c.a) throw InvariantError(where + "V must be 2r x a");
    if (rank(c.V) != c.a) throw InvariantError(where + "V columns are not independent");
    if (!(column_space_basis(c.V) == c.V)) throw InvariantError(where + "V is not in reduced column echelon form");
    if (c.sigma.rows() != c.a || c.sigma.cols() != c.a || rank(c.sigma) != c.a)
      throw InvariantError(where + "sigma must be an invertible a x a matrix");
  }
}

template <ExactField K>
CuspTriple<K> cusp_triple(const PhiMap<K>& phi) {
  auto image = mu<K>(phi.r()) * w_matrix(phi);  // mu o phi, columns are mu(phi(e_i))
  auto v = column_space_basis(image);
  auto sigma = solve(v, image);
  if (!sigma || v.cols() != phi.a())
    throw MathError(MathError::Reason::torsion, "phi is not injective, the sheaf has torsion");
  return CuspTriple<K>{phi.a(), std::move(v), std::move(*sigma)};
}

/// V_i = mu(phi_i(k^a)) in its canonical basis, sigma_i = mu o phi_i o nu_i.
template <ExactField K>
Triple<K> to_triple(const SheafModel<K>& s) {
  validate(s);
  Triple<K> t;
  t.bundle.rank = s.rank;
  t.bundle.degree = s.e_degree;
  for (const auto& c : s.cusps) t.cusps.push_back(cusp_triple(c.phi));
  return t;
}

/// phi_i = mu^{-1} o sigma_i o nu_i^{-1}.
template <ExactField K>
SheafModel<K> from_triple(const Triple<K>& t, DegreeConvention conv = DegreeConvention::proof) {
  validate(t);
  const auto r = t.bundle.rank;
  auto mu_inv = *inverse(mu<K>(r));
  std::vector<SheafCusp<K>> cusps;
  for (std::size_t i = 0; i < t.cusps.size(); ++i) {
    const auto& c = t.cusps[i];
    KMatrix<K> v = t.bundle.trivializations.empty() ? c.V : block_diagonal(t.bundle.trivializations[i]) * c.V;
    auto w = mu_inv * (v * c.sigma);
    KMatrix<K> amat(r, c.a), bmat(r, c.a);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < c.a; ++k) {
        amat(j, k) = w(WSpace::one_index(j), k);
        bmat(j, k) = w(WSpace::t_index(j), k);
      }
    cusps.push_back(SheafCusp<K>{c.a, PhiMap<K>(r, std::move(amat), std::move(bmat))});
  }
  auto a = semiranks_of(t);
  long d = sheaf_degree(r, t.bundle.degree, a, conv);
  return make_sheaf_model(r, d, std::move(cusps), conv);
}

template <ExactField K>
std::vector<SemirankDiagnostic> semirank_diagnostics(const SheafModel<K>& s, int precision) {
  std::vector<SemirankDiagnostic> out;
  for (const auto& c : s.cusps) out.push_back(semirank_diagnostic(c.phi, precision));
  return out;
}

/// A morphism of sheaf models, given at each cusp by its germ: an r' x r
/// series matrix in the pushout coordinates of source and target.
template <ExactField K>
struct SheafMorphism {
  std::vector<SeriesMatrix<K>> germs;

  friend bool operator==(const SheafMorphism&, const SheafMorphism&) = default;
};

/// Local data of a bundle map Phi : E -> E' at a marked point: its fiber
/// Phi(0), its first-order term, and optionally the whole germ.
template <ExactField K>
struct CuspMorphismData {
  KMatrix<K> fiber;
  KMatrix<K> first_order;
  std::optional<SeriesMatrix<K>> germ;

  /// The map induced on E_(p) ⊕ (E (x) omega)_(p): the action of Phi on
  /// W = (O/m^2) (x) E_p carried across mu. It is [[Phi0, 0], [Phi1, Phi0]];
  /// the first-order term feeds the fiber block into the omega block.
  KMatrix<K> fiber_action() const {
    const auto rt = fiber.rows(), rs = fiber.cols();
    KMatrix<K> j(2 * rt, 2 * rs);
    for (std::size_t i = 0; i < rt; ++i)
      for (std::size_t k = 0; k < rs; ++k) {
        j(i, k) = fiber(i, k);
        j(rt + i, rs + k) = fiber(i, k);
        j(rt + i, k) = first_order(i, k);
      }
    return j;
  }

  friend bool operator==(const CuspMorphismData&, const CuspMorphismData&) = default;
};

template <ExactField K>
struct TripleMorphism {
  std::vector<CuspMorphismData<K>> cusps;

  friend bool operator==(const TripleMorphism&, const TripleMorphism&) = default;
};

/// Matrix K with J V = V' K, i.e. J restricted to V in canonical bases, or
/// nullopt if J(V) is not contained in V'.
template <ExactField K>
std::optional<KMatrix<K>> restrict_to_subspaces(const KMatrix<K>& j, const CuspTriple<K>& src,
                                                const CuspTriple<K>& dst) {
  auto image = j * src.V;
  if (dst.a == 0) return image.is_zero() ? std::optional<KMatrix<K>>(KMatrix<K>(0, src.a)) : std::nullopt;
  return solve(dst.V, image);
}

template <ExactField K>
struct FunctorReport {
  TripleMorphism<K> morphism;
  std::vector<KMatrix<K>> induced;            // f_p : k^a -> k^a' per cusp
  std::vector<KMatrix<K>> on_subspaces;       // J|_V : V -> V' in canonical bases
  std::vector<bool> v_containment;            // J(V) ⊂ V'
  std::vector<bool> extension_square;         // J mu phi = mu' phi' f_p
  std::vector<bool> sigma_square;             // J sigma = sigma' J on V
};

namespace detail {

template <ExactField K>
void check_compatible(const SheafModel<K>& s, const SheafModel<K>& t, std::size_t n_germs) {
  if (s.cusps.size() != t.cusps.size()) throw InvariantError("source and target have different cusp counts");
  if (n_germs != s.cusps.size()) throw InvariantError("need one germ per cusp");
}

/// f_p with J (mu phi) = (mu' phi') f_p, when it exists.
template <ExactField K>
std::optional<KMatrix<K>> induced_residue_map(const KMatrix<K>& j, const PhiMap<K>& src, const PhiMap<K>& dst) {
  auto lhs = j * (mu<K>(src.r()) * w_matrix(src));
  auto basis = mu<K>(dst.r()) * w_matrix(dst);
  if (dst.a() == 0) return lhs.is_zero() ? std::optional<KMatrix<K>>(KMatrix<K>(0, src.a())) : std::nullopt;
  return solve(basis, lhs);
}

template <ExactField K>
bool germ_preserves_lattices(const SeriesMatrix<K>& germ, const PhiMap<K>& src, const PhiMap<K>& dst,
                             int precision) {
  auto ls = pushout(src, precision).lattice;
  auto lt = pushout(dst, precision).lattice;
  LatticeAnalysis<K> target(*lt);
  for (const auto& g : ls->generators())
    if (!target.contains(germ * g)) return false;
  return true;
}

}  // namespace detail

/// Phi = pi^*(f|E)/torsion at each cusp and its action on the doubled fibers.
/// Throws MathError(not_a_morphism) if f does not map the source stalks into
/// the target stalks; containment and commutativity results are reported.
template <ExactField K>
FunctorReport<K> functor_on_morphism(const SheafModel<K>& s, const SheafModel<K>& t, const SheafMorphism<K>& f,
                                     int precision) {
  detail::check_compatible(s, t, f.germs.size());
  auto ts = to_triple(s), tt = to_triple(t);
  FunctorReport<K> rep;
  for (std::size_t i = 0; i < s.cusps.size(); ++i) {
    const auto& germ = f.germs[i];
    if (germ.rows() != t.rank || germ.cols() != s.rank) throw InvariantError("germ must be r' x r");
    auto g = germ.with_precision(precision);
    if (!detail::germ_preserves_lattices(g, s.cusps[i].phi, t.cusps[i].phi, precision))
      throw MathError(MathError::Reason::not_a_morphism,
                      "cusp " + std::to_string(i) + ": map does not send the source stalk into the target stalk");
    CuspMorphismData<K> data{g.jet(0), g.jet(1), g};
    auto j = data.fiber_action();
    auto on_v = restrict_to_subspaces(j, ts.cusps[i], tt.cusps[i]);
    auto fp = detail::induced_residue_map(j, s.cusps[i].phi, t.cusps[i].phi);
    rep.v_containment.push_back(on_v.has_value());
    rep.extension_square.push_back(fp.has_value());
    bool square = false;
    if (on_v) square = (*on_v * ts.cusps[i].sigma) == (tt.cusps[i].sigma * *on_v);
    rep.sigma_square.push_back(square);
    rep.on_subspaces.push_back(on_v.value_or(KMatrix<K>()));
    rep.induced.push_back(fp.value_or(KMatrix<K>()));
    rep.morphism.cusps.push_back(std::move(data));
  }
  return rep;
}

/// Rebuilds f : F -> F' from a morphism of triples. The residue map f_p comes
/// from mu o phi and mu' o phi' being isomorphisms onto V and V'; f is the
/// pushout map determined by Phi and f_p, whose germ is Phi itself (or the
/// 1-jet Phi0 + t Phi1 when no germ is supplied).
template <ExactField K>
SheafMorphism<K> morphism_from_triple(const TripleMorphism<K>& phi_t, const Triple<K>& t1, const Triple<K>& t2,
                                      int precision) {
  validate(t1);
  validate(t2);
  if (phi_t.cusps.size() != t1.cusps.size() || t1.cusps.size() != t2.cusps.size())
    throw InvariantError("triple morphism must have one entry per cusp");
  auto s1 = from_triple(t1), s2 = from_triple(t2);
  const auto r1 = t1.bundle.rank, r2 = t2.bundle.rank;
  SheafMorphism<K> f;
  for (std::size_t i = 0; i < phi_t.cusps.size(); ++i) {
    const auto& c = phi_t.cusps[i];
    auto where = "cusp " + std::to_string(i) + ": ";
    if (c.fiber.rows() != r2 || c.fiber.cols() != r1 || c.first_order.rows() != r2 || c.first_order.cols() != r1)
      throw InvariantError(where + "fiber matrices must be r' x r");
    SeriesMatrix<K> germ = c.germ ? c.germ->with_precision(precision)
                                  : SeriesMatrix<K>::from_jets({c.fiber, c.first_order}, r2, r1, precision);
    if (!(germ.jet(0) == c.fiber) || !(germ.jet(1) == c.first_order))
      throw InvariantError(where + "germ disagrees with the fiber data");
    auto j = c.fiber_action();
    if (!restrict_to_subspaces(j, t1.cusps[i], t2.cusps[i]))
      throw InvariantError(where + "Phi does not map V into V'");
    auto fp = detail::induced_residue_map(j, s1.cusps[i].phi, s2.cusps[i].phi);
    if (!fp) throw std::logic_error("residue map missing although V maps into V'");
    // lifted pushout square: germ * u_i - sum_k fp(k, i) u'_k lies in m^{r'}
    for (std::size_t col = 0; col < s1.cusps[i].a; ++col) {
      auto diff = germ * s1.cusps[i].phi.lift_column(col, precision);
      for (std::size_t k = 0; k < s2.cusps[i].a; ++k)
        diff = diff - PSeries<K>::constant(precision, (*fp)(k, col)) * s2.cusps[i].phi.lift_column(k, precision);
      if (valuation(diff) < 2) throw std::logic_error("pushout square does not lift");
    }
    if (!detail::germ_preserves_lattices(germ, s1.cusps[i].phi, s2.cusps[i].phi, precision))
      throw std::logic_error("rebuilt map does not preserve the stalks");
    f.germs.push_back(std::move(germ));
  }
  return f;
}

template <ExactField K>
SheafMorphism<K> compose(const SheafMorphism<K>& g, const SheafMorphism<K>& f) {
  if (g.germs.size() != f.germs.size()) throw InvariantError("cannot compose: cusp counts differ");
  SheafMorphism<K> h;
  for (std::size_t i = 0; i < f.germs.size(); ++i) h.germs.push_back(g.germs[i] * f.germs[i]);
  return h;
}

template <ExactField K>
SheafMorphism<K> identity_morphism(const SheafModel<K>& s, int precision) {
  return SheafMorphism<K>{std::vector<SeriesMatrix<K>>(s.cusps.size(), SeriesMatrix<K>::identity(s.rank, precision))};
}

/// Fiber data of the composite: the 1-jet of (Psi0 + t Psi1)(Phi0 + t Phi1).
template <ExactField K>
TripleMorphism<K> compose(const TripleMorphism<K>& g, const TripleMorphism<K>& f) {
  TripleMorphism<K> h;
  for (std::size_t i = 0; i < f.cusps.size(); ++i) {
    const auto& a = g.cusps[i];
    const auto& b = f.cusps[i];
    std::optional<SeriesMatrix<K>> germ;
    if (a.germ && b.germ) germ = *a.germ * *b.germ;
    h.cusps.push_back({a.fiber * b.fiber, a.first_order * b.fiber + a.fiber * b.first_order, std::move(germ)});
  }
  return h;
}

struct RoundtripReport {
  std::size_t a_start = 0, b_start = 0, a_end = 0, b_end = 0;
  bool isomorphic = false;
  bool witness_verified = false;
  bool equal_in_frame = false;
  bool pass() const { return isomorphic && witness_verified && equal_in_frame && a_start == a_end && b_start == b_end; }
};

/// extract_phi -> to_triple -> from_triple -> pushout, compared with M both
/// abstractly and as a submodule after undoing the recorded basis changes.
template <ExactField K>
RoundtripReport roundtrip_object(const Lattice<K>& m, long d, DegreeConvention conv = DegreeConvention::proof) {
  RoundtripReport rep;
  auto ex = extract_phi(m);
  rep.a_start = ex.decomposition.a;
  rep.b_start = ex.decomposition.b;
  auto model = make_sheaf_model<K>(m.rank(), d, {SheafCusp<K>{ex.decomposition.a, ex.phi}}, conv);
  auto back = from_triple(to_triple(model), conv);
  auto p = pushout(back.cusps.front().phi, m.precision());
  if (!p.lattice) return rep;
  auto iso = lattice_iso_check(*p.lattice, m);
  rep.a_end = iso.a1;
  rep.b_end = iso.b1;
  rep.isomorphic = iso.isomorphic;
  rep.witness_verified = iso.witness && verify_iso(*p.lattice, m, *iso.witness);
  rep.equal_in_frame = same_lattice(reconstruct_in_frame(ex.frame, *p.lattice), m);
  return rep;
}

}  // namespace cuspsheaf
