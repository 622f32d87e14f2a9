#pragma once

// Seeded property and oracle suites. Each suite returns a summary plus one
// report per disagreement; the CLI prints them as JSON lines and the
// acceptance runner turns them into verdicts.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/io.hpp"
#include "cuspsheaf/oracle.hpp"
#include "cuspsheaf/random.hpp"

namespace cuspsheaf {

struct SuiteResult {
  std::string suite;
  std::string field;
  std::size_t instances = 0;
  std::size_t disagreements = 0;
  json summary = json::object();
  std::vector<OracleReport> reports;

  bool pass() const { return disagreements == 0; }

  json summary_json() const {
    json j{{"suite", suite},
           {"field", field},
           {"instances", instances},
           {"disagreements", disagreements},
           {"verdict", pass() ? "PASS" : "FAIL"}};
    if (!summary.empty()) j["summary"] = summary;
    return j;
  }
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  std::size_t cases = 100;
  int precision = 12;
};

namespace selftest_detail {

enum Suite : std::uint64_t {
  structure = 1,
  invariance,
  torsion,
  object_roundtrip,
  lift_invariance,
  degree_ledger,
  morphisms,
  semirank_diagnostic,
  precision_stability,
};

template <ExactField K>
struct Runner {
  SuiteResult result;
  std::uint64_t seed;
  Suite suite;

  Runner(const char* name, Suite s, std::uint64_t base_seed) : seed(base_seed), suite(s) {
    result.suite = name;
    result.field = FieldDesc::rational().str();
    if constexpr (std::is_same_v<K, ModP>) result.field = FieldDesc::prime(ModP::modulus()).str();
  }

  /// Runs one instance; `body` returns an empty payload when all checks agree.
  /// Exceptions on valid instances count as disagreements.
  void instance(std::size_t index, const std::function<json(InstanceRng&, std::uint64_t)>& body) {
    const auto s = InstanceRng::instance_seed(seed, suite, index);
    InstanceRng rng(s);
    ++result.instances;
    json payload;
    try {
      payload = body(rng, s);
    } catch (const std::exception& e) {
      payload = json{{"exception", e.what()}};
    }
    if (!payload.is_null()) {
      ++result.disagreements;
      result.reports.push_back(OracleReport{result.suite, s, false, std::move(payload)});
    }
  }
};

inline json pair_json(std::size_t a, std::size_t b) { return json::array({a, b}); }

}  // namespace selftest_detail

/// Criterion: a + b = r, a + 2b = oracle_min_generators, Cramer split in R.
/// Half the instances are unconstrained random lattices, half are drawn from a
/// prescribed stratum, which is then also checked.
template <ExactField K>
SuiteResult suite_structure(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("structure", selftest_detail::structure, opt.seed);
  std::set<std::pair<std::size_t, std::size_t>> strata;
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const std::size_t r = 1 + (i / 2) % 4;
      std::optional<std::size_t> target;
      auto m = [&] {
        if (i % 2 == 0) return random_lattice<K>(rng, r, opt.precision);
        target = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r)));
        return random_stratified_lattice<K>(rng, r, *target, opt.precision);
      }();
      auto nf = normal_form(m);
      const auto a = nf.decomposition.a, b = nf.decomposition.b;
      strata.insert({a, b});
      const auto mu = oracle_min_generators(m);
      const bool ok = a + b == r && a + 2 * b == mu && nf.split_verified && (!target || *target == a);
      if (ok) return nullptr;
      return json{{"lattice", Codec<K>::lattice(m)}, {"decompose", selftest_detail::pair_json(a, b)},
                  {"oracle_min_generators", mu}, {"split_verified", nf.split_verified},
                  {"expected_a", target ? json(*target) : json(nullptr)}};
    });
  json covered = json::array();
  for (const auto& [a, b] : strata) covered.push_back(selftest_detail::pair_json(a, b));
  run.result.summary["strata"] = covered;
  return run.result;
}

/// Criterion: (a, b) unchanged under 10 generator-set moves and ambient
/// basis changes per instance.
template <ExactField K>
SuiteResult suite_invariance(const SuiteOptions& opt, int moves = 10) {
  selftest_detail::Runner<K> run("invariance", selftest_detail::invariance, opt.seed);
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 4));
      auto m = random_lattice<K>(rng, r, opt.precision);
      auto base = decompose(m);
      json trail = json::array();
      for (int k = 0; k < moves; ++k) {
        auto moved = rng.chance(25) ? random_ambient_change(rng, m) : random_generator_move(rng, m);
        auto d = decompose(moved);
        if (d.a != base.a || d.b != base.b)
          return json{{"lattice", Codec<K>::lattice(m)}, {"moved", Codec<K>::lattice(moved)},
                      {"before", selftest_detail::pair_json(base.a, base.b)},
                      {"after", selftest_detail::pair_json(d.a, d.b)}, {"move", k}};
      }
      return nullptr;
    });
  return run.result;
}

/// Criterion: torsion_search finds a witness iff phi is not injective, and
/// the brute-force search agrees.
template <ExactField K>
SuiteResult suite_torsion(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("torsion", selftest_detail::torsion, opt.seed);
  std::size_t with_torsion = 0;
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
      const auto a = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(r)));
      auto phi = random_phi<K>(rng, r, a, 60, opt.precision);
      auto p = pushout(phi, opt.precision);
      const bool injective = is_injective(phi);
      auto w = torsion_search(p);
      auto o = oracle_torsion(phi, opt.precision);
      if (w) ++with_torsion;
      const bool ok = w.has_value() == !injective && o.has_value() == !injective &&
                      p.lattice.has_value() == injective && (!w || verify_torsion_witness(p, *w));
      if (ok) return nullptr;
      return json{{"phi", Codec<K>::phi_map(phi)}, {"injective", injective}, {"torsion_search", w.has_value()},
                  {"oracle_torsion", o.has_value()}};
    });
  run.result.summary["with_torsion"] = with_torsion;
  return run.result;
}

/// Criterion: extract_phi -> to_triple -> from_triple -> pushout gives back an
/// isomorphic lattice with the same (a, b).
template <ExactField K>
SuiteResult suite_object_roundtrip(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("object_roundtrip", selftest_detail::object_roundtrip, opt.seed);
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 4));
      auto m = rng.chance(50) ? random_lattice<K>(rng, r, opt.precision)
                              : random_stratified_lattice<K>(rng, r, static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r))), opt.precision);
      auto rep = roundtrip_object(m, rng.uniform(-5, 5));
      if (rep.pass()) return nullptr;
      return json{{"lattice", Codec<K>::lattice(m)},
                  {"start", selftest_detail::pair_json(rep.a_start, rep.b_start)},
                  {"end", selftest_detail::pair_json(rep.a_end, rep.b_end)},
                  {"isomorphic", rep.isomorphic},
                  {"equal_in_frame", rep.equal_in_frame}};
    });
  return run.result;
}

/// Criterion: changing the lift of phi by t^2 psi does not change the pushout.
template <ExactField K>
SuiteResult suite_lift_invariance(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("lift_invariance", selftest_detail::lift_invariance, opt.seed);
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
      const auto a = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r)));
      auto phi = random_phi<K>(rng, r, a, 100, opt.precision);
      auto psi = rng.series_matrix<K>(r, a, opt.precision, 4);
      auto moved = lift_class_normalize(phi, psi);
      auto l1 = *pushout(phi, opt.precision).lattice;
      auto l2 = *pushout(moved, opt.precision).lattice;
      auto iso = lattice_iso_check(l1, l2);
      const bool ok = iso.isomorphic && verify_iso(l1, l2, *iso.witness) && same_lattice(l1, l2);
      if (ok) return nullptr;
      return json{{"phi", Codec<K>::phi_map(phi)}, {"moved", Codec<K>::phi_map(moved)},
                  {"before", selftest_detail::pair_json(iso.a1, iso.b1)},
                  {"after", selftest_detail::pair_json(iso.a2, iso.b2)}};
    });
  return run.result;
}

/// Criterion: deg E = d + sum a_i - n r on models built from lattices, stable
/// under basis changes, additive over two cusps, with the other convention
/// reported alongside.
template <ExactField K>
SuiteResult suite_degree_ledger(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("degree_ledger", selftest_detail::degree_ledger, opt.seed);
  std::size_t differing = 0;
  json example;
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
      const long d = rng.uniform(-6, 6);
      auto m1 = random_lattice<K>(rng, r, opt.precision);
      auto m2 = random_lattice<K>(rng, r, opt.precision);
      auto e1 = extract_phi(m1), e2 = extract_phi(m2);
      const auto a1 = e1.decomposition.a, a2 = e2.decomposition.a;
      auto single = make_sheaf_model<K>(r, d, {SheafCusp<K>{a1, e1.phi}});
      auto moved = extract_phi(random_generator_move(rng, random_ambient_change(rng, m1)));
      auto single_moved = make_sheaf_model<K>(r, d, {SheafCusp<K>{moved.decomposition.a, moved.phi}});
      auto two = make_sheaf_model<K>(r, d, {SheafCusp<K>{a1, e1.phi}, SheafCusp<K>{a2, e2.phi}});
      auto two_theorem = make_sheaf_model<K>(r, d, {SheafCusp<K>{a1, e1.phi}, SheafCusp<K>{a2, e2.phi}},
                                             DegreeConvention::theorem_statement);
      const long ri = static_cast<long>(r), sa = static_cast<long>(a1 + a2);
      auto t = to_triple(two);
      const bool ok = single.e_degree == d + static_cast<long>(a1) - ri && single_moved.e_degree == single.e_degree &&
                      two.e_degree == d + sa - 2 * ri && two_theorem.e_degree == d - 2 * ri - sa &&
                      t.bundle.degree == two.e_degree && from_triple(t) == two &&
                      t.cusps[0] == to_triple(single).cusps[0] &&
                      t.cusps[1] == to_triple(make_sheaf_model<K>(r, d, {SheafCusp<K>{a2, e2.phi}})).cusps[0];
      if (two.e_degree != two_theorem.e_degree) {
        ++differing;
        if (example.is_null())
          example = json{{"r", r}, {"d", d}, {"a", {a1, a2}}, {"proof", two.e_degree}, {"theorem_statement", two_theorem.e_degree}};
      }
      if (ok) return nullptr;
      return json{{"lattices", {Codec<K>::lattice(m1), Codec<K>::lattice(m2)}}, {"d", d},
                  {"e_degree_single", single.e_degree}, {"e_degree_moved", single_moved.e_degree},
                  {"e_degree_two", two.e_degree}, {"e_degree_theorem", two_theorem.e_degree}};
    });
  run.result.summary["theorem_statement_differs"] = differing;
  if (!example.is_null()) run.result.summary["discrepancy_example"] = example;
  return run.result;
}

namespace selftest_detail {

/// A sheaf model with one cusp: half from extract_phi of a random lattice,
/// half from a random injective phi.
template <ExactField K>
SheafModel<K> random_model(InstanceRng& rng, std::size_t r, int precision, bool from_lattice) {
  if (from_lattice) {
    auto ex = extract_phi(random_lattice<K>(rng, r, precision));
    return make_sheaf_model<K>(r, 0, {SheafCusp<K>{ex.decomposition.a, ex.phi}});
  }
  const auto a = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(r)));
  return make_sheaf_model<K>(r, 0, {SheafCusp<K>{a, random_phi<K>(rng, r, a, 100, precision)}});
}

template <ExactField K>
bool same_fiber_data(const TripleMorphism<K>& x, const TripleMorphism<K>& y) {
  if (x.cusps.size() != y.cusps.size()) return false;
  for (std::size_t i = 0; i < x.cusps.size(); ++i)
    if (!(x.cusps[i].fiber == y.cusps[i].fiber) || !(x.cusps[i].first_order == y.cusps[i].first_order)) return false;
  return true;
}

}  // namespace selftest_detail

/// Criterion: both morphism round trips are identities and the functor
/// respects composition and identities. The literal sigma square is asserted
/// on models read off lattices and counted on arbitrary models.
template <ExactField K>
SuiteResult suite_morphisms(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("morphisms", selftest_detail::morphisms, opt.seed);
  std::size_t square_checked = 0, square_holds_arbitrary = 0, arbitrary = 0;
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const int n = opt.precision;
      const bool from_lattice = i % 2 == 0;
      auto rank_draw = [&] { return static_cast<std::size_t>(rng.uniform(1, 3)); };
      auto s1 = selftest_detail::random_model<K>(rng, rank_draw(), n, from_lattice);
      auto s2 = selftest_detail::random_model<K>(rng, rank_draw(), n, from_lattice);
      auto s3 = selftest_detail::random_model<K>(rng, rank_draw(), n, from_lattice);
      SheafMorphism<K> f{{random_germ(rng, s1.cusps[0].phi, s2.cusps[0].phi, n)}};
      SheafMorphism<K> g{{random_germ(rng, s2.cusps[0].phi, s3.cusps[0].phi, n)}};
      auto t1 = to_triple(s1), t2 = to_triple(s2);
      json failures = json::array();

      auto ff = functor_on_morphism(s1, s2, f, n);
      if (!ff.v_containment[0] || !ff.extension_square[0]) failures.push_back("containment");
      if (!(morphism_from_triple(ff.morphism, t1, t2, n) == f)) failures.push_back("inverse_after_functor");

      // a triple morphism given only by fiber data
      auto seed_model = from_triple(t1), seed_target = from_triple(t2);
      auto germ = random_germ(rng, seed_model.cusps[0].phi, seed_target.cusps[0].phi, n);
      TripleMorphism<K> phi_t{{CuspMorphismData<K>{germ.jet(0), germ.jet(1), std::nullopt}}};
      auto rebuilt = morphism_from_triple(phi_t, t1, t2, n);
      if (!selftest_detail::same_fiber_data(functor_on_morphism(s1, s2, rebuilt, n).morphism, phi_t))
        failures.push_back("functor_after_inverse");

      auto fg = functor_on_morphism(s2, s3, g, n);
      auto composite = functor_on_morphism(s1, s3, compose(g, f), n);
      if (!selftest_detail::same_fiber_data(composite.morphism, compose(fg.morphism, ff.morphism)))
        failures.push_back("composition");
      auto id = functor_on_morphism(s1, s1, identity_morphism(s1, n), n);
      if (!(id.morphism.cusps[0].fiber_action() == KMatrix<K>::identity(2 * s1.rank)) || !id.sigma_square[0])
        failures.push_back("identity");

      if (from_lattice) {
        ++square_checked;
        if (!ff.sigma_square[0]) failures.push_back("sigma_square");
      } else {
        ++arbitrary;
        if (ff.sigma_square[0]) ++square_holds_arbitrary;
      }
      if (failures.empty()) return nullptr;
      json models = json::array();
      for (const auto* s : {&s1, &s2, &s3}) models.push_back(Codec<K>::sheaf_model(*s));
      return json{{"failed", failures}, {"models", models}, {"f", Codec<K>::sheaf_morphism(f)},
                  {"g", Codec<K>::sheaf_morphism(g)}};
    });
  run.result.summary["sigma_square_asserted"] = square_checked;
  run.result.summary["sigma_square_arbitrary_models"] = {{"instances", arbitrary}, {"holds", square_holds_arbitrary}};
  return run.result;
}

/// Criterion: semirank of the pushout versus a for arbitrary triples. A
/// mismatch is expected exactly when V meets the omega-fiber summand; such
/// instances are classified, anything else is a disagreement.
template <ExactField K>
SuiteResult suite_semirank_diagnostic(const SuiteOptions& opt) {
  selftest_detail::Runner<K> run("semirank_diagnostic", selftest_detail::semirank_diagnostic, opt.seed);
  std::size_t matches = 0, zero_projection = 0, partial_intersection = 0;
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 3));
      const auto a = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(r)));
      auto t = random_triple<K>(rng, r, a, 30);
      auto s = from_triple(t);
      auto d = semirank_diagnostic(s.cusps[0].phi, opt.precision);
      if (d.match()) ++matches;
      else if (d.omega_intersection == d.expected) ++zero_projection;
      else ++partial_intersection;
      if (d.match() != !d.in_omega_family())
        return json{{"triple", Codec<K>::triple(t)}, {"expected", d.expected}, {"observed", d.observed},
                    {"omega_intersection", d.omega_intersection}};
      return nullptr;
    });
  run.result.summary["matching_fraction"] =
      run.result.instances ? static_cast<double>(matches) / static_cast<double>(run.result.instances) : 0.0;
  run.result.summary["matches"] = matches;
  run.result.summary["mismatch_zero_fiber_projection"] = zero_projection;
  run.result.summary["mismatch_partial_omega_intersection"] = partial_intersection;
  return run.result;
}

/// Criterion: discrete outputs of the structure, torsion and round-trip
/// checks agree at every precision in `precisions`.
template <ExactField K>
SuiteResult suite_precision_stability(const SuiteOptions& opt, std::vector<int> precisions = {10, 12, 14}) {
  selftest_detail::Runner<K> run("precision_stability", selftest_detail::precision_stability, opt.seed);
  const int base = precisions.front();
  for (std::size_t i = 0; i < opt.cases; ++i)
    run.instance(i, [&](InstanceRng& rng, std::uint64_t) -> json {
      const auto r = static_cast<std::size_t>(rng.uniform(1, 4));
      const auto a = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(std::min<std::size_t>(r, 3))));
      auto m = random_lattice<K>(rng, r, base);
      auto phi = random_phi<K>(rng, std::min<std::size_t>(r, 3), a, 60, base);
      auto compute = [&](int n) {
        auto mn = m.with_precision(n);
        auto d = decompose(mn);
        auto p = pushout(phi, n);
        auto rt = roundtrip_object(mn, 0);
        return std::vector<long>{static_cast<long>(d.a), static_cast<long>(d.b),
                                 static_cast<long>(oracle_min_generators(mn)), torsion_search(p).has_value(),
                                 oracle_torsion(phi, n).has_value(), rt.pass(), static_cast<long>(rt.a_end)};
      };
      auto first = compute(base);
      json runs = json::array({json{{"precision", base}, {"outputs", first}}});
      bool agree = true;
      for (std::size_t k = 1; k < precisions.size(); ++k) {
        auto other = compute(precisions[k]);
        runs.push_back({{"precision", precisions[k]}, {"outputs", other}});
        agree = agree && other == first;
      }
      if (agree) return nullptr;
      return json{{"lattice", Codec<K>::lattice(m)}, {"phi", Codec<K>::phi_map(phi)}, {"runs", runs}};
    });
  return run.result;
}

/// All suites at the same case count, in a fixed order.
template <ExactField K>
std::vector<SuiteResult> run_all_suites(const SuiteOptions& opt) {
  std::vector<SuiteResult> out;
  out.push_back(suite_structure<K>(opt));
  out.push_back(suite_invariance<K>(opt));
  out.push_back(suite_torsion<K>(opt));
  out.push_back(suite_object_roundtrip<K>(opt));
  out.push_back(suite_lift_invariance<K>(opt));
  out.push_back(suite_degree_ledger<K>(opt));
  out.push_back(suite_morphisms<K>(opt));
  out.push_back(suite_semirank_diagnostic<K>(opt));
  out.push_back(suite_precision_stability<K>(opt));
  return out;
}

/// JSON lines: the disagreement reports of a suite, then its summary.
inline std::string report_lines(const SuiteResult& r) {
  std::string out;
  for (const auto& rep : r.reports) {
    auto j = rep.to_json();
    j["field"] = r.field;
    out += j.dump() + "\n";
  }
  out += r.summary_json().dump() + "\n";
  return out;
}

}  // namespace cuspsheaf
