// Acceptance runner: one PASS/FAIL line per criterion on stdout, suite
// summaries and any disagreement reports on stderr.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cuspsheaf/selftest.hpp"

namespace {

using namespace cuspsheaf;

constexpr std::uint64_t kSeed = 42;
constexpr std::uint64_t kPrime = 101;

/// Runs `suite` over Q and over GF(101) and returns both results.
template <class Fn>
std::vector<SuiteResult> both_fields(Fn&& suite) {
  std::vector<SuiteResult> out;
  out.push_back(suite.template operator()<Rational>());
  ModP::Session session(kPrime);
  out.push_back(suite.template operator()<ModP>());
  return out;
}

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::string detail;
};

std::size_t log_results(const std::vector<SuiteResult>& results) {
  std::size_t instances = 0;
  for (const auto& r : results) {
    std::cerr << report_lines(r);
    instances += r.instances;
  }
  return instances;
}

bool all_pass(const std::vector<SuiteResult>& results) {
  for (const auto& r : results)
    if (!r.pass()) return false;
  return true;
}

std::size_t disagreements(const std::vector<SuiteResult>& results) {
  std::size_t n = 0;
  for (const auto& r : results) n += r.disagreements;
  return n;
}

Criterion simple(int id, std::string name, const std::vector<SuiteResult>& results) {
  Criterion c{id, std::move(name), true, {}};
  const auto n = log_results(results);
  c.pass = all_pass(results);
  c.detail = std::to_string(n) + " instances, " + std::to_string(disagreements(results)) + " disagreements";
  return c;
}

Criterion structure_normal_form() {
  auto results = both_fields([]<class K>() { return suite_structure<K>({kSeed, 500, 12}); });
  auto c = simple(1, "normal form structure", results);
  // every (a, b) with a + b = r <= 4 must occur in each field
  bool covered = true;
  for (const auto& r : results) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& p : r.summary.at("strata")) seen.insert({p[0].get<std::size_t>(), p[1].get<std::size_t>()});
    for (std::size_t rank = 1; rank <= 4; ++rank)
      for (std::size_t a = 0; a <= rank; ++a) covered = covered && seen.count({a, rank - a});
  }
  c.pass = c.pass && covered;
  c.detail += covered ? ", all 14 strata covered" : ", stratum coverage incomplete";
  return c;
}

Criterion ledger() {
  auto results = both_fields([]<class K>() { return suite_degree_ledger<K>({kSeed, 200, 12}); });
  auto c = simple(6, "degree ledger", results);
  std::size_t differs = 0;
  for (const auto& r : results) differs += r.summary.at("theorem_statement_differs").get<std::size_t>();
  c.detail += ", statement variant differs on " + std::to_string(differs);
  if (results[0].summary.contains("discrepancy_example"))
    c.detail += ", e.g. " + results[0].summary.at("discrepancy_example").dump();
  return c;
}

Criterion morphism_round_trips() {
  auto results = both_fields([]<class K>() { return suite_morphisms<K>({kSeed, 100, 12}); });
  auto c = simple(7, "morphism round trips and functoriality", results);
  for (const auto& r : results)
    c.detail += ", " + r.field + " sigma square on arbitrary models " +
                r.summary.at("sigma_square_arbitrary_models").at("holds").dump() + "/" +
                r.summary.at("sigma_square_arbitrary_models").at("instances").dump();
  return c;
}

Criterion open_question() {
  auto results = both_fields([]<class K>() { return suite_semirank_diagnostic<K>({kSeed, 200, 12}); });
  auto c = simple(8, "semirank diagnostic", results);
  bool produced = true;
  for (const auto& r : results) {
    produced = produced && r.summary.contains("matching_fraction");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", r.summary.value("matching_fraction", 0.0));
    c.detail += ", " + r.field + " matching fraction " + buf + " (zero projection " +
                r.summary.value("mismatch_zero_fiber_projection", json(0)).dump() + ", partial " +
                r.summary.value("mismatch_partial_omega_intersection", json(0)).dump() + ")";
  }
  c.pass = c.pass && produced;
  return c;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::function<Criterion()>> criteria{
      structure_normal_form,
      [] {
        return simple(2, "invariance",
                      both_fields([]<class K>() { return suite_invariance<K>({kSeed, 200, 12}, 10); }));
      },
      [] {
        return simple(3, "torsion criterion", both_fields([]<class K>() { return suite_torsion<K>({kSeed, 500, 12}); }));
      },
      [] {
        return simple(4, "object round trip",
                      both_fields([]<class K>() { return suite_object_roundtrip<K>({kSeed, 500, 12}); }));
      },
      [] {
        return simple(5, "lift invariance",
                      both_fields([]<class K>() { return suite_lift_invariance<K>({kSeed, 200, 12}); }));
      },
      ledger,
      morphism_round_trips,
      open_question,
      [] {
        return simple(9, "precision stability",
                      both_fields([]<class K>() { return suite_precision_stability<K>({kSeed, 100, 10}, {10, 12, 14}); }));
      },
  };
  bool ok = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& run = criteria[i];
    Criterion c{static_cast<int>(i) + 1, "aborted", false, {}};
    try {
      c = run();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    ok = ok && c.pass;
    std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << ": " << c.detail << std::endl;
  }
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "acceptance finished in " << secs << " s\n";
  return ok ? 0 : 1;
}
