#include <gtest/gtest.h>

#include "cuspsheaf/oracle.hpp"
#include "cuspsheaf/selftest.hpp"
#include "helpers.hpp"

namespace cuspsheaf::testing {
namespace {

constexpr int N = 8;

TEST(Oracle, MinGenerators) {
  EXPECT_EQ(oracle_min_generators(lattice(1, N, {{{1}}})), 1u);
  EXPECT_EQ(oracle_min_generators(lattice(1, N, {{{0, 0, 1}}, {{0, 0, 0, 1}}})), 2u);
  auto m = lattice(2, N, {{{1}, {0, 1}}, {{0, 0, 1}, {0}}, {{0, 0, 0, 1}, {0}}});
  EXPECT_EQ(oracle_min_generators(m), 3u);
  // redundant generators do not count
  EXPECT_EQ(oracle_min_generators(lattice(1, N, {{{1}}, {{0, 0, 1}}, {{2, 0, 5}}})), 1u);
}

TEST(Oracle, Torsion) {
  PhiMap<Q> zero(1, mat({{0}}), mat({{0}}));
  auto w = oracle_torsion(zero, N);
  ASSERT_TRUE(w);
  EXPECT_FALSE((*w)[0].is_zero());

  PhiMap<Q> stack(2, mat({{1, 0}, {0, 1}}), mat({{0, 0}, {0, 0}}));
  EXPECT_FALSE(oracle_torsion(stack, N));
  EXPECT_TRUE(is_injective(stack));

  // dependent columns of [A; B]
  PhiMap<Q> dep(2, mat({{1, 2}, {0, 0}}), mat({{0, 0}, {1, 2}}));
  EXPECT_TRUE(oracle_torsion(dep, N));
  EXPECT_FALSE(oracle_torsion(PhiMap<Q>(1, mat({{0}}), mat({{1}})), N));
}

TEST(Oracle, PrecisionStability) {
  auto compute = [](int n) {
    auto d = decompose(lattice(1, n, {{{0, 0, 1}}, {{0, 0, 0, 1}}}));
    return std::vector<long>{static_cast<long>(d.a), static_cast<long>(d.b)};
  };
  auto rep = oracle_precision_stability("decompose_m", 0, compute, 6);
  EXPECT_TRUE(rep.agree);
  EXPECT_EQ(compute(6), (std::vector<long>{0, 1}));
  EXPECT_EQ(rep.to_json()["verdict"], "agree");

  auto drifting = oracle_precision_stability("drift", 3, [](int n) { return std::vector<long>{n}; }, 6);
  EXPECT_FALSE(drifting.agree);
  EXPECT_EQ(drifting.to_json()["payload"]["runs"].size(), 3u);
  EXPECT_EQ(drifting.to_json()["seed"], 3);
}

TEST(Selftest, Deterministic) {
  SuiteOptions opt{42, 8, 12};
  auto run = [&] {
    std::string out;
    for (const auto& r : run_all_suites<Rational>(opt)) out += report_lines(r);
    ModP::Session p(101);
    for (const auto& r : run_all_suites<ModP>(opt)) out += report_lines(r);
    return out;
  };
  auto first = run();
  EXPECT_EQ(first, run());
  EXPECT_NE(first.find("\"suite\":\"structure\""), std::string::npos);
}

TEST(Selftest, InstanceSeeds) {
  EXPECT_EQ(InstanceRng::instance_seed(1, 1, 0), InstanceRng::instance_seed(1, 1, 0));
  EXPECT_NE(InstanceRng::instance_seed(1, 1, 0), InstanceRng::instance_seed(2, 1, 0));
  EXPECT_NE(InstanceRng::instance_seed(1, 1, 0), InstanceRng::instance_seed(1, 2, 0));
  EXPECT_NE(InstanceRng::instance_seed(1, 1, 0), InstanceRng::instance_seed(1, 1, 1));
}

}  // namespace
}  // namespace cuspsheaf::testing
