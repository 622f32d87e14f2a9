#include <gtest/gtest.h>

#include "helpers.hpp"

namespace cuspsheaf::testing {
namespace {

constexpr int N = 8;

Lattice<Q> ring_r() { return lattice(1, N, {{{1}}}); }
Lattice<Q> ring_rbar() { return lattice(1, N, {{{1}}, {{0, 1}}}); }
Lattice<Q> ideal_m() { return lattice(1, N, {{{0, 0, 1}}, {{0, 0, 0, 1}}}); }
Lattice<Q> mixed() { return lattice(2, N, {{{1}, {0, 1}}, {{0, 0, 1}, {}}, {{0, 0, 0, 1}, {}}}); }
Lattice<Q> free2() { return lattice(2, N, {{{1}, {}}, {{}, {1}}}); }
Lattice<Q> r_plus_m() { return lattice(2, N, {{{1}, {}}, {{}, {0, 0, 1}}, {{}, {0, 0, 0, 1}}}); }

TEST(Lattice, Validation) {
  EXPECT_THROW(Lattice<Q>(0, {}), InvariantError);
  EXPECT_THROW(lattice(2, N, {{{1}}}), InvariantError);
  try {
    lattice(2, N, {{{1}, {}}, {{2}, {}}}).generators();
    min_generators(lattice(2, N, {{{1}, {}}, {{2}, {}}}));
    FAIL() << "expected rank deficiency";
  } catch (const MathError& e) {
    EXPECT_EQ(e.reason(), MathError::Reason::rank_deficiency);
  }
  try {
    min_generators(lattice(1, 5, {{{0, 0, 0, 1}}}));
    FAIL() << "expected insufficient precision";
  } catch (const MathError& e) {
    EXPECT_EQ(e.reason(), MathError::Reason::insufficient_precision);
  }
  EXPECT_EQ(min_generators(lattice(1, 6, {{{0, 0, 0, 1}}})), 1u);
}

TEST(Lattice, NakayamaBasis) {
  auto b = nakayama_basis(ring_rbar());
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], v(N, {{1}}));
  b = nakayama_basis(ideal_m());
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], v(N, {{0, 0, 1}}));
  b = nakayama_basis(mixed());
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], v(N, {{1}, {0, 1}}));
  EXPECT_EQ(b[1], v(N, {{0, 0, 1}, {}}));
}

TEST(Lattice, StandardForm) {
  EXPECT_EQ(standard_form(ring_r()).lattice, ring_r());
  auto sf = standard_form(ideal_m());
  EXPECT_EQ(sf.lattice, lattice(1, N, {{{1}}, {{0, 1}}}));
  // re-multiplying by the basis recovers the generators
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_EQ(sf.coordinates.to_ambient(sf.lattice.generators()[i]), ideal_m().generators()[i]);
  auto m3 = lattice(2, N, {{{1}, {}}, {{}, {0, 1}}, {{}, {0, 0, 0, 1}}});
  auto sf3 = standard_form(m3);
  EXPECT_EQ(sf3.lattice, lattice(2, N, {{{1}, {}}, {{}, {1}}, {{}, {0, 0, 1}}}));
  EXPECT_TRUE(same_lattice(lattice(2, N, {{{1}, {}}, {{}, {0, 1}}}),
                           Lattice<Q>(2, {sf3.coordinates.basis().column(0), sf3.coordinates.basis().column(1)})));
}

TEST(Lattice, PhiImage) {
  EXPECT_TRUE(phi_image(free2()).empty());
  auto w = phi_image(ring_rbar());
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0], std::vector<Q>{Q(1)});
  EXPECT_EQ(phi_image(standard_form(mixed()).lattice).size(), 1u);
  EXPECT_THROW(phi_image(ideal_m()), InvariantError);
}

TEST(Lattice, Decompose) {
  auto d = decompose(ring_rbar());
  EXPECT_EQ(d.a, 0u);
  EXPECT_EQ(d.b, 1u);
  d = decompose(free2());
  EXPECT_EQ(d.a, 2u);
  EXPECT_EQ(d.b, 0u);
  d = decompose(mixed());
  EXPECT_EQ(d.a, 1u);
  EXPECT_EQ(d.b, 1u);
  auto nf = normal_form(mixed());
  EXPECT_TRUE(nf.split_verified);
  EXPECT_EQ(nf.transcript.size(), 3u);
}

TEST(Lattice, Semirank) {
  EXPECT_EQ(semirank(lattice(3, N, {{{1}, {}, {}}, {{}, {1}, {}}, {{}, {}, {1}}})), 3u);
  EXPECT_EQ(semirank(ideal_m()), 0u);
  EXPECT_EQ(semirank(mixed()), 1u);
}

TEST(Lattice, MinGenerators) {
  EXPECT_EQ(min_generators(ring_r()), 1u);
  EXPECT_EQ(min_generators(ideal_m()), 2u);
  EXPECT_EQ(min_generators(r_plus_m()), 3u);
  EXPECT_EQ(min_generators(mixed()), 3u);
}

TEST(Lattice, Membership) {
  EXPECT_TRUE(contains(ring_r(), v(N, {{3, 0, 1}})));
  EXPECT_FALSE(contains(ring_r(), v(N, {{0, 1}})));
  EXPECT_TRUE(contains(ideal_m(), v(N, {{0, 0, 1, 1}})));
  EXPECT_FALSE(contains(ideal_m(), v(N, {{1}})));
  EXPECT_TRUE(contains(mixed(), v(N, {{2, 0, 1}, {0, 2}})));
  EXPECT_FALSE(contains(mixed(), v(N, {{0, 1}, {}})));
  EXPECT_FALSE(contains(mixed(), v(N, {{}, {1}})));
}

TEST(Lattice, IsoCheck) {
  auto res = lattice_iso_check(ring_rbar(), ideal_m());
  EXPECT_TRUE(res.isomorphic);
  ASSERT_TRUE(res.witness);
  EXPECT_TRUE(verify_iso(ring_rbar(), ideal_m(), *res.witness));
  EXPECT_FALSE(lattice_iso_check(free2(), r_plus_m()).isomorphic);
  auto t_rbar = lattice(1, N, {{{0, 1}}, {{0, 0, 1}}});
  res = lattice_iso_check(t_rbar, ideal_m());
  EXPECT_TRUE(res.isomorphic);
  EXPECT_TRUE(verify_iso(t_rbar, ideal_m(), *res.witness));
  // t R (generated by t, t^3) is free
  EXPECT_EQ(decompose(lattice(1, N, {{{0, 1}}, {{0, 0, 0, 1}}})).a, 1u);
  EXPECT_THROW(lattice_iso_check(ring_r(), free2()), InvariantError);
  EXPECT_THROW(lattice_iso_check(ring_r(), lattice(1, N + 1, {{{1}}})), MathError);
}

TEST(Lattice, GeneralPosition) {
  // generators with non-unit pivots and mixed entries
  auto m = lattice(2, 10, {{{0, 1, 1}, {0, 0, 2}}, {{0, 0, 1}, {0, 1}}, {{1, 0, 0, 1}, {0, 0, 0, 3}}});
  auto nf = normal_form(m);
  EXPECT_EQ(nf.decomposition.a + nf.decomposition.b, 2u);
  EXPECT_EQ(nf.decomposition.a + 2 * nf.decomposition.b, oracle_min_generators(m));
  EXPECT_TRUE(nf.split_verified);
}

}  // namespace
}  // namespace cuspsheaf::testing
