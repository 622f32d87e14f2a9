#include <gtest/gtest.h>

#include "helpers.hpp"

namespace cuspsheaf::testing {
namespace {

constexpr int N = 8;

SheafModel<Q> model(long d, std::initializer_list<std::initializer_list<long>> a,
                    std::initializer_list<std::initializer_list<long>> b) {
  auto am = mat(a), bm = mat(b);
  return make_sheaf_model<Q>(am.rows(), d, {SheafCusp<Q>{am.cols(), PhiMap<Q>(am.rows(), am, bm)}});
}

TEST(Triples, DegreeLedger) {
  std::vector<std::size_t> a1{1}, a0{0}, a2{1, 2};
  EXPECT_EQ(degree_ledger(1, 0, a1), 0);
  EXPECT_EQ(degree_ledger(2, 5, a1), 4);
  EXPECT_EQ(degree_ledger(1, 0, a0), -1);
  EXPECT_EQ(degree_ledger(2, 5, a2), 4);
  EXPECT_EQ(degree_ledger(2, 5, a1, DegreeConvention::theorem_statement), 2);
  EXPECT_EQ(sheaf_degree(2, 4, a1), 5);
  EXPECT_EQ(sheaf_degree(2, 2, a1, DegreeConvention::theorem_statement), 5);
  std::vector<std::size_t> bad{3};
  EXPECT_THROW(degree_ledger(2, 0, bad), InvariantError);
}

TEST(Triples, ToTriple) {
  auto t = to_triple(model(0, {{1}}, {{0}}));
  ASSERT_EQ(t.cusps.size(), 1u);
  EXPECT_EQ(t.cusps[0].V, mat({{1}, {0}}));
  EXPECT_EQ(t.cusps[0].sigma, mat({{1}}));
  EXPECT_EQ(t.bundle.degree, 0);

  auto empty = make_sheaf_model<Q>(1, 0, {SheafCusp<Q>{0, PhiMap<Q>::empty(1)}});
  t = to_triple(empty);
  EXPECT_EQ(t.cusps[0].V.cols(), 0u);
  EXPECT_EQ(t.cusps[0].sigma.rows(), 0u);
  EXPECT_EQ(t.bundle.degree, -1);

  t = to_triple(model(0, {{1}}, {{1}}));
  EXPECT_EQ(t.cusps[0].V, mat({{1}, {1}}));
  EXPECT_EQ(t.cusps[0].sigma, mat({{1}}));
  // sigma recomputed by direct products: V sigma = mu phi
  EXPECT_EQ(t.cusps[0].V * t.cusps[0].sigma, mu<Q>(1) * w_matrix(PhiMap<Q>(1, mat({{1}}), mat({{1}}))));

  t = to_triple(model(0, {{2}}, {{4}}));
  EXPECT_EQ(t.cusps[0].V, mat({{1}, {2}}));
  EXPECT_EQ(t.cusps[0].sigma, mat({{2}}));

  EXPECT_THROW(make_sheaf_model<Q>(1, 0, {SheafCusp<Q>{1, PhiMap<Q>(1, mat({{0}}), mat({{0}}))}}), MathError);
}

TEST(Triples, FromTriple) {
  auto s = model(3, {{1}}, {{0}});
  EXPECT_EQ(from_triple(to_triple(s)), s);

  Triple<Q> zero{{1, -1, std::nullopt, {}}, {CuspTriple<Q>{0, KMatrix<Q>(2, 0), KMatrix<Q>(0, 0)}}};
  auto z = from_triple(zero);
  EXPECT_EQ(z.cusps[0].a, 0u);
  EXPECT_EQ(z.cusps[0].phi.a(), 0u);
  EXPECT_EQ(z.degree, 0);

  Triple<Q> omega{{1, 0, std::nullopt, {}}, {CuspTriple<Q>{1, mat({{0}, {1}}), mat({{1}})}}};
  auto o = from_triple(omega);
  EXPECT_EQ(o.cusps[0].phi.A(), mat({{0}}));
  EXPECT_EQ(o.cusps[0].phi.B(), mat({{1}}));
  auto diag = semirank_diagnostics(o, N);
  EXPECT_FALSE(diag[0].match());
  EXPECT_TRUE(diag[0].in_omega_family());

  Triple<Q> rank_deficient{{1, 0, std::nullopt, {}}, {CuspTriple<Q>{1, mat({{0}, {0}}), mat({{1}})}}};
  EXPECT_THROW(from_triple(rank_deficient), InvariantError);
  Triple<Q> not_echelon{{1, 0, std::nullopt, {}}, {CuspTriple<Q>{1, mat({{2}, {0}}), mat({{1}})}}};
  EXPECT_THROW(from_triple(not_echelon), InvariantError);
  Triple<Q> singular_sigma{{1, 0, std::nullopt, {}}, {CuspTriple<Q>{1, mat({{1}, {0}}), mat({{0}})}}};
  EXPECT_THROW(from_triple(singular_sigma), InvariantError);
  Triple<Q> bad_split{{2, 3, std::vector<long>{1, 1}, {}}, {}};
  EXPECT_THROW(from_triple(bad_split), InvariantError);
}

TEST(Triples, Trivializations) {
  auto s = model(0, {{1}, {0}}, {{0}, {1}});
  auto t = to_triple(s);
  // same sheaf described in a frame T: model = T * frame coordinates
  auto tr = mat({{1, 1}, {0, 1}});
  Triple<Q> framed = t;
  framed.bundle.trivializations = {tr};
  auto tinv = *inverse(tr);
  framed.cusps[0].V = column_space_basis(block_diagonal(tinv) * t.cusps[0].V);
  framed.cusps[0].sigma = *solve(framed.cusps[0].V, block_diagonal(tinv) * t.cusps[0].V * t.cusps[0].sigma);
  EXPECT_EQ(from_triple(framed), s);
}

TEST(Triples, MultiCuspLocality) {
  PhiMap<Q> p1(2, mat({{1}, {0}}), mat({{3}, {1}}));
  PhiMap<Q> p2(2, mat({{0, 1}, {1, 0}}), mat({{1, 0}, {0, 0}}));
  auto two = make_sheaf_model<Q>(2, 4, {SheafCusp<Q>{1, p1}, SheafCusp<Q>{2, p2}});
  EXPECT_EQ(two.e_degree, 4 + 3 - 4);
  auto t = to_triple(two);
  EXPECT_EQ(t.cusps[0], to_triple(make_sheaf_model<Q>(2, 4, {SheafCusp<Q>{1, p1}})).cusps[0]);
  EXPECT_EQ(t.cusps[1], to_triple(make_sheaf_model<Q>(2, 4, {SheafCusp<Q>{2, p2}})).cusps[0]);
  EXPECT_EQ(from_triple(t), two);
  auto theorem = make_sheaf_model<Q>(2, 4, {SheafCusp<Q>{1, p1}, SheafCusp<Q>{2, p2}}, DegreeConvention::theorem_statement);
  EXPECT_EQ(theorem.e_degree, 4 - 4 - 3);
  EXPECT_EQ(from_triple(to_triple(theorem), DegreeConvention::theorem_statement), theorem);
}

TEST(Triples, FunctorIdentityAndZero) {
  auto s = model(0, {{1}, {0}}, {{1}, {1}});
  auto id = functor_on_morphism(s, s, identity_morphism(s, N), N);
  EXPECT_EQ(id.morphism.cusps[0].fiber, KMatrix<Q>::identity(2));
  EXPECT_TRUE(id.morphism.cusps[0].first_order.is_zero());
  EXPECT_EQ(id.morphism.cusps[0].fiber_action(), KMatrix<Q>::identity(4));
  EXPECT_TRUE(id.v_containment[0]);
  EXPECT_TRUE(id.sigma_square[0]);
  EXPECT_TRUE(id.extension_square[0]);

  SheafMorphism<Q> zero{{SeriesMatrix<Q>(2, 2, N)}};
  auto z = functor_on_morphism(s, s, zero, N);
  EXPECT_TRUE(z.morphism.cusps[0].fiber_action().is_zero());
  EXPECT_TRUE(z.v_containment[0]);
  EXPECT_TRUE(z.sigma_square[0]);
}

TEST(Triples, FunctorMultiplicationByT2) {
  auto s = model(0, {{1}}, {{0}});
  SheafMorphism<Q> t2{{SeriesMatrix<Q>::from_jets({mat({{0}}), mat({{0}}), mat({{1}})}, 1, 1, N)}};
  auto rep = functor_on_morphism(s, s, t2, N);
  EXPECT_TRUE(rep.morphism.cusps[0].fiber.is_zero());
  EXPECT_TRUE(rep.morphism.cusps[0].first_order.is_zero());
  EXPECT_TRUE(rep.v_containment[0]);
  EXPECT_TRUE(rep.sigma_square[0]);
}

TEST(Triples, FunctorRejectsNonMorphism) {
  auto r = model(0, {{1}}, {{0}});
  auto rbar = model(0, {{0}}, {{1}});  // pushout is t R-bar
  SheafMorphism<Q> id{{SeriesMatrix<Q>::identity(1, N)}};
  EXPECT_NO_THROW(functor_on_morphism(rbar, r, SheafMorphism<Q>{{SeriesMatrix<Q>::from_jets({mat({{0}}), mat({{1}})}, 1, 1, N)}}, N));
  try {
    functor_on_morphism(rbar, r, id, N);
    FAIL() << "expected not_a_morphism";
  } catch (const MathError& e) {
    EXPECT_EQ(e.reason(), MathError::Reason::not_a_morphism);
  }
}

TEST(Triples, FirstOrderTermMatters) {
  // multiplication by t sends t R-bar into itself and R into t R-bar; its
  // fiber is 0 but it moves the fiber block into the omega block
  auto r = model(0, {{1}}, {{0}});
  auto trbar = model(0, {{0}}, {{1}});
  SheafMorphism<Q> t{{SeriesMatrix<Q>::from_jets({mat({{0}}), mat({{1}})}, 1, 1, N)}};
  auto rep = functor_on_morphism(r, trbar, t, N);
  EXPECT_TRUE(rep.v_containment[0]);
  EXPECT_EQ(rep.induced[0], mat({{1}}));
  EXPECT_EQ(rep.morphism.cusps[0].fiber_action(), mat({{0, 0}, {1, 0}}));
  auto back = morphism_from_triple(rep.morphism, to_triple(r), to_triple(trbar), N);
  EXPECT_EQ(back, t);
  auto plain = rep.morphism;
  plain.cusps[0].germ.reset();
  EXPECT_EQ(morphism_from_triple(plain, to_triple(r), to_triple(trbar), N), t);
}

TEST(Triples, MorphismFromTriple) {
  auto s = model(0, {{1}}, {{0}});
  auto t = to_triple(s);
  TripleMorphism<Q> id{{CuspMorphismData<Q>{mat({{1}}), mat({{0}}), std::nullopt}}};
  EXPECT_EQ(morphism_from_triple(id, t, t, N), identity_morphism(s, N));
  TripleMorphism<Q> zero{{CuspMorphismData<Q>{mat({{0}}), mat({{0}}), std::nullopt}}};
  EXPECT_TRUE(morphism_from_triple(zero, t, t, N).germs[0].is_zero());
  auto t2 = SeriesMatrix<Q>::from_jets({mat({{0}}), mat({{0}}), mat({{1}})}, 1, 1, N);
  TripleMorphism<Q> sq{{CuspMorphismData<Q>{mat({{0}}), mat({{0}}), t2}}};
  auto f = morphism_from_triple(sq, t, t, N);
  EXPECT_EQ(f.germs[0], t2);
  EXPECT_EQ(functor_on_morphism(s, s, f, N).morphism, sq);
  // Phi = t does not preserve V = fiber line
  TripleMorphism<Q> bad{{CuspMorphismData<Q>{mat({{0}}), mat({{1}}), std::nullopt}}};
  EXPECT_THROW(morphism_from_triple(bad, t, t, N), InvariantError);
  TripleMorphism<Q> inconsistent{{CuspMorphismData<Q>{mat({{1}}), mat({{0}}), t2}}};
  EXPECT_THROW(morphism_from_triple(inconsistent, t, t, N), InvariantError);
}

TEST(Triples, RoundtripObject) {
  auto rep = roundtrip_object(lattice(1, N, {{{1}}}), 0);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.a_start, 1u);
  EXPECT_EQ(rep.b_end, 0u);
  rep = roundtrip_object(lattice(1, N, {{{0, 0, 1}}, {{0, 0, 0, 1}}}), 0);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.a_start, 0u);
  EXPECT_EQ(rep.b_start, 1u);
  rep = roundtrip_object(lattice(2, N, {{{1}, {}}, {{}, {0, 0, 1}}, {{}, {0, 0, 0, 1}}}), 0);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.a_end, 1u);
  EXPECT_EQ(rep.b_end, 1u);
}

}  // namespace
}  // namespace cuspsheaf::testing
