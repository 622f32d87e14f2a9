#include <gtest/gtest.h>

#include "helpers.hpp"

namespace cuspsheaf::testing {
namespace {

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Q::parse("3/7").str(), "3/7");
  EXPECT_EQ(Q::parse("-6/4").str(), "-3/2");
  EXPECT_EQ(Q::parse("+5").str(), "5");
  EXPECT_THROW(Q::parse("1/0"), ParseError);
  EXPECT_THROW(Q::parse("1.5"), ParseError);
  EXPECT_THROW(Q::parse(""), ParseError);
  EXPECT_THROW(Q(0).inverse(), MathError);
}

TEST(ModP, ArithmeticAndSession) {
  EXPECT_THROW(ModP::modulus(), std::logic_error);
  ModP::Session session(7);
  ModP x(3), y(5);
  EXPECT_EQ((x + y).str(), "1");
  EXPECT_EQ((x * y).str(), "1");
  EXPECT_EQ((x * x.inverse()).str(), "1");
  EXPECT_EQ(ModP(-1).str(), "6");
  EXPECT_EQ(ModP::parse("12").str(), "5");
  EXPECT_THROW(ModP(0).inverse(), MathError);
}

TEST(FieldDesc, Parse) {
  EXPECT_EQ(FieldDesc::parse("q").kind, FieldDesc::Kind::rational);
  EXPECT_EQ(FieldDesc::parse("fp:101").p, 101u);
  EXPECT_THROW(FieldDesc::parse("fp:100"), InvariantError);
  EXPECT_THROW(FieldDesc::parse("fp:"), ParseError);
  EXPECT_THROW(FieldDesc::parse("r"), ParseError);
  EXPECT_EQ(FieldDesc::prime(5).str(), "fp:5");
}

TEST(PSeries, ArithExamples) {
  EXPECT_EQ(ps_arith(s(4, {1, 1}), s(4, {1, -1}), SeriesOp::mul), s(4, {1, 0, -1}));
  EXPECT_TRUE(ps_arith(s(4, {1, 2, 3}), PSeries<Q>(4), SeriesOp::mul).is_zero());
  EXPECT_TRUE(ps_arith(s(4, {0, 0, 1}), s(4, {0, 0, 0, 1}), SeriesOp::mul).is_zero());
  EXPECT_EQ(ps_arith(s(4, {1, 2}), s(4, {0, 1}), SeriesOp::sub), s(4, {1, 1}));
  EXPECT_THROW(ps_arith(s(4, {1}), s(5, {1}), SeriesOp::add), MathError);
}

TEST(PSeries, InvertExamples) {
  EXPECT_EQ(ps_invert(s(5, {1})), s(5, {1}));
  EXPECT_EQ(ps_invert(s(3, {1, 1})), s(3, {1, -1, 1, -1}));
  try {
    ps_invert(s(3, {0, 1}));
    FAIL() << "expected non-unit error";
  } catch (const MathError& e) {
    EXPECT_EQ(e.reason(), MathError::Reason::non_unit);
  }
  auto f = s(6, {2, 0, 3, 1, 0, 0, 5});
  EXPECT_EQ(f * ps_invert(f), s(6, {1}));
}

TEST(PSeries, ValuationAndShifts) {
  EXPECT_EQ(s(5, {0, 0, 3}).valuation(), 2);
  EXPECT_EQ(PSeries<Q>(5).valuation(), kInfiniteValuation);
  EXPECT_EQ(s(4, {1, 2}).shifted_up(3), s(4, {0, 0, 0, 1, 2}));
  EXPECT_EQ(s(4, {0, 0, 1, 2}).shifted_down(2), s(4, {1, 2}));
  EXPECT_THROW(s(4, {0, 1}).shifted_down(2), MathError);
  EXPECT_THROW(s(1, {1, 2, 3}), InvariantError);
  EXPECT_EQ(s(1, {1, 2, 0}), s(1, {1, 2}));
}

TEST(KMatrix, KernelExamples) {
  EXPECT_TRUE(kernel_basis(KMatrix<Q>::identity(2)).empty());
  EXPECT_EQ(kernel_basis(KMatrix<Q>(2, 2)).size(), 2u);
  auto k = kernel_basis(mat({{1, 1}, {1, 1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0][0], -k[0][1]);
  EXPECT_FALSE(k[0][0].is_zero());
}

TEST(KMatrix, RankSolveInverse) {
  auto m = mat({{1, 2}, {3, 4}});
  EXPECT_EQ(rank(m), 2u);
  auto inv = inverse(m);
  ASSERT_TRUE(inv);
  EXPECT_EQ(m * *inv, KMatrix<Q>::identity(2));
  EXPECT_EQ(determinant(m), Q(-2));
  EXPECT_FALSE(inverse(mat({{1, 2}, {2, 4}})));
  auto x = solve(m, std::vector<Q>{Q(5), Q(11)});
  ASSERT_TRUE(x);
  EXPECT_EQ((*x)[0], Q(1));
  EXPECT_EQ((*x)[1], Q(2));
  EXPECT_FALSE(solve(mat({{1, 1}, {1, 1}}), std::vector<Q>{Q(1), Q(2)}));
}

TEST(KMatrix, ColumnSpaceBasisIsCanonical) {
  auto a = mat({{2, 4}, {2, 4}, {0, 1}});
  auto b = mat({{1, 0}, {1, 0}, {3, 1}});
  EXPECT_EQ(column_space_basis(a), column_space_basis(b));
  EXPECT_EQ(column_space_basis(mat({{1}, {1}})), mat({{1}, {1}}));
}

TEST(SeriesMatrix, InverseOverRbar) {
  SeriesMatrix<Q> m(2, 2, 5);
  m(0, 0) = s(5, {1, 1});
  m(0, 1) = s(5, {0, 0, 1});
  m(1, 0) = s(5, {0, 3});
  m(1, 1) = s(5, {2});
  EXPECT_EQ(m * inverse(m), SeriesMatrix<Q>::identity(2, 5));
  SeriesMatrix<Q> singular(1, 1, 3);
  singular(0, 0) = s(3, {0, 1});
  EXPECT_THROW(inverse(singular), MathError);
}

TEST(CuspRing, Membership) {
  EXPECT_TRUE(in_subring(s(5, {1, 0, 1})));
  EXPECT_FALSE(in_subring(s(5, {0, 1})));
  EXPECT_TRUE(in_subring(PSeries<Q>(5)));
  EXPECT_EQ(quotient_class(s(5, {0, 1})), Q(1));
  EXPECT_EQ(quotient_class(s(5, {1, 0, 5})), Q(0));
  EXPECT_EQ(quotient_class(s(5, {0, 3, 0, 1})), Q(3));
  EXPECT_TRUE(in_maximal_ideal(s(5, {0, 0, 1, 0, 0, 1})));
  EXPECT_FALSE(in_maximal_ideal(s(5, {1})));
  EXPECT_FALSE(in_maximal_ideal(s(5, {0, 1})));
  EXPECT_TRUE(in_maximal_ideal(to_maximal_ideal(s(5, {1, 1}))));
}

}  // namespace
}  // namespace cuspsheaf::testing
