#include <olnum/field.hpp>
#include <olnum/interval.hpp>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "oracle.hpp"

using namespace olnum;

namespace {

RealQuad q5(long a, long b, long q) { return RealQuad(Integer(a), Integer(b), Integer(q), 5); }

}  // namespace

TEST(RealQuadArith, GoldenMeanSquared) {
  RealQuad phi = q5(1, 1, 2);
  EXPECT_EQ(phi * phi, q5(3, 1, 2));
}

TEST(RealQuadArith, AddZeroIsIdentity) {
  RealQuad x = q5(7, -3, 4);
  EXPECT_EQ(x + RealQuad(0), x);
}

TEST(RealQuadArith, BetaPlusInverseIsThree) {
  RealQuad beta = q5(3, 1, 2);
  EXPECT_TRUE(((beta - RealQuad(3)) + RealQuad(1) / beta).is_zero());
}

TEST(RealQuadArith, NormalizesGcdAndSign) {
  RealQuad x(Integer(4), Integer(-6), Integer(-8), 5);
  EXPECT_EQ(x.a(), -2);
  EXPECT_EQ(x.b(), 3);
  EXPECT_EQ(x.q(), 4);
}

TEST(RealQuadArith, RationalDescriptorsFoldRadical) {
  RealQuad x(Integer(1), Integer(2), Integer(3), 1);  // (1 + 2·1)/3
  EXPECT_TRUE(x.is_rational());
  EXPECT_EQ(x, RealQuad(1));
}

TEST(RealQuadArith, Errors) {
  EXPECT_THROW(q5(1, 1, 1) + RealQuad(Integer(0), Integer(1), Integer(1), 3), DomainError);
  EXPECT_THROW(q5(1, 1, 1) / RealQuad(0), DomainError);
  EXPECT_THROW(RealQuad(Integer(1), Integer(1), Integer(1), 8), DomainError);  // not square-free
}

TEST(RealQuadSign, Examples) {
  EXPECT_EQ(RealQuad(0).sign(), 0);
  EXPECT_EQ(q5(3, -1, 1).sign(), 1);
  EXPECT_EQ(q5(2, -1, 1).sign(), -1);
}

TEST(ComplexQuadArith, Examples) {
  ComplexQuad beta(RealQuad(Rational(-3, 2)), RealQuad(Integer(0), Integer(1), Integer(2), 3));
  EXPECT_EQ(beta.norm_sq(), RealQuad(3));
  ComplexQuad two_i(RealQuad(0), RealQuad(2));
  EXPECT_EQ(two_i.conj(), ComplexQuad(RealQuad(0), RealQuad(-2)));
  EXPECT_EQ(two_i * two_i, ComplexQuad(-4));
  EXPECT_THROW(two_i / ComplexQuad(0), DomainError);
}

TEST(EvalRadical, EisensteinDmin) {
  Rational prec(1, 10000);
  RationalInterval r = eval_radical("sqrt(3)*(6-sqrt(7))/18", prec);
  EXPECT_LE(r.width(), prec);
  oracle::Real v = oracle::Real(boost::multiprecision::sqrt(oracle::Real(3))) *
                   (6 - boost::multiprecision::sqrt(oracle::Real(7))) / 18;
  EXPECT_LE(oracle::real_of(r.lo), v);
  EXPECT_GE(oracle::real_of(r.hi), v);
}

TEST(EvalRadical, RationalPassthrough) {
  RationalInterval r = eval_radical("1/12", Rational(1, 1000));
  EXPECT_EQ(r.lo, Rational(1, 12));
  EXPECT_EQ(r.hi, Rational(1, 12));
}

TEST(EvalRadical, KnuthRadius) {
  RationalInterval r = eval_radical("sqrt(146)/9", Rational(1, 10000));
  auto [lo, hi] = oracle::newton_sqrt(Rational(146, 81), Rational(1, 100000000));
  EXPECT_LE(r.lo, lo);
  EXPECT_GE(r.hi, hi);
  EXPECT_LE(r.width(), Rational(1, 10000));
}

TEST(EvalRadical, DivisionByIntervalContainingZeroFails) {
  EXPECT_THROW(eval_radical("1/(sqrt(4)-2)", Rational(1, 100)), DomainError);
}

// --- properties ---

TEST(FieldProperty, DivisionUndoesMultiplication) {
  gen::Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    RealQuad x = rng.quad(5), y = rng.quad(5);
    if (y.is_zero()) continue;
    ASSERT_EQ((x * y) / y, x);
  }
}

TEST(FieldProperty, SignAgreesWithHighPrecisionFloat) {
  gen::Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    long d = std::vector<long>{2, 3, 5, 7}[rng.index(4)];
    RealQuad x = rng.quad(d, 1000);
    oracle::Real v = oracle::real_of(x);
    int s = v > 0 ? 1 : v < 0 ? -1 : 0;
    ASSERT_EQ(x.sign(), s) << x.str();
  }
}

TEST(FieldProperty, NearZeroSignsAgree) {
  // a² − 5b² = ±1 gives values very close to zero (Pell solutions)
  Integer a = 9, b = 4;  // 81 − 80 = 1
  for (int i = 0; i < 20; ++i) {
    RealQuad x(a, -b, Integer(1), 5);
    oracle::Real v = oracle::real_of(x);
    ASSERT_EQ(x.sign(), v > 0 ? 1 : -1);
    Integer na = 9 * a + 20 * b, nb = 4 * a + 9 * b;
    a = na;
    b = nb;
  }
}

TEST(FieldProperty, EnclosureContainsFinerValueAndNests) {
  gen::Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    RealQuad x = rng.quad(std::vector<long>{2, 3, 5}[rng.index(3)]);
    for (unsigned bits : {32u, 64u, 128u}) {
      RationalInterval c = enclose(x, bits), f = enclose(x, 4 * bits);
      ASSERT_LE(c.lo, f.lo);
      ASSERT_GE(c.hi, f.hi);
      // the oracle carries ~330 bits, enough to separate the coarse bounds
      oracle::Real v = oracle::real_of(x);
      ASSERT_LE(oracle::real_of(c.lo), v);
      ASSERT_GE(oracle::real_of(c.hi), v);
    }
  }
}

TEST(FieldProperty, RadicalExpressionEnclosures) {
  gen::Rng rng(14);
  for (int i = 0; i < 200; ++i) {
    long n = rng.range(2, 400), m = rng.range(1, 50);
    std::string e = "sqrt(" + std::to_string(n) + ")/" + std::to_string(m) + "-sqrt(" + std::to_string(m) + ")";
    RationalInterval a = eval_radical(e, Rational(1, 1000)), b = eval_radical(e, Rational(1, 1000000));
    ASSERT_LE(a.lo, b.lo);
    ASSERT_GE(a.hi, b.hi);
    oracle::Real v = boost::multiprecision::sqrt(oracle::Real(n)) / m - boost::multiprecision::sqrt(oracle::Real(m));
    ASSERT_LE(oracle::real_of(b.lo), v);
    ASSERT_GE(oracle::real_of(b.hi), v);
  }
}
