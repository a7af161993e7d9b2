#include <olnum/params.hpp>
#include <olnum/presets.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace olnum;

namespace {

bool frontier_has(const std::vector<FrontierPoint>& f, int d, int L) {
  return std::any_of(f.begin(), f.end(), [&](const FrontierPoint& p) { return p.delta == d && p.window_l == L; });
}

}  // namespace

TEST(MultParams, GoldenSquare) {
  ParamSet p = preset_mult_params(make_preset("golden-square"));
  EXPECT_EQ(p.delta, 4);
  EXPECT_EQ(p.window_l, 3);
  EXPECT_EQ(p.window_l_bound, 4);
}

TEST(MultParams, Knuth) {
  ParamSet p = preset_mult_params(make_preset("knuth"));
  EXPECT_EQ(p.delta, 9);
  EXPECT_EQ(p.window_l, 7);
}

TEST(MultParams, UnreducedKeepsInequalityWindow) {
  Preset g = make_preset("golden-square");
  MultOptions o;
  o.reduce = false;
  EXPECT_EQ(mult_params(g.sys, g.cert, o).window_l, 4);
}

TEST(MultParams, MuNuNeedsFrontier) {
  Preset e = make_preset("eisenstein");
  EXPECT_THROW(mult_params(e.sys, e.cert), DomainError);
}

TEST(DivParams, GoldenSquareGenericAndOverride) {
  Preset g = make_preset("golden-square");
  ParamSet gen = preset_div_params(g, true);
  EXPECT_EQ(gen.delta, 7);
  ParamSet ov = preset_div_params(g);
  EXPECT_EQ(ov.delta, 6);
  EXPECT_EQ(ov.window_l, 9);
  ASSERT_TRUE(ov.alpha);
  EXPECT_GT(ov.alpha->sign(), 0);
}

TEST(DivParams, Knuth) {
  ParamSet p = preset_div_params(make_preset("knuth"));
  EXPECT_EQ(p.delta, 11);
  EXPECT_EQ(p.window_l, 11);
  EXPECT_EQ(p.d_min.lo, Rational(1, 6));
  EXPECT_EQ(p.d_min.hi, Rational(1, 6));
}

TEST(DivParams, KnuthWithExplicitDmin) {
  Preset k = make_preset("knuth");
  ParamSet p = div_params(k.sys, k.cert, RationalInterval(Rational(1, 6)));
  EXPECT_EQ(p.delta, 11);
  EXPECT_EQ(p.window_l, 11);
}

TEST(DivParams, ZeroDminFails) {
  Preset g = make_preset("golden-square");
  EXPECT_THROW(div_params(g.sys, g.cert, RationalInterval(Rational(0))), DomainError);
  EXPECT_THROW(div_params(g.sys, g.cert, RationalInterval(Rational(-1), Rational(1))), DomainError);
}

TEST(IntegerBaseDelay, Examples) {
  EXPECT_EQ(integer_base_delay(2, 1), 2);
  EXPECT_EQ(integer_base_delay(10, 9), 1);
  EXPECT_THROW(integer_base_delay(2, 2), DomainError);
  EXPECT_THROW(integer_base_delay(10, 4), DomainError);
}

TEST(EisensteinFrontier, Multiplication) {
  Preset e = make_preset("eisenstein");
  auto f = mu_nu_frontier(e.sys, e.cert, Mode::mult);
  EXPECT_TRUE(frontier_has(f, 5, 7));
  EXPECT_TRUE(frontier_has(f, 6, 6));
}

TEST(EisensteinFrontier, DivisionReproducesSmallestWindow) {
  Preset e = make_preset("eisenstein");
  auto f = mu_nu_frontier(e.sys, e.cert, Mode::div, preset_dmin(e));
  EXPECT_TRUE(frontier_has(f, 10, 9));
  EXPECT_EQ(f.front().delta, 7);
}

TEST(EisensteinFrontier, WitnessesMeetBudgetExactly) {
  Preset e = make_preset("eisenstein");
  RealQuad r = e.cert.epsilon;
  RealQuad b = e.sys.base_abs_exact().value();
  for (Mode m : {Mode::mult, Mode::div}) {
    auto f = m == Mode::mult ? mu_nu_frontier(e.sys, e.cert, m) : mu_nu_frontier(e.sys, e.cert, m, preset_dmin(e));
    ASSERT_FALSE(f.empty());
    for (const auto& p : f) {
      EXPECT_LE(b * p.mu + p.nu, r) << p.delta << "," << p.window_l;
      EXPECT_GT(p.mu.sign(), 0);
      EXPECT_GT(p.nu.sign(), 0);
      EXPECT_GE(RealQuad(p.mu_min.hi), RealQuad(p.mu_min.lo));
      EXPECT_GT(p.mu, RealQuad(p.mu_min.lo));
    }
  }
}

// --- properties ---

TEST(ParamsProperty, LargerDminNeverIncreasesDelayOrWindow) {
  for (const char* n : {"golden-square", "base4", "integer:2:-1:1"}) {
    Preset p = make_preset(n);
    Rational dm = preset_dmin(p).lo;
    ParamSet prev = div_params(p.sys, p.cert, RationalInterval(dm / 4));
    for (Rational scale : {Rational(1, 2), Rational(1), Rational(2)}) {
      ParamSet cur = div_params(p.sys, p.cert, RationalInterval(dm * scale));
      EXPECT_LE(cur.delta, prev.delta) << n;
      EXPECT_LE(cur.window_l, prev.window_l) << n;
      prev = cur;
    }
  }
}

TEST(ParamsProperty, LargerEpsilonNeverIncreasesMultParams) {
  NumerationSystem s = presets::knuth_system();
  ParamSet prev = mult_params(s, presets::knuth_certificate(RealQuad(Rational(1, 36))));
  for (long k : {30L, 24L, 18L}) {
    ParamSet cur = mult_params(s, presets::knuth_certificate(RealQuad(Rational(1, k))));
    EXPECT_LE(cur.delta, prev.delta);
    EXPECT_LE(cur.window_l, prev.window_l);
    prev = cur;
  }
}

TEST(ParamsProperty, DelayIsMinimal) {
  // δ−1 violates the delay inequality: 2A²/(|β|^(δ−1)(|β|−1)) ≥ ε/2
  for (const char* n : {"golden-square", "knuth", "base4", "integer:3:-1:2"}) {
    Preset p = make_preset(n);
    ParamSet m = preset_mult_params(p);
    Expr lhs = lit(Rational(2)) * p.sys.max_digit_abs() * p.sys.max_digit_abs() /
               (pow(p.sys.base_abs(), m.delta - 1) * (p.sys.base_abs() - lit(Rational(1))));
    auto v = certify_less(lhs, lit(p.cert.epsilon / RealQuad(2)));
    EXPECT_TRUE(!v || !*v) << n;
    Expr at = lit(Rational(2)) * p.sys.max_digit_abs() * p.sys.max_digit_abs() /
              (pow(p.sys.base_abs(), m.delta) * (p.sys.base_abs() - lit(Rational(1))));
    EXPECT_EQ(certify_less(at, lit(p.cert.epsilon / RealQuad(2))), std::optional<bool>(true)) << n;
  }
}

TEST(ParamsProperty, IntegerBaseDelayIsExactlyMinimal) {
  auto holds = [](long b, long a, int d) {
    Integer pw = 1;
    for (int j = 0; j < d; ++j) pw *= b;
    Rational t(Integer(2 * a * a), pw * (b - 1));
    t.canonicalize();
    Rational half(b, 2);
    half.canonicalize();
    return half + t <= Rational(a) + Rational(1, 2);
  };
  for (long b = 2; b <= 12; ++b) {
    for (long a = (b + 1) / 2; a <= b - 1; ++a) {
      int d = integer_base_delay(b, a);
      EXPECT_TRUE(holds(b, a, d)) << b << " " << a;
      if (d > 1) EXPECT_FALSE(holds(b, a, d - 1)) << b << " " << a;
    }
  }
}
