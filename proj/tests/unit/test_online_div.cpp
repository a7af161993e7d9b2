#include <olnum/online_div.hpp>
#include <olnum/presets.hpp>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "runs.hpp"

using namespace olnum;

TEST(OnlineDiv, ZeroNumerator) {
  runs::PresetRun pr = runs::prepare("golden-square");
  const auto& s = pr.preset.sys;
  DigitString num = parse_digits(s, "0 . 0 0 0"), den = parse_digits(s, "0 . 1 1");
  std::vector<ComplexQuad> ws;
  DivOptions o = pr.div_opt;
  o.trace = [&](const StepRecord& r) { ws.push_back(r.w); };
  DivResult r = div_run(s, pr.preset.cert, pr.div, pr.preset.pre, num, den, 15, o);
  EXPECT_TRUE(eval_digits(s, r.quotient).is_zero());
  ASSERT_EQ(ws.size(), 15u);
  for (const auto& w : ws) EXPECT_TRUE(w.is_zero());
}

TEST(OnlineDiv, GoldenStepIdentity) {
  runs::PresetRun pr = runs::prepare("golden-square");
  const auto& s = pr.preset.sys;
  ASSERT_EQ(pr.div.delta, 6);
  pr.div_opt.check = false;  // recomputed here instead
  OnlineDivider dv(s, pr.preset.cert, pr.div, pr.div_opt);
  size_t z = s.zero_index(), one = *s.index_of_symbol("1");
  dv.prime({one, z, z, z, z, z});
  // N = β^−(1+δ) = β^−7, D = 1/β
  for (size_t nk : {one, z, z, z, z, z, z, z}) {
    ComplexQuad q_before = dv.state().q_partial;
    dv.step(nk, z);
    const auto& st = dv.state();
    ASSERT_EQ(st.n_partial, s.power(-7));
    ASSERT_EQ(st.d_partial, s.power(-1));
    ASSERT_EQ(st.w, s.power(st.k) * (st.n_partial - q_before * st.d_partial));
  }
}

TEST(DivRun, GoldenInversePowers) {
  runs::PresetRun pr = runs::prepare("golden-square");
  const auto& s = pr.preset.sys;
  DigitString num = parse_digits(s, "0 . 1"), den = parse_digits(s, "0 . 1");
  DivResult r = div_run(s, pr.preset.cert, pr.div, pr.preset.pre, num, den, 30, pr.div_opt);
  // N' = β^−7, D = β^−1: quotient tends to β^−6
  EXPECT_EQ(r.scale, 6);
  ComplexQuad diff = s.power(-6) - eval_digits(s, r.quotient);
  EXPECT_TRUE(runs::within(s, diff, runs::convergence_constant(s, pr.preset.cert), 30));
}

TEST(DivRun, EisensteinOmega) {
  runs::PresetRun pr = runs::prepare("eisenstein");
  const auto& s = pr.preset.sys;
  DigitString num = parse_digits(s, "0 . w"), den = parse_digits(s, "0 . 1");
  DivResult r = div_run(s, pr.preset.cert, pr.div, pr.preset.pre, num, den, 30, pr.div_opt);
  ComplexQuad want = presets::omega() * s.power(-pr.div.delta);
  ComplexQuad diff = want - eval_digits(s, r.quotient);
  EXPECT_EQ(diff, s.power(-30) * (r.w_last / r.d_used - s.digit(r.q_last)));
  EXPECT_TRUE(runs::within(s, diff, runs::convergence_constant(s, pr.preset.cert), 30));
}

TEST(DivRun, DivisorShiftEntersScale) {
  runs::PresetRun pr = runs::prepare("golden-square");
  const auto& s = pr.preset.sys;
  DigitString num = parse_digits(s, "1 . -1"), den = parse_digits(s, "0 . 0 1 1");
  DivResult r = div_run(s, pr.preset.cert, pr.div, pr.preset.pre, num, den, 30, pr.div_opt);
  EXPECT_EQ(r.divisor_shift, 1);
  EXPECT_EQ(r.scale, pr.div.delta + 1 + 1);
  ComplexQuad want = eval_digits(s, num) / eval_digits(s, den) * s.power(-r.scale);
  EXPECT_TRUE(runs::within(s, want - eval_digits(s, r.quotient),
                           runs::convergence_constant(s, pr.preset.cert), 30));
}

TEST(DivRun, SmallDivisorPrefixIsRejected) {
  // base 2 without rewriting: 0.1 -1 -1 -1 drops below D_min = 1/4
  NumerationSystem s = make_integer_system(2, -1, 1);
  OLCertificate c = real_interval_certificate(s);
  ParamSet p = div_params(s, c, RationalInterval(Rational(1, 4)));
  DigitString num = parse_digits(s, "0 . 1"), den = parse_digits(s, "0 . 1 -1 -1 -1 -1");
  EXPECT_THROW(div_run(s, c, p, {}, num, den, 20), DomainError);
}

TEST(OnlineDiv, RejectsMultiplicationParameters) {
  runs::PresetRun pr = runs::prepare("golden-square");
  EXPECT_THROW(OnlineDivider(pr.preset.sys, pr.preset.cert, pr.mul), DomainError);
}

// --- properties ---

TEST(DivProperty, RandomRunsKeepInvariantsAndConverge) {
  gen::Rng rng(61);
  for (const char* n : {"golden-square", "golden-mean", "knuth", "eisenstein", "base4", "integer:2:-1:1",
                        "integer:3:-1:2"}) {
    runs::PresetRun pr = runs::prepare(n);
    for (int i = 0; i < 10; ++i) {
      runs::Outcome o = runs::random_div(pr, rng, 20, 28);
      ASSERT_TRUE(o.ok) << n << ": " << o.why;
      ASSERT_LE(o.stats.max_window_int_digits, o.stats.window_int_bound) << n;
    }
  }
}

TEST(DivProperty, GenericDivisionParametersAlsoConverge) {
  runs::PresetRun pr = runs::prepare("golden-square");
  pr.div = preset_div_params(pr.preset, true);
  pr.div_opt = {};
  gen::Rng rng(62);
  for (int i = 0; i < 10; ++i) {
    runs::Outcome o = runs::random_div(pr, rng, 16, 24);
    ASSERT_TRUE(o.ok) << o.why;
  }
}

TEST(DivProperty, QuotientTimesDivisorRecoversNumerator) {
  runs::PresetRun pr = runs::prepare("knuth");
  const auto& s = pr.preset.sys;
  gen::Rng rng(63);
  for (int i = 0; i < 8; ++i) {
    DigitString num, den = rng.fraction(s, 10);
    num.frac_digits = rng.digits(s, 10);
    DivResult r = div_run(s, pr.preset.cert, pr.div, pr.preset.pre, num, den, 32, pr.div_opt);
    // N' − Q_n·D = β^−n W_n
    ComplexQuad lhs = eval_digits(s, num) * s.power(-pr.div.delta) - eval_digits(s, r.quotient) * r.d_used;
    ASSERT_EQ(lhs, s.power(-32) * (r.w_last - s.digit(r.q_last) * r.d_used));
  }
}
