#include <olnum/preprocess.hpp>
#include <olnum/presets.hpp>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "oracle.hpp"

using namespace olnum;

namespace {

bool has_rule(const NumerationSystem& s, const std::vector<RewriteRule>& rules, const std::string& text) {
  RewriteRule r = parse_rule(s, text);
  return std::find(rules.begin(), rules.end(), r) != rules.end();
}

}  // namespace

TEST(ExpandRules, EisensteinSeedGivesSixRotations) {
  NumerationSystem s = presets::eisenstein_system();
  auto rules = expand_rules(s, parse_rules(s, "1 1 -> 0 w\n"));
  EXPECT_EQ(rules.size(), 6u);
  EXPECT_TRUE(has_rule(s, rules, "w w -> 0 W"));
  EXPECT_TRUE(has_rule(s, rules, "-1 -1 -> 0 -w"));
  EXPECT_TRUE(all_rules_pass(s, rules));
}

TEST(ExpandRules, GoldenMeanNegation) {
  NumerationSystem s = presets::golden_mean_system();
  auto rules = expand_rules(s, parse_rules(s, "1 0 -1 -> 0 1 0\n"));
  EXPECT_EQ(rules.size(), 2u);
  EXPECT_TRUE(has_rule(s, rules, "-1 0 1 -> 0 -1 0"));
}

TEST(ExpandRules, EmptyListStaysEmpty) {
  NumerationSystem s = presets::golden_mean_system();
  EXPECT_TRUE(expand_rules(s, {}).empty());
}

TEST(ParseRules, Errors) {
  NumerationSystem s = presets::golden_mean_system();
  EXPECT_THROW(parse_rule(s, "1 0 0 1"), ParseError);
  EXPECT_THROW(parse_rule(s, "1 0 -> 0"), ParseError);
  EXPECT_THROW(parse_rule(s, "1 x -> 0 1"), ParseError);
}

TEST(Preprocess, BaseTwoChain) {
  Preset p = make_preset("integer:2:-1:1");
  DigitString d = parse_digits(p.sys, "0 . 1 -1 -1 -1 0 -1 1 0 0 1");
  Preprocessed r = preprocess_divisor(p.sys, p.pre, d);
  EXPECT_EQ(format_digits(p.sys, r.digits), "0 . 1 0 -1 1 0 0 1");
  EXPECT_EQ(r.shift, 3);
}

TEST(Preprocess, IrreducibleIsUntouched) {
  Preset p = make_preset("integer:2:-1:1");
  DigitString d = parse_digits(p.sys, "0 . 1 1 -1");
  Preprocessed r = preprocess_divisor(p.sys, p.pre, d);
  EXPECT_EQ(r.digits, d);
  EXPECT_EQ(r.shift, 0);
}

TEST(Preprocess, GoldenMean) {
  Preset p = make_preset("golden-mean");
  Preprocessed r = preprocess_divisor(p.sys, p.pre, parse_digits(p.sys, "0 . 1 0 -1"));
  EXPECT_EQ(format_digits(p.sys, r.digits), "0 . 1 0");
  EXPECT_EQ(r.shift, 1);
}

TEST(Preprocess, LeadingZerosAndIntegerDigits) {
  Preset p = make_preset("golden-square");
  Preprocessed a = preprocess_divisor(p.sys, p.pre, parse_digits(p.sys, "0 . 0 0 1"));
  EXPECT_EQ(a.shift, 2);
  Preprocessed b = preprocess_divisor(p.sys, p.pre, parse_digits(p.sys, "1 -1 . 1"));
  EXPECT_EQ(b.shift, -2);
  EXPECT_EQ(format_digits(p.sys, b.digits), "0 . 1 -1 1");
  EXPECT_THROW(preprocess_divisor(p.sys, p.pre, parse_digits(p.sys, "0 . 0 0")), DomainError);
}

TEST(VerifyRules, PassAndFail) {
  for (const char* n : {"golden-mean", "eisenstein", "integer:2:-1:1", "integer:3:-1:2"}) {
    Preset p = make_preset(n);
    EXPECT_TRUE(all_rules_pass(p.sys, p.pre.rules)) << n;
  }
  NumerationSystem s = make_integer_system(2, -1, 1);
  auto bogus = verify_rules(s, parse_rules(s, "1 -> 0\n"));
  ASSERT_EQ(bogus.size(), 1u);
  EXPECT_FALSE(bogus[0].pass);
}

TEST(Dmin, EisensteinValue) {
  Preset p = make_preset("eisenstein");
  DminBound b = dmin_lower_bound(p.sys, p.pre, 3);
  EXPECT_GE(b.min_prefix_norm_sq, RealQuad(Rational(1, 3)));
  oracle::Real v = boost::multiprecision::sqrt(oracle::Real(3)) * (6 - boost::multiprecision::sqrt(oracle::Real(7))) / 18;
  oracle::Real lo = oracle::real_of(b.enclosure.lo), hi = oracle::real_of(b.enclosure.hi);
  EXPECT_LE(lo, v + oracle::Real("1e-25"));
  EXPECT_GE(hi, v - oracle::Real("1e-25"));
  EXPECT_GT(lo, 0);
}

TEST(Dmin, GoldenMeanIsInverseFifthPower) {
  Preset p = make_preset("golden-mean");
  DminBound b = dmin_lower_bound(p.sys, p.pre, 3);
  ASSERT_TRUE(b.exact);
  EXPECT_EQ(ComplexQuad(*b.exact), p.sys.power(-5));
}

TEST(Dmin, BaseFour) {
  Preset p = make_preset("base4");
  EXPECT_EQ(preset_dmin(p).lo, Rational(1, 12));
  EXPECT_EQ(preset_dmin(p).hi, Rational(1, 12));
}

TEST(Dmin, Knuth) {
  EXPECT_EQ(presets::knuth_dmin().lo, Rational(1, 6));
}

TEST(Dmin, DepthMustBePositive) {
  Preset p = make_preset("base4");
  EXPECT_THROW(dmin_lower_bound(p.sys, p.pre, 0), DomainError);
}

// --- properties ---

TEST(PreprocessProperty, ValueIsPreserved) {
  gen::Rng rng(71);
  for (const char* n : {"golden-mean", "eisenstein", "integer:2:-1:1", "integer:3:-1:2", "knuth"}) {
    Preset p = make_preset(n);
    for (int i = 0; i < 300; ++i) {
      DigitString d;
      d.int_digits = rng.digits(p.sys, rng.index(2));
      d.frac_digits = rng.digits(p.sys, 1 + rng.index(12));
      strip_leading_zeros(p.sys, d);
      if (eval_digits(p.sys, d).is_zero()) continue;
      Preprocessed r = preprocess_divisor(p.sys, p.pre, d);
      ASSERT_FALSE(r.digits.frac_digits.empty());
      ASSERT_NE(r.digits.frac_digits[0], p.sys.zero_index());
      ASSERT_EQ(eval_digits(p.sys, r.digits), p.sys.power(r.shift) * eval_digits(p.sys, d)) << n;
    }
  }
}

TEST(PreprocessProperty, PreprocessedDivisorsRespectDmin) {
  gen::Rng rng(72);
  for (const char* n : {"golden-square", "golden-mean", "eisenstein", "base4", "integer:2:-1:1",
                        "integer:3:-1:2"}) {
    Preset p = make_preset(n);
    Rational dm = preset_dmin(p).lo;
    for (int i = 0; i < 1000; ++i) {
      DigitString d = rng.fraction(p.sys, 1 + rng.index(10));
      if (eval_digits(p.sys, d).is_zero()) continue;  // golden mean: 0.1 -1 -1 = 0
      Preprocessed r = preprocess_divisor(p.sys, p.pre, d);
      // every prefix of length ≥ 1 respects the bound, too
      ComplexQuad acc;
      const auto& f = r.digits.frac_digits;
      for (size_t j = 0; j < f.size(); ++j) {
        acc = acc + p.sys.digit(f[j]) * p.sys.power(-static_cast<int>(j) - 1);
        ASSERT_GE(acc.norm_sq(), RealQuad(dm * dm)) << n << " " << format_digits(p.sys, r.digits);
      }
    }
  }
}

TEST(PreprocessProperty, IntegerBaseBounds) {
  gen::Rng rng(73);
  struct Case {
    const char* name;
    Rational bound;
  };
  for (const Case& c : {Case{"integer:2:-1:1", Rational(1, 4)}, Case{"integer:3:-1:2", Rational(1, 9)}}) {
    Preset p = make_preset(c.name);
    EXPECT_GE(preset_dmin(p).lo, c.bound) << c.name;
    for (int i = 0; i < 500; ++i) {
      Preprocessed r = preprocess_divisor(p.sys, p.pre, rng.fraction(p.sys, 12));
      ASSERT_GE(eval_digits(p.sys, r.digits).norm_sq(), RealQuad(c.bound * c.bound)) << c.name;
    }
  }
}
