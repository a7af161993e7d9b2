#pragma once

// Shared drivers for randomized on-line runs and their exact checks.

#include <olnum/online_div.hpp>
#include <olnum/online_mul.hpp>
#include <olnum/presets.hpp>

#include "gen.hpp"

#include <algorithm>
#include <string>

namespace runs {

using namespace olnum;

// Radius of the containment region of W (mult) or W/D (div).
inline RealQuad containment_radius(const OLCertificate& c) {
  return c.variant == CertVariant::mu_nu ? c.epsilon : c.epsilon / RealQuad(2);
}

// Upper bound on |β|K + radius + A: sup of W (or W/D) plus the digit bound.
inline Rational convergence_constant(const NumerationSystem& sys, const OLCertificate& c) {
  Expr e = sys.base_abs() * region_radius(c) + lit(containment_radius(c)) + sys.max_digit_abs();
  return e(128).hi;
}

// |diff| ≤ C·|β|^−n, decided exactly: |diff|²·|β|^2n ≤ C².
inline bool within(const NumerationSystem& sys, const ComplexQuad& diff, const Rational& C, int n) {
  return diff.norm_sq() * sys.base_norm_sq().pow(n) <= RealQuad(C * C);
}

struct PresetRun {
  Preset preset;
  ParamSet mul, div;
  MulOptions mul_opt;
  DivOptions div_opt;
};

inline PresetRun prepare(const std::string& name) {
  PresetRun r{make_preset(name), {}, {}, {}, {}};
  r.mul = preset_mult_params(r.preset);
  r.div = preset_div_params(r.preset);
  r.mul_opt = preset_mul_options(r.preset, r.mul);
  r.div_opt = preset_div_options(r.preset);
  return r;
}

struct Outcome {
  bool ok = true;
  std::string why;
  RunStats stats;
};

// Multiplication of random fractions of length len over n steps: the exact
// step checks run inside the multiplier; afterwards the convergence identity
// X'Y' − P_n = β^−n (W_n − p_n) and the bound C·|β|^−n are checked.
inline Outcome random_mul(const PresetRun& pr, gen::Rng& rng, size_t len, int n) {
  const auto& sys = pr.preset.sys;
  // operands end before step n so that X_n·Y_n is the full product
  len = std::min(len, static_cast<size_t>(std::max(0, n - pr.mul.delta)));
  DigitString x, y;
  x.frac_digits = rng.digits(sys, len);
  y.frac_digits = rng.digits(sys, len);
  Outcome o;
  try {
    MulResult r = mul_run(sys, pr.preset.cert, pr.mul, x, y, n, pr.mul_opt);
    o.stats = r.stats;
    ComplexQuad shift = sys.power(-pr.mul.delta);
    ComplexQuad xy = eval_digits(sys, x) * eval_digits(sys, y) * shift * shift;
    ComplexQuad diff = xy - eval_digits(sys, r.product);
    if (diff != sys.power(-n) * (r.w_last - sys.digit(r.p_last))) {
      return {false, "final identity failed", r.stats};
    }
    if (!within(sys, diff, convergence_constant(sys, pr.preset.cert), n)) {
      return {false, "convergence bound failed", r.stats};
    }
  } catch (const std::exception& e) {
    return {false, e.what(), o.stats};
  }
  return o;
}

// Division with a random numerator and a random divisor (preprocessed).
inline Outcome random_div(const PresetRun& pr, gen::Rng& rng, size_t len, int n) {
  const auto& sys = pr.preset.sys;
  len = std::min(len, static_cast<size_t>(n));
  DigitString num, den;
  num.frac_digits = rng.digits(sys, len);
  den = rng.fraction(sys, len);
  Outcome o;
  try {
    Preprocessed pd = preprocess_divisor(sys, pr.preset.pre, den);
    DivResult r = div_run(sys, pr.preset.cert, pr.div, pr.preset.pre, num, den, n, pr.div_opt);
    o.stats = r.stats;
    ComplexQuad D = eval_digits(sys, pd.digits);
    if (D != r.d_used) return {false, "divisor stream mismatch", r.stats};
    ComplexQuad N = eval_digits(sys, num) * sys.power(-pr.div.delta);
    ComplexQuad diff = N / D - eval_digits(sys, r.quotient);
    if (diff != sys.power(-n) * (r.w_last / D - sys.digit(r.q_last))) {
      return {false, "final identity failed", r.stats};
    }
    if (!within(sys, diff, convergence_constant(sys, pr.preset.cert), n)) {
      return {false, "convergence bound failed", r.stats};
    }
  } catch (const std::exception& e) {
    return {false, e.what(), o.stats};
  }
  return o;
}

}  // namespace runs
