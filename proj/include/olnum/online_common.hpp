#pragma once

#include "encode.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "interval.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"
#include "select.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace olnum {

// A monitored invariant failed: the parameters do not fit the certificate.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Digit at fractional position j ≥ 1 (alphabet index).
using DigitSource = std::function<size_t(size_t)>;

// Finite string, zero-padded.
inline DigitSource finite_source(const NumerationSystem& sys, std::vector<size_t> digits) {
  size_t z = sys.zero_index();
  return [d = std::move(digits), z](size_t j) { return j >= 1 && j <= d.size() ? d[j - 1] : z; };
}

// value(ds) = β^shift · 0.digits
struct Fraction {
  std::vector<size_t> digits;
  int shift = 0;
};

inline Fraction as_fraction(const DigitString& ds) {
  Fraction f;
  f.digits = ds.int_digits;
  f.digits.insert(f.digits.end(), ds.frac_digits.begin(), ds.frac_digits.end());
  f.shift = static_cast<int>(ds.int_digits.size());
  return f;
}

// The digits of β^scale · 0.digits with the point moved accordingly.
inline DigitString shift_point(const NumerationSystem& sys, const DigitString& frac, int scale) {
  std::vector<size_t> all = frac.int_digits;
  all.insert(all.end(), frac.frac_digits.begin(), frac.frac_digits.end());
  long n_int = static_cast<long>(frac.int_digits.size()) + scale;
  DigitString out;
  if (n_int <= 0) {
    out.frac_digits.assign(static_cast<size_t>(-n_int), sys.zero_index());
    out.frac_digits.insert(out.frac_digits.end(), all.begin(), all.end());
  } else {
    if (static_cast<size_t>(n_int) > all.size()) all.resize(static_cast<size_t>(n_int), sys.zero_index());
    out.int_digits.assign(all.begin(), all.begin() + n_int);
    out.frac_digits.assign(all.begin() + n_int, all.end());
  }
  strip_leading_zeros(sys, out);
  return out;
}

struct StepRecord {
  int k = 0;
  size_t digit = 0;
  ComplexQuad w;
  DigitString w_window;
  std::optional<DigitString> d_window;
};

using TraceSink = std::function<void(const StepRecord&)>;

inline std::string trace_header(bool division) {
  return division ? "k,digit,W,window,divisor_window" : "k,digit,W,window";
}

inline std::string trace_line(const NumerationSystem& sys, const StepRecord& r) {
  std::string s = std::to_string(r.k) + "," + sys.symbol(r.digit) + ",\"" + r.w.str() + "\",\"" +
                  format_digits(sys, r.w_window) + "\"";
  if (r.d_window) s += ",\"" + format_digits(sys, *r.d_window) + "\"";
  return s;
}

struct RunStats {
  int steps = 0;
  size_t max_window_int_digits = 0;
  size_t window_int_bound = 0;
  int window_frac_digits = 0;
  size_t selector_checks = 0;  // windowed Select compared against the certified Select
};

namespace detail {

// Smallest s ≥ 0 with R·|β|^−s ≤ inradius of I about 0: every window of a
// value of modulus ≤ R carries at most s integer digits.
inline size_t shift_bound(const NumerationSystem& sys, const OLCertificate& cert, const Expr& R) {
  RationalInterval inr;
  if (cert.is_interval()) {
    RealQuad a = cert.lo().abs(), b = cert.hi().abs();
    if (cert.lo().sign() > 0) a = cert.hi();  // extended region [0, ρ]
    inr = enclose(std::min(a, b), 128);
  } else {
    const auto& p = cert.vertices;
    std::optional<RationalInterval> best;
    for (size_t i = 0; i < p.size(); ++i) {
      ComplexQuad e = p[(i + 1) % p.size()] - p[i];
      RealQuad c = cross(e, -p[i]);  // cross(e, 0 − p_i)
      RationalInterval d = enclose(c, 128) / modulus(e, 128);
      if (!best || d.lo < best->lo) best = d;
    }
    inr = *best;
  }
  if (inr.lo <= 0) throw DomainError("region does not contain 0 in its interior");
  for (size_t s = 0; s < 512; ++s) {
    if (certify_leq(R / pow(sys.base_abs(), static_cast<int>(s)), lit(inr.lo)).value_or(false)) return s;
  }
  throw DomainError("window integer bound not found");
}

inline bool in_region_fattened(const OLCertificate& c, const ComplexQuad& z, const RealQuad& r) {
  return sq_dist_to_region(c, c.vertices, z) <= r * r;
}

// Window of an exact value whose tail bound follows the certificate variant.
inline Window value_window(const NumerationSystem& sys, const OLCertificate& cert,
                           const ComplexQuad& v, int L) {
  Window w = truncate(sys, encode_value(sys, cert, v, L).digits, L);
  w.exact = false;
  w.tail_bound = cert.variant == CertVariant::mu_nu
                     ? (sys.d_max() / pow(sys.base_abs(), L))(128)
                     : tail_enclosure(sys, L);
  return w;
}

}  // namespace detail

}  // namespace olnum
