#pragma once

#include "numeration.hpp"
#include "ol_region.hpp"

namespace olnum {

struct Encoded {
  DigitString digits;  // s integer digits (leading zeros stripped), n fractional
  int shift = 0;       // s: v·β^-s ∈ I
};

// Interval regions that miss 0 (non-negative alphabets) are extended down
// to 0: remainders live in [0, ρ] and small values take the digit 0.
inline bool extended_below(const OLCertificate& cert) {
  return cert.is_interval() && !contains_zero(cert) && cert.lo().sign() > 0;
}

inline bool encode_region_contains(const OLCertificate& cert, const ComplexQuad& r) {
  if (extended_below(cert)) return r.is_real() && r.re().sign() >= 0 && r.re() <= cert.hi();
  return region_contains(cert, r);
}

// Digit of βr for a remainder r ∈ I such that βr − digit stays in I.
inline size_t encode_digit(const NumerationSystem& sys, const OLCertificate& cert,
                           const ComplexQuad& x) {
  if (cert.variant == CertVariant::mu_nu) return nearest_digit(sys, x);
  if (extended_below(cert) && x.is_real() && sys.is_real() &&
      x.re() < sys.base().re() * cert.lo() - cert.epsilon) {
    return sys.zero_index();
  }
  return digit_select(cert, sys, x);
}

// Digits of v with n fractional positions: r₀ = v·β^-s ∈ I and
// r_k = β·r_{k−1} − Digit(β·r_{k−1}).
inline Encoded encode_value(const NumerationSystem& sys, const OLCertificate& cert,
                            const ComplexQuad& v, int n, int shift_budget = 256) {
  if (n < 0) throw DomainError("encode_value: n must be non-negative");
  ComplexQuad r = v;
  int s = 0;
  ComplexQuad inv = sys.power(-1);
  while (!encode_region_contains(cert, r)) {
    if (++s > shift_budget) throw DomainError("encode_value: value not reducible into I");
    r = r * inv;
  }
  Encoded out;
  out.shift = s;
  for (int k = 0; k < s + n; ++k) {
    ComplexQuad x = r * sys.base();
    size_t a = encode_digit(sys, cert, x);
    r = x - sys.digit(a);
    (k < s ? out.digits.int_digits : out.digits.frac_digits).push_back(a);
  }
  strip_leading_zeros(sys, out.digits);
  return out;
}

}  // namespace olnum
