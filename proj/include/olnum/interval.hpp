#pragma once

#include "field.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olnum {

// Closed interval [lo, hi] with rational endpoints. Arithmetic is exact on
// the endpoints; only square roots widen, and they round outward.
struct RationalInterval {
  Rational lo, hi;

  RationalInterval() = default;
  RationalInterval(const Rational& v) : lo(v), hi(v) {}  // NOLINT
  RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw DomainError("RationalInterval: lo > hi");
  }

  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  bool positive() const { return lo > 0; }

  friend RationalInterval operator+(const RationalInterval& x, const RationalInterval& y) {
    return {x.lo + y.lo, x.hi + y.hi};
  }
  friend RationalInterval operator-(const RationalInterval& x, const RationalInterval& y) {
    return {x.lo - y.hi, x.hi - y.lo};
  }
  RationalInterval operator-() const { return {-hi, -lo}; }
  friend RationalInterval operator*(const RationalInterval& x, const RationalInterval& y) {
    Rational c[4] = {x.lo * y.lo, x.lo * y.hi, x.hi * y.lo, x.hi * y.hi};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  friend RationalInterval operator/(const RationalInterval& x, const RationalInterval& y) {
    if (y.contains_zero()) throw DomainError("RationalInterval: divisor encloses zero");
    Rational lo = 1 / y.hi, hi = 1 / y.lo;
    return x * RationalInterval(lo, hi);
  }
  RationalInterval pow(int e) const {
    RationalInterval r(Rational(1));
    if (e < 0) return RationalInterval(Rational(1)) / pow(-e);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }
};

inline std::ostream& operator<<(std::ostream& os, const RationalInterval& iv) {
  return os << "[" << iv.lo.get_d() << ", " << iv.hi.get_d() << "]";
}

// Round the endpoints outward onto the grid 2^-bits to keep sizes bounded.
inline RationalInterval round_outward(const RationalInterval& iv, unsigned bits) {
  Integer scale = Integer(1) << bits;
  Rational lo = iv.lo * scale, hi = iv.hi * scale;
  Integer l, h;
  mpz_fdiv_q(l.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  mpz_cdiv_q(h.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
  Rational rl(l, scale), rh(h, scale);
  rl.canonicalize();
  rh.canonicalize();
  return {rl, rh};
}

// Enclosure of √x for rational x ≥ 0 of width about 2^-bits.
inline RationalInterval sqrt_enclosure(const Rational& x, unsigned bits) {
  if (x < 0) throw DomainError("sqrt of negative value");
  Integer scale = Integer(1) << (2 * bits);
  Rational s = x * scale;
  Integer fl, ce;
  mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  mpz_cdiv_q(ce.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  Integer lo = isqrt(fl), hi = isqrt(ce);
  if (hi * hi < ce) hi += 1;
  Integer den = Integer(1) << bits;
  Rational rl(lo, den), rh(hi, den);
  rl.canonicalize();
  rh.canonicalize();
  return {rl, rh};
}

inline RationalInterval sqrt(const RationalInterval& x, unsigned bits) {
  if (x.hi < 0) throw DomainError("sqrt of negative interval");
  Rational lo = x.lo < 0 ? Rational(0) : x.lo;
  return {sqrt_enclosure(lo, bits).lo, sqrt_enclosure(x.hi, bits).hi};
}

inline RationalInterval enclose(const RealQuad& x, unsigned bits = 64) {
  if (x.is_rational()) return RationalInterval(x.to_rational());
  RationalInterval r = sqrt_enclosure(Rational(x.d()), bits);
  return RationalInterval(x.rational_part()) + RationalInterval(x.radical_part()) * r;
}

// |z| for a complex field element.
inline RationalInterval modulus(const ComplexQuad& z, unsigned bits = 64) {
  RealQuad n = z.norm_sq();
  if (auto s = field_sqrt(n)) return enclose(*s, bits);
  return sqrt(enclose(n, bits + 8), bits);
}

// A real quantity that can be enclosed to any requested resolution.
using Expr = std::function<RationalInterval(unsigned bits)>;

inline Expr lit(const Rational& v) {
  return [v](unsigned) { return RationalInterval(v); };
}
inline Expr lit(const RealQuad& v) {
  return [v](unsigned bits) { return enclose(v, bits); };
}
inline Expr mod_expr(const ComplexQuad& z) {
  return [z](unsigned bits) { return modulus(z, bits); };
}
inline Expr operator+(Expr a, Expr b) {
  return [a, b](unsigned bits) { return a(bits) + b(bits); };
}
inline Expr operator-(Expr a, Expr b) {
  return [a, b](unsigned bits) { return a(bits) - b(bits); };
}
inline Expr operator*(Expr a, Expr b) {
  return [a, b](unsigned bits) { return a(bits) * b(bits); };
}
inline Expr operator/(Expr a, Expr b) {
  return [a, b](unsigned bits) { return a(bits) / b(bits); };
}
inline Expr pow(Expr a, int e) {
  return [a, e](unsigned bits) { return a(bits).pow(e); };
}
inline Expr sqrt(Expr a) {
  return [a](unsigned bits) { return sqrt(a(bits + 4), bits); };
}

constexpr unsigned kMinBits = 32;
constexpr unsigned kMaxBits = 8192;

// Decide a < b by escalating resolution; nullopt when the budget runs out.
inline std::optional<bool> certify_less(const Expr& a, const Expr& b,
                                        unsigned max_bits = kMaxBits) {
  for (unsigned bits = kMinBits; bits <= max_bits; bits *= 2) {
    RationalInterval x = a(bits), y = b(bits);
    if (x.hi < y.lo) return true;
    if (x.lo >= y.hi) return false;
  }
  return std::nullopt;
}

// Decide a ≤ b; equality cannot be certified by intervals, so a tie is
// reported as undecided unless both sides are point intervals.
inline std::optional<bool> certify_leq(const Expr& a, const Expr& b,
                                       unsigned max_bits = kMaxBits) {
  for (unsigned bits = kMinBits; bits <= max_bits; bits *= 2) {
    RationalInterval x = a(bits), y = b(bits);
    if (x.hi <= y.lo) return true;
    if (x.lo > y.hi) return false;
  }
  return std::nullopt;
}

// Enclose an expression to width ≤ precision.
inline RationalInterval refine(const Expr& e, const Rational& precision) {
  for (unsigned bits = kMinBits; bits <= kMaxBits; bits *= 2) {
    RationalInterval r = e(bits);
    if (r.width() <= precision) return r;
  }
  throw DomainError("enclosure did not reach requested precision");
}

namespace detail {

// Recursive-descent parser for expressions over rationals and sqrt(.).
class RadicalParser {
 public:
  explicit RadicalParser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("radical expression: " + what + " at offset " +
                     std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+')) e = e + product();
      else if (eat('-')) e = e - product();
      else return e;
    }
  }
  Expr product() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) e = e * unary();
      else if (eat('/')) e = e / unary();
      else return e;
    }
  }
  Expr unary() {
    if (eat('-')) {
      Expr e = unary();
      return [e](unsigned bits) { return -e(bits); };
    }
    if (eat('+')) return unary();
    return power();
  }
  Expr power() {
    Expr e = atom();
    if (eat('^')) {
      skip();
      bool neg = eat('-');
      long n = number_literal();
      if (n > 4096) fail("exponent too large");
      e = pow(e, neg ? -static_cast<int>(n) : static_cast<int>(n));
    }
    return e;
  }
  long number_literal() {
    skip();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }
  Expr atom() {
    skip();
    if (eat('(')) {
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return sqrt(e);
    }
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (start == pos_) fail("expected number, '(' or sqrt");
    std::string tok(s_.substr(start, pos_ - start));
    Rational v;
    auto dot = tok.find('.');
    if (dot == std::string::npos) {
      v = Rational(Integer(tok));
    } else {
      std::string digits = tok.substr(0, dot) + tok.substr(dot + 1);
      if (digits.empty()) fail("bad decimal");
      Integer den = 1;
      for (size_t i = dot + 1; i < tok.size(); ++i) den *= 10;
      v = Rational(Integer(digits), den);
      v.canonicalize();
    }
    return lit(v);
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_radical(std::string_view expr) {
  return detail::RadicalParser(expr).parse();
}

// Evaluate e.g. "sqrt(3)*(6-sqrt(7))/18" to an enclosure of width ≤ precision.
inline RationalInterval eval_radical(std::string_view expr, const Rational& precision) {
  if (precision <= 0) throw DomainError("precision must be positive");
  return refine(parse_radical(expr), precision);
}

}  // namespace olnum
