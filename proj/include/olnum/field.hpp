#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace olnum {

using Integer = mpz_class;
using Rational = mpq_class;

// Error families; the CLI maps them to exit codes 1, 2 and 3.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_square_free(long d) {
  if (d < 0) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

inline bool is_perfect_square(const Integer& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// (a + b·√d) / q with q > 0 and gcd(a, b, q) = 1.
// d = 0 and d = 1 both mean "rational"; b is folded into a for them.
class RealQuad {
 public:
  RealQuad() : a_(0), b_(0), q_(1), d_(0) {}
  RealQuad(long v) : a_(v), b_(0), q_(1), d_(0) {}  // NOLINT
  RealQuad(const Integer& v) : a_(v), b_(0), q_(1), d_(0) {}  // NOLINT
  RealQuad(const Rational& r, long d = 0)  // NOLINT
      : a_(r.get_num()), b_(0), q_(r.get_den()), d_(d) {
    check_descriptor(d_);
    normalize();
  }
  RealQuad(Integer a, Integer b, Integer q, long d)
      : a_(std::move(a)), b_(std::move(b)), q_(std::move(q)), d_(d) {
    check_descriptor(d_);
    if (q_ == 0) throw DomainError("RealQuad: zero denominator");
    normalize();
  }

  static RealQuad rational(long num, long den = 1) {
    return RealQuad(Integer(num), Integer(0), Integer(den), 0);
  }
  // √d as an element of ℚ(√d).
  static RealQuad sqrt_of(long d) {
    if (d == 0) return RealQuad();
    if (d == 1) return RealQuad(1);
    return RealQuad(Integer(0), Integer(1), Integer(1), d);
  }

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& q() const { return q_; }
  long d() const { return d_; }

  bool is_rational() const { return b_ == 0; }
  Rational rational_part() const {
    Rational r(a_, q_);
    r.canonicalize();
    return r;
  }
  Rational radical_part() const {
    Rational r(b_, q_);
    r.canonicalize();
    return r;
  }
  Rational to_rational() const {
    if (!is_rational()) throw DomainError("RealQuad: value is irrational");
    return rational_part();
  }

  int sign() const {
    int sa = sgn(a_), sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a² with b²·d
    Integer lhs = a_ * a_;
    Integer rhs = b_ * b_ * d_;
    int c = cmp(lhs, rhs);
    if (c == 0) return 0;  // unreachable for square-free d > 1
    return c > 0 ? sa : sb;
  }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  RealQuad conj_radical() const { return RealQuad(a_, -b_, q_, d_); }
  RealQuad abs() const { return sign() < 0 ? -*this : *this; }

  RealQuad operator-() const { return RealQuad(-a_, -b_, q_, d_); }

  friend RealQuad operator+(const RealQuad& x, const RealQuad& y) {
    long d = common_d(x, y);
    return RealQuad(x.a_ * y.q_ + y.a_ * x.q_, x.b_ * y.q_ + y.b_ * x.q_,
                    x.q_ * y.q_, d);
  }
  friend RealQuad operator-(const RealQuad& x, const RealQuad& y) {
    return x + (-y);
  }
  friend RealQuad operator*(const RealQuad& x, const RealQuad& y) {
    long d = common_d(x, y);
    return RealQuad(x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_,
                    x.q_ * y.q_, d);
  }
  RealQuad inverse() const {
    if (is_zero()) throw DomainError("RealQuad: division by zero");
    // q/(a + b√d) = q(a − b√d)/(a² − b²d)
    Integer n = a_ * a_ - b_ * b_ * (d_ > 1 ? d_ : 0);
    return RealQuad(q_ * a_, -q_ * b_, n, d_);
  }
  friend RealQuad operator/(const RealQuad& x, const RealQuad& y) {
    common_d(x, y);
    return x * y.inverse();
  }
  RealQuad& operator+=(const RealQuad& o) { return *this = *this + o; }
  RealQuad& operator-=(const RealQuad& o) { return *this = *this - o; }
  RealQuad& operator*=(const RealQuad& o) { return *this = *this * o; }
  RealQuad& operator/=(const RealQuad& o) { return *this = *this / o; }

  friend bool operator==(const RealQuad& x, const RealQuad& y) {
    if (x.a_ != y.a_ || x.b_ != y.b_ || x.q_ != y.q_) return false;
    return x.b_ == 0 || x.d_ == y.d_;
  }
  friend bool operator!=(const RealQuad& x, const RealQuad& y) {
    return !(x == y);
  }
  friend bool operator<(const RealQuad& x, const RealQuad& y) {
    return (x - y).sign() < 0;
  }
  friend bool operator>(const RealQuad& x, const RealQuad& y) { return y < x; }
  friend bool operator<=(const RealQuad& x, const RealQuad& y) {
    return !(y < x);
  }
  friend bool operator>=(const RealQuad& x, const RealQuad& y) {
    return !(x < y);
  }

  RealQuad pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RealQuad r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r.with_d(d_);
  }

  // Same value, re-tagged into ℚ(√d) (only valid for rational values).
  RealQuad with_d(long d) const {
    if (d == d_) return *this;
    if (!is_rational() && d_ > 1) throw DomainError("RealQuad: field mismatch");
    RealQuad r = *this;
    r.d_ = d;
    return r;
  }

  // Approximate value for display only.
  double approx() const {
    double v = a_.get_d();
    if (b_ != 0) v += b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v / q_.get_d();
  }

  std::string str() const {
    std::ostringstream os;
    if (b_ == 0) {
      os << a_;
    } else if (a_ == 0) {
      if (b_ == -1) os << "-";
      else if (b_ != 1) os << b_ << "*";
      os << "sqrt(" << d_ << ")";
    } else {
      Integer m = abs_int(b_);
      os << "(" << a_ << (b_ < 0 ? " - " : " + ");
      if (m != 1) os << m << "*";
      os << "sqrt(" << d_ << "))";
    }
    if (q_ != 1) os << "/" << q_;
    return os.str();
  }

  static long merge_d(long x, long y) {
    if (x == y) return x;
    if (x <= 1) return y;
    if (y <= 1) return x;
    throw DomainError("RealQuad: incompatible fields sqrt(" + std::to_string(x) +
                      ") and sqrt(" + std::to_string(y) + ")");
  }
  static long common_d(const RealQuad& x, const RealQuad& y) {
    return merge_d(x.d_, y.d_);
  }

 private:
  static void check_descriptor(long d) {
    if (d < 0 || !is_square_free(d)) {
      throw DomainError("RealQuad: d must be a non-negative square-free integer");
    }
  }
  static Integer abs_int(const Integer& v) { return v < 0 ? Integer(-v) : v; }

  void normalize() {
    if (d_ <= 1) {
      if (d_ == 1) a_ += b_;
      b_ = 0;
    }
    if (q_ < 0) {
      a_ = -a_;
      b_ = -b_;
      q_ = -q_;
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q_.get_mpz_t());
    if (g != 1 && g != 0) {
      mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(q_.get_mpz_t(), q_.get_mpz_t(), g.get_mpz_t());
    }
  }

  Integer a_, b_, q_;
  long d_;
};

inline std::ostream& operator<<(std::ostream& os, const RealQuad& x) {
  return os << x.str();
}

namespace detail {

inline std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  Integer nd = r.get_num() * r.get_den();
  if (!is_perfect_square(nd)) return std::nullopt;
  Rational s(isqrt(nd), r.get_den());
  s.canonicalize();
  return s;
}

}  // namespace detail

// Exact square root inside the same field when one exists.
inline std::optional<RealQuad> field_sqrt(const RealQuad& x) {
  if (x.sign() < 0) return std::nullopt;
  if (x.is_zero()) return RealQuad().with_d(x.d());
  const long d = x.d();
  if (x.is_rational()) {
    Rational r = x.to_rational();
    if (auto s = detail::rational_sqrt(r)) return RealQuad(*s).with_d(d);
    if (d > 1) {
      // √r = s·√d with s² = r/d
      if (auto s = detail::rational_sqrt(r / Rational(d))) return RealQuad(Integer(0), s->get_num(), s->get_den(), d);
    }
    return std::nullopt;
  }
  // √(A + B√d) = √s ± √t with s, t = (A ± √(A² − dB²))/2
  Rational A(x.a(), x.q()), B(x.b(), x.q());
  A.canonicalize();
  B.canonicalize();
  auto n = detail::rational_sqrt(A * A - Rational(d) * B * B);
  if (!n) return std::nullopt;
  Rational s = (A + *n) / 2, t = (A - *n) / 2;
  auto build = [&](const Rational& rat, const Rational& rad) -> std::optional<RealQuad> {
    auto p = detail::rational_sqrt(rat), q = detail::rational_sqrt(rad / Rational(d));
    if (!p || !q) return std::nullopt;
    Rational qq = B < 0 ? -*q : *q;
    RealQuad y = RealQuad(*p).with_d(d) + RealQuad(Integer(0), qq.get_num(), qq.get_den(), d);
    if (y.sign() < 0) y = -y;
    if (y * y != x) return std::nullopt;
    return y;
  };
  if (auto y = build(s, t)) return y;
  return build(t, s);
}

// z = re + i·im with both parts in the same ℚ(√d).
class ComplexQuad {
 public:
  ComplexQuad() = default;
  ComplexQuad(RealQuad re) : re_(std::move(re)) {}  // NOLINT
  ComplexQuad(long v) : re_(v) {}                     // NOLINT
  ComplexQuad(RealQuad re, RealQuad im) : re_(std::move(re)), im_(std::move(im)) {
    RealQuad::common_d(re_, im_);
  }

  static ComplexQuad i() { return {RealQuad(0), RealQuad(1)}; }

  const RealQuad& re() const { return re_; }
  const RealQuad& im() const { return im_; }
  bool is_real() const { return im_.is_zero(); }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  long d() const { return RealQuad::common_d(re_, im_); }

  ComplexQuad conj() const { return {re_, -im_}; }
  RealQuad norm_sq() const { return re_ * re_ + im_ * im_; }

  ComplexQuad operator-() const { return {-re_, -im_}; }
  friend ComplexQuad operator+(const ComplexQuad& x, const ComplexQuad& y) {
    return {x.re_ + y.re_, x.im_ + y.im_};
  }
  friend ComplexQuad operator-(const ComplexQuad& x, const ComplexQuad& y) {
    return {x.re_ - y.re_, x.im_ - y.im_};
  }
  friend ComplexQuad operator*(const ComplexQuad& x, const ComplexQuad& y) {
    if (x.is_real() && y.is_real()) return ComplexQuad(x.re_ * y.re_);
    return {x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_};
  }
  friend ComplexQuad operator*(const ComplexQuad& x, const RealQuad& s) {
    return {x.re_ * s, x.im_ * s};
  }
  ComplexQuad inverse() const {
    if (is_zero()) throw DomainError("ComplexQuad: division by zero");
    if (is_real()) return ComplexQuad(re_.inverse());
    RealQuad n = norm_sq().inverse();
    return {re_ * n, -im_ * n};
  }
  friend ComplexQuad operator/(const ComplexQuad& x, const ComplexQuad& y) {
    if (y.is_real()) {
      RealQuad inv = y.re_.inverse();
      return {x.re_ * inv, x.im_ * inv};
    }
    return x * y.inverse();
  }
  ComplexQuad& operator+=(const ComplexQuad& o) { return *this = *this + o; }
  ComplexQuad& operator-=(const ComplexQuad& o) { return *this = *this - o; }
  ComplexQuad& operator*=(const ComplexQuad& o) { return *this = *this * o; }
  ComplexQuad& operator/=(const ComplexQuad& o) { return *this = *this / o; }

  friend bool operator==(const ComplexQuad& x, const ComplexQuad& y) {
    return x.re_ == y.re_ && x.im_ == y.im_;
  }
  friend bool operator!=(const ComplexQuad& x, const ComplexQuad& y) {
    return !(x == y);
  }

  ComplexQuad pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    ComplexQuad r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    if (is_real()) return re_.str();
    std::string im = "i*" + im_.str();
    if (re_.is_zero()) return im;
    return re_.str() + " + " + im;
  }

 private:
  RealQuad re_, im_;
};

inline std::ostream& operator<<(std::ostream& os, const ComplexQuad& z) {
  return os << z.str();
}

// u.re·v.im − u.im·v.re
inline RealQuad cross(const ComplexQuad& u, const ComplexQuad& v) {
  return u.re() * v.im() - u.im() * v.re();
}

inline RealQuad dot(const ComplexQuad& u, const ComplexQuad& v) {
  return u.re() * v.re() + u.im() * v.im();
}

}  // namespace olnum
