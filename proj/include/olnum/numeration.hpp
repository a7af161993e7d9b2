#pragma once

#include "field.hpp"
#include "interval.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace olnum {

// A positional system: base β with |β| > 1 and a finite alphabet containing 0.
// Digits are referred to by their index in the alphabet.
class NumerationSystem {
 public:
  NumerationSystem(ComplexQuad base, std::vector<ComplexQuad> digits,
                   std::vector<std::string> symbols)
      : base_(std::move(base)), digits_(std::move(digits)), symbols_(std::move(symbols)) {
    if (digits_.empty()) throw DomainError("alphabet is empty");
    if (symbols_.size() != digits_.size()) {
      throw DomainError("alphabet and symbol lists differ in length");
    }
    d_ = base_.d();
    for (const auto& a : digits_) d_ = RealQuad::merge_d(d_, a.d());
    base_norm_sq_ = base_.norm_sq();
    if (base_norm_sq_ <= RealQuad(1)) throw DomainError("base must satisfy |beta| > 1");
    std::optional<size_t> zero;
    for (size_t i = 0; i < digits_.size(); ++i) {
      if (digits_[i].is_zero()) zero = i;
      for (size_t j = 0; j < i; ++j) {
        if (digits_[i] == digits_[j]) throw DomainError("alphabet has duplicate digits");
        if (symbols_[i] == symbols_[j]) throw DomainError("alphabet has duplicate symbols");
      }
      const std::string& s = symbols_[i];
      if (s.empty() || s == ".") throw DomainError("invalid digit symbol '" + s + "'");
      for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
          throw DomainError("digit symbol contains whitespace");
        }
      }
      symbol_index_[s] = i;
    }
    if (!zero) throw DomainError("alphabet must contain 0");
    zero_ = *zero;

    max_norm_sq_ = RealQuad(0);
    for (const auto& a : digits_) max_norm_sq_ = std::max(max_norm_sq_, a.norm_sq());

    real_ = base_.is_real();
    for (const auto& a : digits_) real_ = real_ && a.is_real();

    bool digits_real = true;
    for (const auto& a : digits_) digits_real = digits_real && a.is_real();
    if (digits_real) {
      bool integral = base_.is_real() && base_.re().is_rational() &&
                      base_.re().to_rational().get_den() == 1;
      long lo = 0, hi = 0;
      bool ok = true;
      for (const auto& a : digits_) {
        if (!a.re().is_rational() || a.re().to_rational().get_den() != 1 ||
            !a.re().to_rational().get_num().fits_slong_p()) {
          ok = false;
          break;
        }
        long v = a.re().to_rational().get_num().get_si();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (ok && static_cast<long>(digits_.size()) == hi - lo + 1) range_ = {lo, hi};
      integer_base_ = integral;
    }
    compute_d_max();
  }

  const ComplexQuad& base() const { return base_; }
  const std::vector<ComplexQuad>& digits() const { return digits_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  size_t size() const { return digits_.size(); }
  const ComplexQuad& digit(size_t i) const { return digits_.at(i); }
  const std::string& symbol(size_t i) const { return symbols_.at(i); }
  size_t zero_index() const { return zero_; }
  long d() const { return d_; }
  bool is_real() const { return real_; }
  bool is_integer_base() const { return real_ && integer_base_; }
  // Contiguous integer alphabet {m..M}, if the system has one (any base).
  const std::optional<std::pair<long, long>>& integer_range() const { return range_; }

  std::optional<size_t> index_of(const ComplexQuad& v) const {
    for (size_t i = 0; i < digits_.size(); ++i) {
      if (digits_[i] == v) return i;
    }
    return std::nullopt;
  }
  std::optional<size_t> index_of_symbol(const std::string& s) const {
    auto it = symbol_index_.find(s);
    if (it == symbol_index_.end()) return std::nullopt;
    return it->second;
  }

  const RealQuad& base_norm_sq() const { return base_norm_sq_; }
  // A² = max |a|²
  const RealQuad& max_digit_norm_sq() const { return max_norm_sq_; }
  Expr base_abs() const { return mod_expr(base_); }
  Expr max_digit_abs() const {
    RealQuad n = max_norm_sq_;
    if (auto s = field_sqrt(n)) return lit(*s);
    return sqrt(lit(n));
  }
  std::optional<RealQuad> base_abs_exact() const { return field_sqrt(base_norm_sq_); }
  std::optional<RealQuad> max_digit_abs_exact() const { return field_sqrt(max_norm_sq_); }
  // Upper bound on |Σ_{j≥1} d_j β^-j|.
  const Expr& d_max() const { return d_max_; }
  const std::optional<RealQuad>& d_max_exact() const { return d_max_exact_; }

  ComplexQuad power(int e) const {
    if (e >= 0) {
      while (static_cast<int>(pos_pow_.size()) <= e) {
        pos_pow_.push_back(pos_pow_.empty() ? ComplexQuad(1) : pos_pow_.back() * base_);
      }
      return pos_pow_[e];
    }
    int n = -e;
    while (static_cast<int>(neg_pow_.size()) <= n) {
      neg_pow_.push_back(neg_pow_.empty() ? ComplexQuad(1)
                                          : neg_pow_.back() / base_);
    }
    return neg_pow_[n];
  }

 private:
  void compute_d_max() {
    // block-1 bound A/(|β|−1) and block-2 bound max|aβ+b|/(|β|²−1)
    Expr one = lit(Rational(1));
    Expr b1 = max_digit_abs() / (base_abs() - one);
    RealQuad blk(0);
    for (const auto& a : digits_) {
      for (const auto& b : digits_) blk = std::max(blk, (a * base_ + b).norm_sq());
    }
    RealQuad den2 = base_norm_sq_ - RealQuad(1);
    std::optional<RealQuad> blk_exact = field_sqrt(blk);
    Expr b2 = (blk_exact ? lit(*blk_exact) : sqrt(lit(blk))) / lit(den2);
    std::optional<RealQuad> b1_exact;
    if (auto a = max_digit_abs_exact()) {
      if (auto m = base_abs_exact()) b1_exact = *a / (*m - RealQuad(1));
    }
    std::optional<RealQuad> b2_exact;
    if (blk_exact) b2_exact = *blk_exact / den2;
    bool use2 = false;
    if (b1_exact && b2_exact) {
      use2 = *b2_exact < *b1_exact;
    } else {
      use2 = certify_less(b2, b1).value_or(false);
    }
    d_max_ = use2 ? b2 : b1;
    d_max_exact_ = use2 ? b2_exact : b1_exact;
  }

  ComplexQuad base_;
  std::vector<ComplexQuad> digits_;
  std::vector<std::string> symbols_;
  std::map<std::string, size_t> symbol_index_;
  size_t zero_ = 0;
  long d_ = 0;
  bool real_ = false;
  bool integer_base_ = false;
  std::optional<std::pair<long, long>> range_;
  RealQuad base_norm_sq_, max_norm_sq_;
  Expr d_max_;
  std::optional<RealQuad> d_max_exact_;
  mutable std::vector<ComplexQuad> pos_pow_, neg_pow_;
};

inline NumerationSystem make_system(ComplexQuad base, std::vector<ComplexQuad> alphabet,
                                    std::vector<std::string> symbols) {
  return NumerationSystem(std::move(base), std::move(alphabet), std::move(symbols));
}

// Integer base with the contiguous alphabet {m..M}.
inline NumerationSystem make_integer_system(long base, long m, long M) {
  if (m > 0 || M < 0 || m > M) throw DomainError("alphabet {m..M} must contain 0");
  std::vector<ComplexQuad> a;
  std::vector<std::string> s;
  for (long v = m; v <= M; ++v) {
    a.emplace_back(RealQuad(v));
    s.push_back(std::to_string(v));
  }
  return NumerationSystem(ComplexQuad(RealQuad(base)), std::move(a), std::move(s));
}

// Digits as alphabet indices: int_digits are most-significant first, frac
// digits are positions 1, 2, ... after the point. Leading zero integer
// digits are not stored.
struct DigitString {
  std::vector<size_t> int_digits;
  std::vector<size_t> frac_digits;

  friend bool operator==(const DigitString&, const DigitString&) = default;
};

inline void strip_leading_zeros(const NumerationSystem& sys, DigitString& ds) {
  size_t k = 0;
  while (k < ds.int_digits.size() && ds.int_digits[k] == sys.zero_index()) ++k;
  ds.int_digits.erase(ds.int_digits.begin(), ds.int_digits.begin() + static_cast<long>(k));
}

inline DigitString parse_digits(const NumerationSystem& sys, const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  DigitString ds;
  bool seen_point = false;
  while (in >> tok) {
    if (tok == ".") {
      if (seen_point) throw ParseError("digit string has more than one '.'");
      seen_point = true;
      continue;
    }
    auto idx = sys.index_of_symbol(tok);
    if (!idx) throw ParseError("unknown digit symbol '" + tok + "'");
    (seen_point ? ds.frac_digits : ds.int_digits).push_back(*idx);
  }
  if (!seen_point) throw ParseError("digit string has no '.' token");
  strip_leading_zeros(sys, ds);
  return ds;
}

inline std::string format_digits(const NumerationSystem& sys, const DigitString& ds) {
  std::string out;
  if (ds.int_digits.empty()) {
    out = sys.symbol(sys.zero_index());
  } else {
    for (size_t i = 0; i < ds.int_digits.size(); ++i) {
      if (i) out += ' ';
      out += sys.symbol(ds.int_digits[i]);
    }
  }
  out += " .";
  for (size_t j : ds.frac_digits) {
    out += ' ';
    out += sys.symbol(j);
  }
  return out;
}

// Exact value Σ d_j β^-j; with upto set, only fractional positions ≤ upto count.
inline ComplexQuad eval_digits(const NumerationSystem& sys, const DigitString& ds,
                               std::optional<size_t> upto = std::nullopt) {
  ComplexQuad v(0);
  for (size_t i : ds.int_digits) v = v * sys.base() + sys.digit(i);
  size_t n = ds.frac_digits.size();
  if (upto) n = std::min(n, *upto);
  ComplexQuad f(0);
  ComplexQuad inv = sys.power(-1);
  for (size_t j = n; j-- > 0;) f = (f + sys.digit(ds.frac_digits[j])) * inv;
  return v + f;
}

// Whether 0 has a representation with a nonzero digit: for real β > 1 and a
// contiguous integer alphabet {m..M}, exactly when β ≤ max(M+1, 1−m).
inline bool zero_has_nontrivial_rep(const NumerationSystem& sys) {
  if (!sys.is_real() || !sys.integer_range()) {
    throw DomainError("criterion inapplicable: needs a real base and contiguous integer alphabet");
  }
  const RealQuad& b = sys.base().re();
  if (b <= RealQuad(1)) throw DomainError("criterion inapplicable: needs beta > 1");
  auto [m, M] = *sys.integer_range();
  return b <= RealQuad(std::max(M + 1, 1 - m));
}

}  // namespace olnum
