#pragma once

#include "encode.hpp"
#include "field.hpp"
#include "interval.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"
#include "preprocess.hpp"

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace olnum {

// Int part in full plus exactly L fractional digits.
struct Window {
  DigitString digits;
  int L = 0;
  RationalInterval tail_bound;
  bool exact = false;  // the window is the whole value
};

// A/(|β|^L(|β|−1))
inline Expr tail_expr(const NumerationSystem& sys, int L) {
  return sys.max_digit_abs() / (pow(sys.base_abs(), L) * (sys.base_abs() - lit(Rational(1))));
}

inline RationalInterval tail_enclosure(const NumerationSystem& sys, int L) {
  return tail_expr(sys, L)(128);
}

inline Window truncate(const NumerationSystem& sys, const DigitString& ds, int L) {
  Window w;
  w.L = L;
  w.digits.int_digits = ds.int_digits;
  size_t n = static_cast<size_t>(L);
  w.exact = ds.frac_digits.size() <= n;
  w.digits.frac_digits.assign(ds.frac_digits.begin(),
                              ds.frac_digits.begin() + static_cast<long>(std::min(n, ds.frac_digits.size())));
  w.digits.frac_digits.resize(n, sys.zero_index());
  w.tail_bound = w.exact ? RationalInterval(Rational(0)) : tail_enclosure(sys, L);
  return w;
}

// Window of an exact value through its certified expansion.
inline Window window_of_value(const NumerationSystem& sys, const OLCertificate& cert,
                              const ComplexQuad& v, int L) {
  Window w = truncate(sys, encode_value(sys, cert, v, L).digits, L);
  w.exact = false;
  w.tail_bound = tail_enclosure(sys, L);
  return w;
}

inline ComplexQuad window_value(const NumerationSystem& sys, const Window& w) {
  return eval_digits(sys, w.digits);
}

namespace detail {

inline bool below(const RationalInterval& x, const RealQuad& bound) {
  return x.hi < enclose(bound, 128).lo;
}

inline RealQuad select_budget(const OLCertificate& c) {
  return c.variant == CertVariant::mu_nu ? *c.mu / RealQuad(2) : c.epsilon / RealQuad(2);
}

}  // namespace detail

inline size_t select_m(const OLCertificate& cert, const NumerationSystem& sys, const Window& w) {
  if (!w.exact && !detail::below(w.tail_bound, detail::select_budget(cert))) {
    throw DomainError("select_m: window tail bound not below the selection budget");
  }
  return digit_select(cert, sys, window_value(sys, w));
}

// Non-negative alphabets: below βλ − ε/2 the digit is 0.
inline size_t select_m_extended(const OLCertificate& cert, const NumerationSystem& sys,
                                const Window& w) {
  if (!cert.is_interval() || !sys.is_real() || sys.base().re() <= RealQuad(1)) {
    throw DomainError("select_m_extended needs a real base > 1 and an interval region");
  }
  ComplexQuad v = window_value(sys, w);
  if (v.re() < sys.base().re() * cert.lo() - cert.epsilon / RealQuad(2)) return sys.zero_index();
  return select_m(cert, sys, w);
}

// Exact test B(V, ε|Δ|) ⊆ Δ(I + q) without dividing by Δ.
inline bool scaled_ball_inside(const OLCertificate& c, const ComplexQuad& V, const ComplexQuad& D,
                               const ComplexQuad& q) {
  const RealQuad& eps = c.epsilon;
  if (c.is_interval()) {
    if (!V.is_real() || !D.is_real()) return false;
    RealQuad e0 = D.re() * (c.lo() + q.re()), e1 = D.re() * (c.hi() + q.re());
    RealQuad lo = std::min(e0, e1), hi = std::max(e0, e1);
    RealQuad m = eps * D.re().abs();
    return lo + m <= V.re() && V.re() + m <= hi;
  }
  const auto& p = c.vertices;
  RealQuad nd = D.norm_sq();
  RealQuad e2 = eps * eps * nd;
  ComplexQuad z = V - q * D;
  for (size_t i = 0; i < p.size(); ++i) {
    ComplexQuad a = p[i] * D;
    ComplexQuad e = (p[(i + 1) % p.size()] - p[i]) * D;
    RealQuad cr = cross(e, z - a);
    if (cr.sign() < 0) return false;
    if (cr * cr < e2 * e.norm_sq()) return false;
  }
  return true;
}

// Select_D on the windows V (of W) and Δ (of D).
inline size_t select_d_values(const OLCertificate& cert, const NumerationSystem& sys,
                              const ComplexQuad& V, const ComplexQuad& D) {
  if (D.is_zero()) throw DomainError("select_d: zero divisor window");
  if (!in_fattened_image(sys, cert, V / D, select_domain_radius(cert))) {
    throw DomainError("select_d: V/Delta outside the selection domain");
  }
  std::vector<size_t> cand;
  if (cert.variant == CertVariant::mu_nu) {
    cand = detail::all_digits(sys);
  } else {
    for (size_t i = 0; i < sys.size(); ++i) {
      if (scaled_ball_inside(cert, V, D, sys.digit(i))) cand.push_back(i);
    }
    if (cand.empty()) throw CertificateError("select_d: no digit qualifies");
  }
  size_t best = cand.front();
  RealQuad bd = (V - sys.digit(best) * D).norm_sq();
  for (size_t k = 1; k < cand.size(); ++k) {
    size_t i = cand[k];
    RealQuad d = (V - sys.digit(i) * D).norm_sq();
    if (d < bd || (d == bd && sys.digit(i).norm_sq() < sys.digit(best).norm_sq())) {
      best = i;
      bd = d;
    }
  }
  return best;
}

inline size_t select_d(const OLCertificate& cert, const NumerationSystem& sys, const Window& w,
                       const Window& d, const RealQuad& alpha, const RationalInterval& d_min) {
  if ((!w.exact && !detail::below(w.tail_bound, alpha)) ||
      (!d.exact && !detail::below(d.tail_bound, alpha))) {
    throw DomainError("select_d: window tail bound not below alpha");
  }
  ComplexQuad D = window_value(sys, d);
  if (D.norm_sq() < RealQuad(d_min.lo * d_min.lo)) {
    throw DomainError("select_d: divisor window below D_min");
  }
  return select_d_values(cert, sys, window_value(sys, w), D);
}

// --- specialized rules for the three example systems ---

namespace detail {

inline long int_digit(const NumerationSystem& sys, size_t i) {
  const ComplexQuad& a = sys.digit(i);
  if (!a.is_real() || !a.re().is_rational()) throw DomainError("digit is not an integer");
  return a.re().to_rational().get_num().get_si();
}

inline std::vector<long> padded_int_values(const NumerationSystem& sys, const Window& w,
                                           size_t int_len, size_t frac_len) {
  if (w.digits.int_digits.size() > int_len) throw DomainError("window integer part too long");
  if (w.digits.frac_digits.size() < frac_len) throw DomainError("window too short");
  std::vector<long> z(int_len - w.digits.int_digits.size(), 0);
  for (size_t i : w.digits.int_digits) z.push_back(int_digit(sys, i));
  for (size_t j = 0; j < frac_len; ++j) z.push_back(int_digit(sys, w.digits.frac_digits[j]));
  return z;
}

inline size_t index_of_int(const NumerationSystem& sys, long v) {
  auto i = sys.index_of(ComplexQuad(RealQuad(v)));
  if (!i) throw DomainError("digit value missing from alphabet");
  return *i;
}

}  // namespace detail

// z₋₁z₀.z₁z₂z₃ lexicographic rule for β = (3+√5)/2, A = {−1,0,1}.
inline size_t golden_select_m(const NumerationSystem& sys, const Window& w) {
  std::vector<long> z = detail::padded_int_values(sys, w, 2, 3);
  const std::vector<long> up{0, 1, -1, -1, 0}, down{0, -1, 1, 1, 0};
  bool pos = z > up || (z[0] == 0 && z[1] == 0 && z[2] == 1 && z[3] == 1 && z[4] != -1);
  bool neg = z < down || (z[0] == 0 && z[1] == 0 && z[2] == -1 && z[3] == -1 && z[4] != 1);
  return detail::index_of_int(sys, pos ? 1 : neg ? -1 : 0);
}

// 1 if 2V − Δ > 0, −1 if 2V + Δ < 0, else 0 (for Δ > 0; Δ < 0 by symmetry).
inline size_t golden_select_d(const NumerationSystem& sys, const Window& v, const Window& d) {
  ComplexQuad V = window_value(sys, v), D = window_value(sys, d);
  if (!V.is_real() || !D.is_real() || D.is_zero()) throw DomainError("golden_select_d: bad windows");
  RealQuad x = V.re(), y = D.re();
  if (y.sign() < 0) {
    x = -x;
    y = -y;
  }
  RealQuad two(2);
  long q = (two * x - y).sign() > 0 ? 1 : (two * x + y).sign() < 0 ? -1 : 0;
  return detail::index_of_int(sys, q);
}

// Thresholds on Re V at ±1/2 and ±3/2 for β = 2i, A = {−2..2}.
inline size_t knuth_digit(const NumerationSystem& sys, const ComplexQuad& V) {
  const RealQuad& x = V.re();
  RealQuad h(Rational(1, 2)), t(Rational(3, 2));
  long q = x > t ? 2 : x > h ? 1 : x >= -h ? 0 : x >= -t ? -1 : -2;
  return detail::index_of_int(sys, q);
}

// Nearest of the seven Eisenstein digits.
inline size_t eisenstein_digit(const NumerationSystem& sys, const ComplexQuad& V) {
  return nearest_digit(sys, V);
}

// --- lookup tables over window states ---

struct SelectTable {
  int int_len = 0;
  int L = 0;
  std::map<std::vector<size_t>, size_t> entries;  // int_len + L digits
  std::set<std::vector<size_t>> reachable;

  std::vector<size_t> key(const NumerationSystem& sys, const Window& w) const {
    if (static_cast<int>(w.digits.int_digits.size()) > int_len) {
      throw DomainError("window integer part exceeds the table shape");
    }
    std::vector<size_t> k(static_cast<size_t>(int_len) - w.digits.int_digits.size(), sys.zero_index());
    k.insert(k.end(), w.digits.int_digits.begin(), w.digits.int_digits.end());
    for (int j = 0; j < L; ++j) {
      k.push_back(j < static_cast<int>(w.digits.frac_digits.size()) ? w.digits.frac_digits[j]
                                                                     : sys.zero_index());
    }
    return k;
  }

  size_t lookup(const NumerationSystem& sys, const Window& w) const {
    auto it = entries.find(key(sys, w));
    if (it == entries.end()) throw DomainError("window not in table");
    return it->second;
  }

  std::string serialize(const NumerationSystem& sys) const {
    std::ostringstream os;
    for (const auto& [k, v] : entries) {
      for (int i = 0; i < static_cast<int>(k.size()); ++i) {
        if (i == int_len) os << ". ";
        os << sys.symbol(k[i]) << ' ';
      }
      os << "-> " << sys.symbol(v) << '\n';
    }
    return os.str();
  }
};

struct TableOptions {
  int safe_L = -1;                 // selection resolution; defaults to L
  size_t full_product_limit = 4096;
  size_t max_entries = 200000;
  int max_int_len = 12;
  const std::vector<RewriteRule>* rules = nullptr;  // prune rule-reducible strings
};

namespace detail {

// Depth-first enumeration of digit strings over positions −(n−1)..L whose
// value may lie in (βI)^radius.
class WindowEnumerator {
 public:
  WindowEnumerator(const NumerationSystem& sys, const OLCertificate& cert, Expr radius,
                   const std::vector<RewriteRule>* rules)
      : sys_(sys), cert_(cert), radius_(std::move(radius)), rules_(rules),
        target_(geom::scale(cert.vertices, sys.base())) {
    r_ = radius_(128);
  }

  // Calls f(digits, in_domain) for every surviving complete string.
  template <typename F>
  void run(int int_len, int L, bool force_leading_nonzero, F&& f, size_t budget) {
    int_len_ = int_len;
    L_ = L;
    lead_nonzero_ = force_leading_nonzero;
    visited_ = 0;
    budget_ = budget;
    cur_.clear();
    rec(ComplexQuad(0), 0, f);
  }

  size_t visited() const { return visited_; }

 private:
  RealQuad dist2(const ComplexQuad& v) const { return sq_dist_to_region(cert_, target_, v); }

  // 0 = out, 1 = in, 2 = undecided (treated as in)
  int classify(const ComplexQuad& v, const RationalInterval& extra) const {
    RationalInterval rad = r_ + extra;
    RationalInterval d2 = enclose(dist2(v), 128);
    if (d2.lo > rad.hi * rad.hi) return 0;
    if (d2.hi <= rad.lo * rad.lo) return 1;
    return 2;
  }

  bool reducible() const {
    if (!rules_) return false;
    size_t lead = 0;
    while (lead < cur_.size() && cur_[lead] == sys_.zero_index()) ++lead;
    if (lead == cur_.size()) return false;
    for (const auto& r : *rules_) {
      if (lead + r.lhs.size() > cur_.size()) continue;
      if (std::equal(r.lhs.begin(), r.lhs.end(), cur_.begin() + static_cast<long>(lead))) return true;
    }
    return false;
  }

  template <typename F>
  void rec(const ComplexQuad& v, int depth, F& f) {
    if (++visited_ > budget_) throw DomainError("window enumeration exceeds budget");
    int total = int_len_ + L_;
    int pos = depth - int_len_;  // position of the last fixed digit
    if (depth > 0) {
      if (reducible()) return;
      RationalInterval rest = depth == total ? RationalInterval(Rational(0))
                                             : (sys_.d_max() * pow(sys_.base_abs(), -pos))(128);
      if (classify(v, rest) == 0) return;
    }
    if (depth == total) {
      f(cur_, classify(v, RationalInterval(Rational(0))) != 0);
      return;
    }
    ComplexQuad w = sys_.power(-(pos + 1));
    for (size_t a = 0; a < sys_.size(); ++a) {
      if (depth == 0 && lead_nonzero_ && a == sys_.zero_index()) continue;
      cur_.push_back(a);
      rec(v + sys_.digit(a) * w, depth + 1, f);
      cur_.pop_back();
    }
  }

  const NumerationSystem& sys_;
  const OLCertificate& cert_;
  Expr radius_;
  RationalInterval r_;
  const std::vector<RewriteRule>* rules_;
  geom::Polygon target_;
  std::vector<size_t> cur_;
  int int_len_ = 0, L_ = 0;
  bool lead_nonzero_ = false;
  size_t visited_ = 0, budget_ = 0;
};

}  // namespace detail

// Number of integer positions a window of a value in (βI)^radius can carry.
inline int discover_int_length(const NumerationSystem& sys, const OLCertificate& cert, int L,
                               const Expr& radius, const TableOptions& opt = {}) {
  detail::WindowEnumerator en(sys, cert, radius, opt.rules);
  int found = 0;
  for (int n = 1; n <= opt.max_int_len; ++n) {
    bool any = false;
    struct Stop {};
    try {
      en.run(n, L, true, [&](const std::vector<size_t>&, bool in) {
        if (in) {
          any = true;
          throw Stop{};
        }
      }, opt.max_entries * 50);
    } catch (const Stop&) {
    }
    if (!any) return found;
    found = n;
  }
  throw DomainError("window enumeration exceeds budget: integer part unbounded "
                    "(zero may have a non-trivial representation; supply rewrite rules)");
}

inline Expr mult_window_radius(const NumerationSystem& sys, const OLCertificate& cert, int L) {
  return lit(detail::select_budget(cert)) + tail_expr(sys, L);
}

// Table of Select over windows with L fractional digits. Each entry is the
// common selection of its reachable extensions to opt.safe_L digits; the
// table is reported inconsistent (nullopt) if they disagree.
inline std::optional<SelectTable> synthesize_table(const NumerationSystem& sys,
                                                   const OLCertificate& cert, int L,
                                                   const TableOptions& opt = {}) {
  int safe_L = opt.safe_L < 0 ? L : opt.safe_L;
  if (safe_L < L) throw DomainError("safe_L must be at least L");
  Expr radius = mult_window_radius(sys, cert, safe_L);
  int n = discover_int_length(sys, cert, safe_L, radius, opt);
  SelectTable t;
  t.int_len = n;
  t.L = L;
  size_t prefix_len = static_cast<size_t>(n + L);
  std::map<std::vector<size_t>, std::set<size_t>> picks;
  detail::WindowEnumerator en(sys, cert, radius, opt.rules);
  en.run(n, safe_L, false, [&](const std::vector<size_t>& s, bool in) {
    if (!in) return;
    DigitString ds;
    ds.int_digits.assign(s.begin(), s.begin() + n);
    ds.frac_digits.assign(s.begin() + n, s.end());
    strip_leading_zeros(sys, ds);
    ComplexQuad v = eval_digits(sys, ds);
    size_t a = digit_select(cert, sys, v);
    std::vector<size_t> k(s.begin(), s.begin() + static_cast<long>(prefix_len));
    picks[k].insert(a);
    if (picks.size() > opt.max_entries) throw DomainError("table exceeds entry budget");
  }, opt.max_entries * 50);
  for (const auto& [k, set] : picks) {
    if (set.size() != 1) return std::nullopt;
    t.entries[k] = *set.begin();
    t.reachable.insert(k);
  }
  // complete the full product with nearest-digit fallbacks when it is small
  double full = 1;
  for (size_t i = 0; i < prefix_len; ++i) full *= static_cast<double>(sys.size());
  if (full <= static_cast<double>(opt.full_product_limit)) {
    std::vector<size_t> idx(prefix_len, 0);
    for (;;) {
      if (!t.entries.count(idx)) {
        DigitString ds;
        ds.int_digits.assign(idx.begin(), idx.begin() + n);
        ds.frac_digits.assign(idx.begin() + n, idx.end());
        strip_leading_zeros(sys, ds);
        t.entries[idx] = nearest_digit(sys, eval_digits(sys, ds));
      }
      size_t j = prefix_len;
      while (j > 0 && ++idx[j - 1] == sys.size()) idx[--j] = 0;
      if (j == 0) break;
    }
  }
  return t;
}

// Smallest L' ≤ safe_L whose table is consistent, when the window space is
// small enough to enumerate; otherwise safe_L.
inline int reduce_window(const NumerationSystem& sys, const OLCertificate& cert, int safe_L,
                         const TableOptions& opt = {}) {
  TableOptions o = opt;
  o.safe_L = safe_L;
  Expr radius = mult_window_radius(sys, cert, safe_L);
  int n = 0;
  try {
    n = discover_int_length(sys, cert, safe_L, radius, o);
  } catch (const DomainError&) {
    return safe_L;
  }
  double space = 1;
  for (int i = 0; i < n + safe_L; ++i) space *= static_cast<double>(sys.size());
  if (space > 50000) return safe_L;
  int best = safe_L;
  for (int L = safe_L - 1; L >= 0; --L) {
    if (!synthesize_table(sys, cert, L, o)) break;
    best = L;
  }
  return best;
}

}  // namespace olnum
