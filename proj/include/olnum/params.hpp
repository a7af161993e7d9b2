#pragma once

#include "field.hpp"
#include "interval.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"
#include "preprocess.hpp"
#include "select.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace olnum {

enum class Mode { mult, div };

inline std::string to_string(Mode m) { return m == Mode::mult ? "mult" : "div"; }

struct ParamSet {
  Mode mode = Mode::mult;
  int delta = 0;
  int window_l = 0;        // fractional digits consulted by Select
  int window_l_bound = 0;  // L from the generic inequality (before table reduction)
  std::optional<RealQuad> alpha;
  RationalInterval d_min;  // division only
  std::optional<RealQuad> mu, nu;
  std::string source = "generic";
};

namespace detail {

constexpr int kParamSearchLimit = 400;

// Smallest n ≥ from with pred(n) certified true.
inline int smallest_certified(int from, const std::function<std::optional<bool>(int)>& pred,
                              const char* what) {
  for (int n = from; n < from + kParamSearchLimit; ++n) {
    if (pred(n).value_or(false)) return n;
  }
  throw DomainError(std::string("no ") + what + " within the search limit");
}

inline Expr one() { return lit(Rational(1)); }

// Some short dyadic rational strictly inside (lo, hi).
inline Rational dyadic_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw DomainError("empty interval for a rational witness");
  for (unsigned k = 0;; ++k) {
    Integer den = Integer(1) << k;
    Rational x = lo * den;
    Integer m = x.get_num() / x.get_den();  // floor for positive, trunc otherwise
    if (Rational(m) > x) m -= 1;
    m += 1;
    Rational c(m, den);
    c.canonicalize();
    if (lo < c && c < hi) return c;
  }
}

inline Rational precision_2pow(unsigned k) { return Rational(1) / Rational(Integer(1) << k); }

}  // namespace detail

// Tail of a window with L fractional digits: A/(|β|^L(|β|−1)).
inline Expr tail_of(const NumerationSystem& sys, int L) { return tail_expr(sys, L); }

// Tail via the block bound: D_max/|β|^L.
inline Expr tail_dmax(const NumerationSystem& sys, int L) {
  return sys.d_max() / pow(sys.base_abs(), L);
}

inline int mult_delay(const NumerationSystem& sys, const OLCertificate& cert) {
  Expr A = sys.max_digit_abs(), b = sys.base_abs();
  Expr half_eps = lit(cert.epsilon / RealQuad(2));
  return detail::smallest_certified(1, [&](int d) {
    return certify_less(lit(Rational(2)) * A * A / (pow(b, d) * (b - detail::one())), half_eps);
  }, "delay");
}

inline int window_length(const NumerationSystem& sys, const Expr& bound) {
  return detail::smallest_certified(0, [&](int L) { return certify_less(tail_of(sys, L), bound); },
                                    "window length");
}

struct MultOptions {
  bool reduce = true;
  TableOptions table;
};

inline ParamSet mult_params(const NumerationSystem& sys, const OLCertificate& cert,
                            const MultOptions& opt = {}) {
  if (cert.variant == CertVariant::mu_nu) {
    throw DomainError("mult_params: mu_nu certificates use the frontier search");
  }
  ParamSet p;
  p.mode = Mode::mult;
  p.delta = mult_delay(sys, cert);
  p.window_l_bound = window_length(sys, lit(cert.epsilon / RealQuad(2)));
  p.window_l = opt.reduce ? reduce_window(sys, cert, p.window_l_bound, opt.table) : p.window_l_bound;
  if (p.window_l != p.window_l_bound) p.source = "generic+table";
  return p;
}

// α(1 + |β|K + ε) < (ε/2)·D_min, α above the tail of the chosen L.
inline Expr alpha_sup(const NumerationSystem& sys, const OLCertificate& cert, const Rational& dmin) {
  Expr eps = lit(cert.epsilon);
  return eps * lit(Rational(1, 2)) * lit(dmin) /
         (detail::one() + sys.base_abs() * region_radius(cert) + eps);
}

inline int div_delay(const NumerationSystem& sys, const OLCertificate& cert, const Rational& dmin) {
  Expr A = sys.max_digit_abs(), b = sys.base_abs(), K = region_radius(cert);
  Expr eps = lit(cert.epsilon);
  Expr lhs = A / lit(dmin) * (detail::one() + A / (b - detail::one()) + K + eps);
  return detail::smallest_certified(1, [&](int d) {
    return certify_less(lhs, eps * lit(Rational(1, 2)) * pow(b, d));
  }, "delay");
}

inline ParamSet div_params(const NumerationSystem& sys, const OLCertificate& cert,
                           const RationalInterval& d_min) {
  if (cert.variant == CertVariant::mu_nu) {
    throw DomainError("div_params: mu_nu certificates use the frontier search");
  }
  if (d_min.lo <= 0) throw DomainError("d_min must be certified positive");
  ParamSet p;
  p.mode = Mode::div;
  p.d_min = d_min;
  Expr sup = alpha_sup(sys, cert, d_min.lo);
  p.window_l = p.window_l_bound = window_length(sys, sup);
  RationalInterval t = refine(tail_of(sys, p.window_l), detail::precision_2pow(200));
  RationalInterval s = refine(sup, detail::precision_2pow(200));
  p.alpha = RealQuad(detail::dyadic_between(t.hi, s.lo));
  p.delta = div_delay(sys, cert, d_min.lo);
  return p;
}

// Sharper division bounds for a real base β > 1 with a symmetric interval
// I = [−ρ, ρ]:
//   (A(1 + D_max) + (ρ − ε/2)A)|β|^−δ < D_min(|β|+1)ε/2
//   (1 + |β|)·D_max·tail(L)/D_min² < ε/2
inline ParamSet symmetric_interval_div_params(const NumerationSystem& sys,
                                              const OLCertificate& cert,
                                              const RationalInterval& d_min) {
  if (!sys.is_real() || sys.base().re() <= RealQuad(1) || !cert.is_interval() ||
      cert.lo() != -cert.hi()) {
    throw DomainError("symmetric_interval_div_params needs β > 1 and I = [-rho, rho]");
  }
  if (d_min.lo <= 0) throw DomainError("d_min must be certified positive");
  Expr A = sys.max_digit_abs(), b = sys.base_abs(), Dmax = sys.d_max();
  Expr one = detail::one(), half = lit(Rational(1, 2));
  Expr eps = lit(cert.epsilon), rho = lit(cert.hi()), dm = lit(d_min.lo);
  ParamSet p;
  p.mode = Mode::div;
  p.d_min = d_min;
  p.source = "symmetric-interval";
  Expr lhs = A * (one + Dmax) + (rho - eps * half) * A;
  Expr rhs = dm * (b + one) * eps * half;
  p.delta = detail::smallest_certified(1, [&](int d) {
    return certify_less(lhs / pow(b, d), rhs);
  }, "delay");
  p.window_l = p.window_l_bound = detail::smallest_certified(0, [&](int L) {
    return certify_less((one + b) * Dmax * tail_of(sys, L) / (dm * dm), eps * half);
  }, "window length");
  Expr sup = alpha_sup(sys, cert, d_min.lo);
  RationalInterval t = refine(tail_of(sys, p.window_l), detail::precision_2pow(200));
  RationalInterval s = refine(sup, detail::precision_2pow(200));
  if (t.hi < s.lo) {
    p.alpha = RealQuad(detail::dyadic_between(t.hi, s.lo));
  } else {
    p.alpha = RealQuad(detail::dyadic_between(t.hi, t.hi * 2));
  }
  return p;
}

// Smallest δ ≥ 1 with β/2 + 2a²/(β^δ(β−1)) ≤ a + 1/2, exactly.
inline int integer_base_delay(long beta, long a) {
  if (beta < 2) throw DomainError("integer_base_delay: beta must be at least 2");
  if (2 * a < beta || a > beta - 1) throw DomainError("integer_base_delay: need beta/2 <= a <= beta-1");
  Rational lhs0(beta, 2), rhs = Rational(a) + Rational(1, 2);
  lhs0.canonicalize();
  Integer pw = beta;
  for (int d = 1; d < detail::kParamSearchLimit; ++d, pw *= beta) {
    Rational t(Integer(2 * a * a), pw * (beta - 1));
    t.canonicalize();
    if (lhs0 + t <= rhs) return d;
  }
  throw DomainError("integer_base_delay: no delay within the search limit");
}

// --- μ/ν trade-off for the hexagonal (Voronoi cell) certificate ---

struct FrontierPoint {
  int delta = 0;
  int window_l = 0;
  RealQuad mu, nu;
  RationalInterval mu_min, nu_min;  // enclosures of the lower bounds the witnesses beat
};

struct MuNuInputs {
  Expr A, b, Dmax, K, r;
  std::optional<RationalInterval> d_min;  // division only
};

inline MuNuInputs mu_nu_inputs(const NumerationSystem& sys, const OLCertificate& cert) {
  return {sys.max_digit_abs(), sys.base_abs(), sys.d_max(), region_radius(cert), lit(cert.epsilon),
          std::nullopt};
}

namespace detail {

// μ ≥ mu_bound(L); ν ≥ nu_bound(δ, μ).
inline Expr mu_bound(const MuNuInputs& in, Mode m, int L) {
  Expr two = lit(Rational(2));
  if (m == Mode::mult) return two * in.Dmax / pow(in.b, L);
  return two * in.Dmax * (in.b * in.K + in.r + one()) / (lit(in.d_min->lo) * pow(in.b, L));
}

inline Expr nu_bound(const MuNuInputs& in, Mode m, int d, const Expr& mu) {
  Expr two = lit(Rational(2));
  if (m == Mode::mult) return two * in.A * in.Dmax / pow(in.b, d);
  return in.A * (in.Dmax + one() + in.K + mu) / (lit(in.d_min->lo) * pow(in.b, d));
}

}  // namespace detail

// Feasibility of (δ, L): rational μ, ν above their bounds with |β|μ + ν ≤ r.
inline std::optional<FrontierPoint> mu_nu_witness(const NumerationSystem& sys,
                                                  const OLCertificate& cert, const MuNuInputs& in,
                                                  Mode m, int delta, int L) {
  const unsigned bits = 96;
  Rational prec = detail::precision_2pow(bits);
  RationalInterval mu_min = refine(detail::mu_bound(in, m, L), prec);
  RationalInterval nu_min0 = refine(detail::nu_bound(in, m, delta, lit(mu_min.hi)), prec);
  RationalInterval b = refine(in.b, prec), r = refine(in.r, prec);
  Rational slack = r.lo - b.hi * mu_min.hi - nu_min0.hi;
  if (slack <= 0) return std::nullopt;
  FrontierPoint f;
  f.delta = delta;
  f.window_l = L;
  Rational mu = detail::dyadic_between(mu_min.hi, mu_min.hi + slack / (4 * b.hi));
  f.mu = RealQuad(mu);
  f.mu_min = mu_min;
  RationalInterval nu_min = refine(detail::nu_bound(in, m, delta, lit(mu)), prec);
  Rational nu = detail::dyadic_between(nu_min.hi, nu_min.hi + slack / 4);
  f.nu = RealQuad(nu);
  f.nu_min = nu_min;
  // exact budget re-check
  RealQuad lhs;
  if (auto be = sys.base_abs_exact()) {
    lhs = *be * f.mu + f.nu;
    if (!(lhs <= cert.epsilon)) return std::nullopt;
  } else if (!certify_leq(in.b * lit(f.mu) + lit(f.nu), in.r).value_or(false)) {
    return std::nullopt;
  }
  return f;
}

// Pareto frontier of (δ, L): for each δ the smallest feasible L, keeping the
// pairs where L strictly drops.
inline std::vector<FrontierPoint> mu_nu_frontier(const NumerationSystem& sys,
                                                 const OLCertificate& cert, Mode m,
                                                 std::optional<RationalInterval> d_min = {}) {
  if (cert.variant != CertVariant::mu_nu) throw DomainError("mu_nu_frontier needs a mu_nu certificate");
  MuNuInputs in = mu_nu_inputs(sys, cert);
  if (m == Mode::div) {
    if (!d_min || d_min->lo <= 0) throw DomainError("division frontier needs a positive d_min");
    in.d_min = d_min;
  }
  const int max_l = 80, max_d = 80;
  // L_inf: smallest L feasible with ν → 0, i.e. |β|·mu_bound(L) < r
  auto l_feasible_limit = [&](int L) {
    return certify_less(in.b * detail::mu_bound(in, m, L), in.r).value_or(false);
  };
  int l_inf = -1;
  for (int L = 0; L <= max_l; ++L) {
    if (l_feasible_limit(L)) {
      l_inf = L;
      break;
    }
  }
  if (l_inf < 0) throw DomainError("mu_nu_frontier: no feasible window length");
  std::vector<FrontierPoint> out;
  int last_l = max_l + 1;
  for (int d = 1; d <= max_d && last_l > l_inf; ++d) {
    // feasibility is monotone in L: skip delays that fail even at the widest window
    if (!mu_nu_witness(sys, cert, in, m, d, std::min(last_l - 1, max_l))) continue;
    for (int L = l_inf; L < last_l; ++L) {
      if (auto f = mu_nu_witness(sys, cert, in, m, d, L)) {
        out.push_back(*f);
        last_l = L;
        break;
      }
    }
  }
  return out;
}

inline ParamSet params_from_frontier(const FrontierPoint& f, Mode m,
                                     const NumerationSystem& sys,
                                     std::optional<RationalInterval> d_min = {}) {
  ParamSet p;
  p.mode = m;
  p.delta = f.delta;
  p.window_l = p.window_l_bound = f.window_l;
  p.mu = f.mu;
  p.nu = f.nu;
  p.source = "mu-nu";
  if (d_min) p.d_min = *d_min;
  // window tail bound D_max/|β|^L, as a rational strictly above it
  RationalInterval t = refine(tail_dmax(sys, f.window_l), detail::precision_2pow(200));
  p.alpha = RealQuad(detail::dyadic_between(t.hi, t.hi * Rational(1025, 1024)));
  return p;
}

inline OLCertificate with_budgets(OLCertificate c, const ParamSet& p) {
  if (c.variant == CertVariant::mu_nu) {
    if (!p.mu || !p.nu) throw DomainError("mu_nu parameters lack mu/nu witnesses");
    c.mu = p.mu;
    c.nu = p.nu;
  }
  return c;
}

}  // namespace olnum
