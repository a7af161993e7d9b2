#pragma once

#include "field.hpp"
#include "geometry.hpp"
#include "interval.hpp"
#include "numeration.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace olnum {

enum class CertVariant { single_epsilon, mu_nu };

inline std::string to_string(CertVariant v) {
  return v == CertVariant::single_epsilon ? "single_epsilon" : "mu_nu";
}

// Construction data of a parallelogram certificate.
struct ParallelogramWitness {
  RealQuad x0, a2;
  ComplexQuad vertex_a, vertex_b;
};

// A region I with the OL Property witness. A real interval [lo, hi] is stored
// as two real vertices; anything else is a convex polygon in CCW order.
// For the mu_nu variant, epsilon holds the covering radius r, I is the
// closed digit cell and mu/nu are the window/delay budgets.
struct OLCertificate {
  geom::Polygon vertices;
  RealQuad epsilon;
  CertVariant variant = CertVariant::single_epsilon;
  std::optional<RealQuad> mu, nu;
  std::optional<ParallelogramWitness> witness;

  bool is_interval() const {
    return vertices.size() == 2 && vertices[0].is_real() && vertices[1].is_real();
  }
  const RealQuad& lo() const { return vertices[0].re(); }
  const RealQuad& hi() const { return vertices[1].re(); }
};

inline OLCertificate interval_certificate(RealQuad lo, RealQuad hi, RealQuad eps) {
  OLCertificate c;
  c.vertices = {ComplexQuad(std::move(lo)), ComplexQuad(std::move(hi))};
  c.epsilon = std::move(eps);
  return c;
}

inline void check_region(const OLCertificate& c) {
  if (c.epsilon.sign() <= 0) throw DomainError("certificate epsilon must be positive");
  if (c.is_interval()) {
    if (!(c.lo() < c.hi())) throw DomainError("certificate interval must have lo < hi");
    return;
  }
  if (!geom::is_strictly_convex(c.vertices)) {
    throw DomainError("certificate region is not a convex polygon in CCW order");
  }
  if (c.variant == CertVariant::mu_nu && (!c.mu || !c.nu)) {
    throw DomainError("mu_nu certificate requires mu and nu");
  }
}

inline bool region_contains(const OLCertificate& c, const ComplexQuad& z) {
  if (c.is_interval()) return z.is_real() && c.lo() <= z.re() && z.re() <= c.hi();
  return geom::contains(c.vertices, z);
}

inline bool contains_zero(const OLCertificate& c) { return region_contains(c, ComplexQuad(0)); }

// K² = max |z|² over the region.
inline RealQuad region_radius_sq(const OLCertificate& c) {
  RealQuad best(0);
  for (const auto& v : c.vertices) best = std::max(best, v.norm_sq());
  return best;
}

inline Expr region_radius(const OLCertificate& c) {
  RealQuad k2 = region_radius_sq(c);
  if (auto s = field_sqrt(k2)) return lit(*s);
  return sqrt(lit(k2));
}

// Squared distance from z to the region (0 inside).
inline RealQuad sq_dist_to_region(const OLCertificate& c, const geom::Polygon& region,
                                  const ComplexQuad& z) {
  if (c.is_interval() && z.is_real()) {
    RealQuad lo = std::min(region[0].re(), region[1].re());
    RealQuad hi = std::max(region[0].re(), region[1].re());
    RealQuad x = z.re();
    if (x < lo) return (lo - x) * (lo - x);
    if (x > hi) return (x - hi) * (x - hi);
    return RealQuad(0);
  }
  return geom::sq_dist_point_polygon(z, region);
}

// z ∈ (βI)^r, closed.
inline bool in_fattened_image(const NumerationSystem& sys, const OLCertificate& c,
                              const ComplexQuad& z, const RealQuad& r) {
  geom::Polygon bi = geom::scale(c.vertices, sys.base());
  return sq_dist_to_region(c, bi, z) <= r * r;
}

// Exact test B(v, ε) ⊆ I + a.
inline bool ball_inside_translate(const OLCertificate& c, const ComplexQuad& v,
                                  const ComplexQuad& a, const RealQuad& eps) {
  if (c.is_interval()) {
    if (!v.is_real()) return false;
    RealQuad x = v.re() - a.re();
    return c.lo() + eps <= x && x + eps <= c.hi();
  }
  const auto& p = c.vertices;
  ComplexQuad z = v - a;
  RealQuad e2 = eps * eps;
  for (size_t i = 0; i < p.size(); ++i) {
    ComplexQuad e = p[(i + 1) % p.size()] - p[i];
    RealQuad cr = cross(e, z - p[i]);
    if (cr.sign() < 0) return false;
    if (cr * cr < e2 * e.norm_sq()) return false;
  }
  return true;
}

namespace detail {

// Among candidate digit indices choose the nearest to v, then the smaller
// |a|, then alphabet order.
inline size_t nearest_of(const NumerationSystem& sys, const std::vector<size_t>& cand,
                         const ComplexQuad& v) {
  size_t best = cand.front();
  RealQuad bd = (v - sys.digit(best)).norm_sq();
  for (size_t k = 1; k < cand.size(); ++k) {
    size_t i = cand[k];
    RealQuad d = (v - sys.digit(i)).norm_sq();
    if (d < bd || (d == bd && sys.digit(i).norm_sq() < sys.digit(best).norm_sq())) {
      best = i;
      bd = d;
    }
  }
  return best;
}

inline std::vector<size_t> all_digits(const NumerationSystem& sys) {
  std::vector<size_t> r(sys.size());
  for (size_t i = 0; i < r.size(); ++i) r[i] = i;
  return r;
}

}  // namespace detail

inline size_t nearest_digit(const NumerationSystem& sys, const ComplexQuad& v) {
  return detail::nearest_of(sys, detail::all_digits(sys), v);
}

// Digits a with B(v, ε) ⊆ I + a.
inline std::vector<size_t> qualifying_digits(const NumerationSystem& sys,
                                             const OLCertificate& c, const ComplexQuad& v) {
  std::vector<size_t> r;
  for (size_t i = 0; i < sys.size(); ++i) {
    if (ball_inside_translate(c, v, sys.digit(i), c.epsilon)) r.push_back(i);
  }
  return r;
}

inline RealQuad select_domain_radius(const OLCertificate& c) {
  if (c.variant == CertVariant::mu_nu) return c.epsilon + *c.mu / RealQuad(2);
  return c.epsilon;
}

// The Digit function: for v ∈ (βI)^ε a digit with B(v, ε) ⊆ I + a.
inline size_t digit_select(const OLCertificate& c, const NumerationSystem& sys,
                           const ComplexQuad& v) {
  if (!in_fattened_image(sys, c, v, select_domain_radius(c))) {
    throw DomainError("digit_select: value outside the selection domain");
  }
  if (c.variant == CertVariant::mu_nu) return nearest_digit(sys, v);
  auto cand = qualifying_digits(sys, c, v);
  if (cand.empty()) throw CertificateError("digit_select: no digit qualifies");
  return detail::nearest_of(sys, cand, v);
}

struct VerifyResult {
  bool pass = false;
  std::optional<ComplexQuad> witness;
  std::string detail;
};

namespace detail {

inline bool covered(const NumerationSystem& sys, const OLCertificate& c, const ComplexQuad& z) {
  if (c.variant == CertVariant::mu_nu) {
    for (const auto& a : sys.digits()) {
      if (region_contains(c, z - a)) return true;
    }
    return false;
  }
  return !qualifying_digits(sys, c, z).empty();
}

inline VerifyResult verify_interval(const NumerationSystem& sys, const OLCertificate& c) {
  if (!sys.is_real()) return {false, std::nullopt, "interval region needs a real system"};
  const RealQuad& eps = c.epsilon;
  RealQuad b = sys.base().re();
  RealQuad t0 = b * c.lo(), t1 = b * c.hi();
  RealQuad tlo = std::min(t0, t1) - eps, thi = std::max(t0, t1) + eps;
  std::vector<std::pair<RealQuad, RealQuad>> qs;
  for (const auto& a : sys.digits()) {
    RealQuad l = c.lo() + a.re() + eps, h = c.hi() + a.re() - eps;
    if (l <= h) qs.emplace_back(l, h);
  }
  std::sort(qs.begin(), qs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  RealQuad reach = tlo;
  bool have = false;
  auto fail_at = [&](const RealQuad& x) {
    return VerifyResult{false, ComplexQuad(x), "uncovered point in the fattened image"};
  };
  for (const auto& [l, h] : qs) {
    if (h < reach) continue;
    if (l > reach) {
      if (!have) return fail_at(reach);
      if (reach >= thi) break;
      return fail_at((reach + std::min(l, thi)) / RealQuad(2));
    }
    reach = std::max(reach, h);
    have = true;
    if (reach >= thi) break;
  }
  if (!have) return fail_at(tlo);
  if (reach < thi) return fail_at(thi);
  return {true, std::nullopt, "covered"};
}

inline VerifyResult verify_polygon(const NumerationSystem& sys, const OLCertificate& c) {
  const bool munu = c.variant == CertVariant::mu_nu;
  const RealQuad& r = c.epsilon;
  geom::Polygon target = geom::scale(c.vertices, sys.base());
  geom::Polygon outer = geom::offset_outward(target, r);
  bool exact = true;
  std::vector<geom::Polygon> cover;
  for (const auto& a : sys.digits()) {
    geom::Polygon q = geom::translate(c.vertices, a);
    if (!munu) {
      bool ex = true;
      q = geom::erode(q, r, &ex);
      exact = exact && ex;
    }
    if (q.size() >= 3 && geom::signed_area2(q).sign() > 0) cover.push_back(std::move(q));
  }
  std::vector<geom::Polygon> residue{outer};
  for (const auto& q : cover) {
    std::vector<geom::Polygon> next;
    for (const auto& piece : residue) {
      if (!geom::intersects(piece, q)) {
        next.push_back(piece);
        continue;
      }
      for (auto& s : geom::subtract(piece, q)) {
        if (geom::signed_area2(s).sign() > 0) next.push_back(std::move(s));
      }
    }
    residue = std::move(next);
  }
  RealQuad r2 = r * r;
  for (const auto& piece : residue) {
    if (geom::sq_dist_polygons(piece, target) >= r2) continue;
    // find a confirmed uncovered point between a near point and the centre
    ComplexQuad g = geom::centroid_of_vertices(piece);
    std::vector<ComplexQuad> near;
    for (const auto& v : piece) near.push_back(v);
    for (size_t i = 0; i < target.size(); ++i) near.push_back(target[i]);
    for (const auto& n0 : near) {
      ComplexQuad z = g;
      for (int k = 0; k < 48; ++k) {
        if (geom::sq_dist_point_polygon(z, target) <= r2 && !covered(sys, c, z)) {
          return {false, z, "uncovered point in the fattened image"};
        }
        z = (z + n0) * RealQuad(Rational(1, 2));
      }
    }
    if (!exact) {
      return {false, std::nullopt, "coverage not certified (edge lengths outside the field)"};
    }
    return {false, g, "residue piece near the fattened image"};
  }
  return {true, std::nullopt, "covered"};
}

}  // namespace detail

// Exact decision of the OL Property for the certificate.
inline VerifyResult verify_certificate(const NumerationSystem& sys, const OLCertificate& c) {
  check_region(c);
  if (c.variant == CertVariant::mu_nu) {
    // |β|μ + ν ≤ r
    Expr lhs = sys.base_abs() * lit(*c.mu) + lit(*c.nu);
    std::optional<bool> ok;
    if (auto m = sys.base_abs_exact()) {
      ok = *m * *c.mu + *c.nu <= c.epsilon;
    } else {
      ok = certify_leq(lhs, lit(c.epsilon));
    }
    if (!ok.value_or(false)) return {false, std::nullopt, "budget |beta|*mu + nu > r"};
  }
  if (c.is_interval()) return detail::verify_interval(sys, c);
  return detail::verify_polygon(sys, c);
}

// For interval certificates: (βI)^(2ε) = ∪(I + a) as sets.
inline bool fattening_equals_union(const NumerationSystem& sys, const OLCertificate& c) {
  if (!c.is_interval() || !sys.is_real()) return false;
  RealQuad b = sys.base().re();
  RealQuad t0 = b * c.lo(), t1 = b * c.hi();
  RealQuad two_eps = c.epsilon * RealQuad(2);
  RealQuad flo = std::min(t0, t1) - two_eps, fhi = std::max(t0, t1) + two_eps;
  std::vector<RealQuad> as;
  for (const auto& a : sys.digits()) as.push_back(a.re());
  std::sort(as.begin(), as.end());
  for (size_t i = 1; i < as.size(); ++i) {
    if (c.lo() + as[i] > c.hi() + as[i - 1]) return false;  // gap
  }
  return flo == c.lo() + as.front() && fhi == c.hi() + as.back();
}

// Interval certificate for a real base and contiguous integer alphabet.
inline OLCertificate real_interval_certificate(const NumerationSystem& sys) {
  if (!sys.is_real()) throw DomainError("real_interval_certificate: base must be real");
  if (!sys.integer_range()) throw DomainError("alphabet must be contiguous integers");
  auto [m, M] = *sys.integer_range();
  RealQuad b = sys.base().re();
  RealQuad n(M - m + 1);
  if (n <= b.abs()) throw DomainError("no redundancy: #A <= |beta|");
  RealQuad one(1), two(2);
  if (b.sign() > 0) {
    RealQuad eps = (n - b) / (two * (b + one));
    RealQuad rho = (RealQuad(M) - two * eps) / (b - one);
    RealQuad lam = (RealQuad(m) + two * eps) / (b - one);
    return interval_certificate(lam, rho, eps);
  }
  RealQuad eps = (n + b) / (two * (one - b));
  RealQuad rho = RealQuad(1 - m) / (one - b);
  RealQuad lam = RealQuad(-M - 1) / (one - b);
  return interval_certificate(lam, rho, eps);
}

// Parallelogram certificate for a non-real base and symmetric alphabet {−M..M}.
inline OLCertificate complex_parallelogram_certificate(const NumerationSystem& sys,
                                                       int eps_budget = 40) {
  const ComplexQuad& beta = sys.base();
  if (beta.is_real()) throw DomainError("complex_parallelogram_certificate: base is real");
  if (!sys.integer_range() || sys.integer_range()->first != -sys.integer_range()->second) {
    throw DomainError("alphabet must be symmetric contiguous integers {-M..M}");
  }
  long M = sys.integer_range()->second;
  RealQuad nn = beta.norm_sq();
  RealQuad tr = (beta.re() * RealQuad(2)).abs();
  if (!(nn + tr < RealQuad(2 * M + 1))) throw DomainError("insufficient alphabet");

  // work with Re β ≤ 0, Im β > 0 and map back by symmetry
  ComplexQuad b = beta;
  if (b.re().sign() > 0) b = -b;
  bool conj = b.im().sign() < 0;
  if (conj) b = b.conj();
  RealQuad re = b.re(), im = b.im(), one(1), two(2);
  RealQuad c = nn - two * re - one;
  RealQuad x0 = (RealQuad(Rational(1, 2)) + RealQuad(M) / c) / two;
  RealQuad tlo = x0;
  RealQuad thi = (RealQuad(M) + x0 * (re + one)) / (nn - re);
  RealQuad t = (tlo + thi) / two;  // t = A₂ / Im β
  RealQuad a2 = t * im;
  RealQuad a1 = -re * t - x0;
  ComplexQuad A(a1, a2), B(a1 + two * x0, a2);
  geom::Polygon poly = geom::make_ccw({-B, -A, B, A});
  if (conj) {
    for (auto& v : poly) v = v.conj();
    poly = geom::make_ccw(poly);
  }
  OLCertificate cert;
  cert.vertices = poly;
  cert.witness = ParallelogramWitness{x0, a2, conj ? A.conj() : A, conj ? B.conj() : B};
  for (int k = 1; k <= eps_budget; ++k) {
    cert.epsilon = RealQuad(Rational(1) / Rational(Integer(1) << k));
    if (verify_certificate(sys, cert).pass) return cert;
  }
  throw DomainError("epsilon search exhausted its resolution budget");
}

}  // namespace olnum
