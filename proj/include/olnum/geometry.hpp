#pragma once

#include "field.hpp"
#include "interval.hpp"

#include <algorithm>
#include <optional>
#include <vector>

// Exact convex-polygon operations over ℚ(√d). Polygons are vertex lists in
// counter-clockwise order; all predicates are closed unless noted.
namespace olnum::geom {

using Polygon = std::vector<ComplexQuad>;

inline RealQuad signed_area2(const Polygon& p) {
  RealQuad s(0);
  for (size_t i = 0; i < p.size(); ++i) s += cross(p[i], p[(i + 1) % p.size()]);
  return s;
}

inline Polygon make_ccw(Polygon p) {
  if (signed_area2(p).sign() < 0) std::reverse(p.begin(), p.end());
  return p;
}

// Drop repeated and collinear vertices.
inline Polygon tidy(const Polygon& in) {
  Polygon p;
  for (const auto& v : in) {
    if (p.empty() || p.back() != v) p.push_back(v);
  }
  while (p.size() > 1 && p.front() == p.back()) p.pop_back();
  bool changed = true;
  while (changed && p.size() >= 3) {
    changed = false;
    for (size_t i = 0; i < p.size(); ++i) {
      const auto& a = p[(i + p.size() - 1) % p.size()];
      const auto& b = p[i];
      const auto& c = p[(i + 1) % p.size()];
      if (cross(b - a, c - b).is_zero()) {
        p.erase(p.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  return p;
}

inline bool is_strictly_convex(const Polygon& p) {
  if (p.size() < 3) return false;
  for (size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    const auto& c = p[(i + 2) % p.size()];
    if (cross(b - a, c - b).sign() <= 0) return false;
  }
  return true;
}

inline Polygon translate(const Polygon& p, const ComplexQuad& t) {
  Polygon r;
  r.reserve(p.size());
  for (const auto& v : p) r.push_back(v + t);
  return r;
}

// Multiplication by a nonzero complex scalar is a rotation-scaling, so
// orientation is preserved.
inline Polygon scale(const Polygon& p, const ComplexQuad& s) {
  Polygon r;
  r.reserve(p.size());
  for (const auto& v : p) r.push_back(v * s);
  return r;
}

// {z : cross(dir, z − point) ≥ offset}
struct HalfPlane {
  ComplexQuad point;
  ComplexQuad dir;
  RealQuad offset;

  RealQuad eval(const ComplexQuad& z) const { return cross(dir, z - point) - offset; }
};

// Sutherland–Hodgman against one half-plane.
inline Polygon clip(const Polygon& p, const HalfPlane& h) {
  Polygon out;
  if (p.empty()) return out;
  std::vector<RealQuad> f;
  f.reserve(p.size());
  for (const auto& v : p) f.push_back(h.eval(v));
  for (size_t i = 0; i < p.size(); ++i) {
    size_t j = (i + 1) % p.size();
    int si = f[i].sign(), sj = f[j].sign();
    if (si >= 0) out.push_back(p[i]);
    if ((si > 0 && sj < 0) || (si < 0 && sj > 0)) {
      RealQuad t = f[i] / (f[i] - f[j]);
      out.push_back(p[i] + (p[j] - p[i]) * t);
    }
  }
  return tidy(out);
}

inline bool contains(const Polygon& p, const ComplexQuad& z) {
  for (size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    if (cross(b - a, z - a).sign() < 0) return false;
  }
  return true;
}

// Exact edge length when it lies in the field, otherwise a rational upper
// bound (the caller must treat it as conservative).
struct Length {
  RealQuad value;
  bool exact;
};

inline Length edge_length(const ComplexQuad& e) {
  RealQuad n = e.norm_sq();
  if (auto s = field_sqrt(n)) return {*s, true};
  return {RealQuad(sqrt(enclose(n, 96), 64).hi), false};
}

// Points at distance ≥ amount from the complement: the inward offset.
inline Polygon erode(const Polygon& p, const RealQuad& amount, bool* exact = nullptr) {
  if (exact) *exact = true;
  if (p.size() == 2 && p[0].is_real() && p[1].is_real()) {  // interval [lo, hi]
    RealQuad lo = std::min(p[0].re(), p[1].re()) + amount, hi = std::max(p[0].re(), p[1].re()) - amount;
    if (hi < lo) return {};
    return {ComplexQuad(lo), ComplexQuad(hi)};
  }
  Polygon r = p;
  for (size_t i = 0; i < p.size() && !r.empty(); ++i) {
    ComplexQuad e = p[(i + 1) % p.size()] - p[i];
    Length len = edge_length(e);
    if (exact && !len.exact) *exact = false;
    r = clip(r, HalfPlane{p[i], e, amount * len.value});
  }
  if (r.size() < 3) {
    // keep degenerate results (segments/points) only if they are genuine
    if (r.empty()) return r;
  }
  return r;
}

// Mitered outward offset: shifts every edge line outward by amount. Contains
// the rounded fattening p^amount.
inline Polygon offset_outward(const Polygon& p, const RealQuad& amount) {
  size_t n = p.size();
  std::vector<ComplexQuad> dirs(n);
  std::vector<RealQuad> cs(n);
  for (size_t i = 0; i < n; ++i) {
    dirs[i] = p[(i + 1) % n] - p[i];
    cs[i] = cross(dirs[i], p[i]) - amount * edge_length(dirs[i]).value;
  }
  Polygon out;
  for (size_t i = 0; i < n; ++i) {
    size_t h = (i + n - 1) % n;
    const auto& e1 = dirs[h];
    const auto& e2 = dirs[i];
    RealQuad cr = cross(e1, e2);
    out.push_back((e1 * (-cs[i]) + e2 * cs[h]) * ComplexQuad(cr.inverse()));
  }
  return out;
}

inline RealQuad sq_dist_point_segment(const ComplexQuad& z, const ComplexQuad& a,
                                      const ComplexQuad& b) {
  ComplexQuad ab = b - a;
  RealQuad len2 = ab.norm_sq();
  if (len2.is_zero()) return (z - a).norm_sq();
  RealQuad t = dot(z - a, ab);
  if (t.sign() <= 0) return (z - a).norm_sq();
  if (t >= len2) return (z - b).norm_sq();
  RealQuad c = cross(ab, z - a);
  return c * c / len2;
}

// Squared distance from z to a closed convex polygon (0 inside).
inline RealQuad sq_dist_point_polygon(const ComplexQuad& z, const Polygon& p) {
  if (p.size() == 1) return (z - p[0]).norm_sq();
  if (p.size() >= 3 && contains(p, z)) return RealQuad(0);
  RealQuad best = sq_dist_point_segment(z, p[0], p[1 % p.size()]);
  for (size_t i = 1; i < p.size(); ++i) {
    best = std::min(best, sq_dist_point_segment(z, p[i], p[(i + 1) % p.size()]));
  }
  return best;
}

// Separating-axis test for closed convex polygons (segments and points allowed).
inline bool intersects(const Polygon& a, const Polygon& b) {
  auto separated_by = [](const ComplexQuad& axis, const Polygon& x, const Polygon& y) {
    RealQuad xmin = dot(axis, x[0]), xmax = xmin;
    for (const auto& v : x) {
      RealQuad t = dot(axis, v);
      xmin = std::min(xmin, t);
      xmax = std::max(xmax, t);
    }
    RealQuad ymin = dot(axis, y[0]), ymax = ymin;
    for (const auto& v : y) {
      RealQuad t = dot(axis, v);
      ymin = std::min(ymin, t);
      ymax = std::max(ymax, t);
    }
    return xmax < ymin || ymax < xmin;
  };
  auto axes = [](const Polygon& p) {
    std::vector<ComplexQuad> r;
    for (size_t i = 0; i < p.size(); ++i) {
      ComplexQuad e = p[(i + 1) % p.size()] - p[i];
      if (e.is_zero()) continue;
      r.emplace_back(-e.im(), e.re());
      if (p.size() == 2) r.push_back(e);
    }
    return r;
  };
  if (a.empty() || b.empty()) return false;
  for (const auto& ax : axes(a)) {
    if (separated_by(ax, a, b)) return false;
  }
  for (const auto& ax : axes(b)) {
    if (separated_by(ax, a, b)) return false;
  }
  return true;
}

inline RealQuad sq_dist_polygons(const Polygon& a, const Polygon& b) {
  if (intersects(a, b)) return RealQuad(0);
  RealQuad best = sq_dist_point_polygon(a[0], b);
  for (const auto& v : a) best = std::min(best, sq_dist_point_polygon(v, b));
  for (const auto& v : b) best = std::min(best, sq_dist_point_polygon(v, a));
  return best;
}

// Cover p \ interior(q) by convex pieces (possibly with zero-area slivers).
inline std::vector<Polygon> subtract(const Polygon& p, const Polygon& q) {
  std::vector<Polygon> pieces;
  Polygon rest = p;
  for (size_t i = 0; i < q.size() && !rest.empty(); ++i) {
    const auto& a = q[i];
    ComplexQuad e = q[(i + 1) % q.size()] - a;
    Polygon outside = clip(rest, HalfPlane{a, -e, RealQuad(0)});
    if (outside.size() >= 3) pieces.push_back(outside);
    rest = clip(rest, HalfPlane{a, e, RealQuad(0)});
  }
  return pieces;
}

inline ComplexQuad centroid_of_vertices(const Polygon& p) {
  ComplexQuad s(0);
  for (const auto& v : p) s += v;
  return s * RealQuad(Rational(1, static_cast<long>(p.size())));
}

}  // namespace olnum::geom
