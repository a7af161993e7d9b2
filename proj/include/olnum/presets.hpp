#pragma once

#include "field.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"
#include "online_div.hpp"
#include "online_mul.hpp"
#include "params.hpp"
#include "preprocess.hpp"
#include "select.hpp"

#include <optional>
#include <string>
#include <vector>

namespace olnum {

enum class SelectorFamily { generic, golden, knuth, eisenstein };

struct Preset {
  std::string name;
  NumerationSystem sys;
  OLCertificate cert;
  PreprocessSpec pre;
  SelectorFamily selector = SelectorFamily::generic;
  // D_min from a separate argument (Knuth); otherwise from the prefix analysis
  std::optional<RationalInterval> d_min_override;
  bool refined_division = false;  // sharper bounds for symmetric intervals
};

namespace presets {

inline RealQuad q5(long a, long b, long q) { return RealQuad(Integer(a), Integer(b), Integer(q), 5); }
inline RealQuad q3(long a, long b, long q) { return RealQuad(Integer(a), Integer(b), Integer(q), 3); }

inline NumerationSystem golden_square_system() {
  return make_system(ComplexQuad(q5(3, 1, 2)), {ComplexQuad(-1), ComplexQuad(0), ComplexQuad(1)},
                     {"-1", "0", "1"});
}

inline NumerationSystem golden_mean_system() {
  return make_system(ComplexQuad(q5(1, 1, 2)), {ComplexQuad(-1), ComplexQuad(0), ComplexQuad(1)},
                     {"-1", "0", "1"});
}

inline NumerationSystem knuth_system() {
  std::vector<ComplexQuad> a;
  std::vector<std::string> s;
  for (long v = -2; v <= 2; ++v) {
    a.emplace_back(RealQuad(v));
    s.push_back(std::to_string(v));
  }
  return make_system(ComplexQuad(RealQuad(0), RealQuad(2)), a, s);
}

inline ComplexQuad omega() { return ComplexQuad(RealQuad(Rational(-1, 2)), q3(0, 1, 2)); }

// β = −1 + ω, digits 0, ±1, ±ω ("w"), ±ω² ("W")
inline NumerationSystem eisenstein_system() {
  ComplexQuad w = omega(), w2 = w * w;
  return make_system(ComplexQuad(-1) + w, {ComplexQuad(0), ComplexQuad(1), ComplexQuad(-1), w, -w, w2, -w2},
                     {"0", "1", "-1", "w", "-w", "W", "-W"});
}

// Closed Voronoi cell of 0: vertices ±1/2 ± i√3/6 and ±i√3/3.
inline geom::Polygon hexagon_h0() {
  RealQuad h(Rational(1, 2)), s6 = q3(0, 1, 6), s3 = q3(0, 1, 3);
  return geom::make_ccw({ComplexQuad(h, -s6), ComplexQuad(h, s6), ComplexQuad(RealQuad(0), s3),
                         ComplexQuad(-h, s6), ComplexQuad(-h, -s6), ComplexQuad(RealQuad(0), -s3)});
}

inline OLCertificate knuth_certificate(const RealQuad& eps = RealQuad(Rational(1, 18))) {
  RealQuad a(Rational(5, 9)), b(Rational(11, 9));
  OLCertificate c;
  c.vertices = geom::make_ccw({ComplexQuad(a, -b), ComplexQuad(a, b), ComplexQuad(-a, b), ComplexQuad(-a, -b)});
  c.epsilon = eps;
  return c;
}

// Covering radius r = √3/6; μ, ν start at the smallest-delay multiplication pair.
inline OLCertificate eisenstein_certificate() {
  OLCertificate c;
  c.vertices = hexagon_h0();
  c.epsilon = q3(0, 1, 6);
  c.variant = CertVariant::mu_nu;
  c.mu = RealQuad(Rational(1, 20));
  c.nu = RealQuad(Rational(1, 5));
  return c;
}

inline const char* eisenstein_rules_text() {
  return "1 1 -> 0 w\n"
         "1 -w -> 0 -1\n"
         "1 0 w -> 0 w 1\n"
         "1 0 -W -> 0 -1 -w\n"
         "1 -W w -> 0 w W\n"
         "1 -W -W -> 0 w -w\n"
         "1 0 -1 -> 0 w -w\n"
         "1 W -1 -> 0 -1 -w\n"
         "1 W w -> 0 -1 1\n";
}

inline const char* golden_mean_rules_text() {
  return "1 0 -1 -> 0 1 0\n"
         "1 -1 0 -> 0 0 1\n"
         "1 -1 -1 -> 0 0 0\n";
}

// Knuth: |Z| ≥ |Im Z| = 2|Σ z_{2j−1}(−4)^−j| and z₁ ≠ 0, so D_min is twice the
// prefix bound of (−4, {−2..2}).
inline RationalInterval knuth_dmin() {
  NumerationSystem m4 = make_integer_system(-4, -2, 2);
  DminBound b = dmin_lower_bound(m4, {}, 1);
  if (!b.exact) throw DomainError("knuth_dmin: bound not exact");
  Rational v = (*b.exact * RealQuad(2)).to_rational();
  return RationalInterval(v);
}

inline void self_validate(const Preset& p) {
  VerifyResult v = verify_certificate(p.sys, p.cert);
  if (!v.pass) throw CertificateError("preset " + p.name + ": certificate fails: " + v.detail);
  for (const auto& c : verify_rules(p.sys, p.pre.rules)) {
    if (!c.pass) throw CertificateError("preset " + p.name + ": rule fails: " + format_rule(p.sys, c.rule));
  }
}

inline std::vector<RewriteRule> integer_rules(const NumerationSystem& sys, long b, long m, long M) {
  if (b == 2 && m == -1 && M == 1) return expand_rules(sys, parse_rules(sys, "1 -1 -> 0 1\n"));
  if (b == 3 && m == -1 && M == 2) return parse_rules(sys, "-1 2 -> 0 -1\n");
  return {};
}

}  // namespace presets

inline Preset make_preset(const std::string& name) {
  using namespace presets;
  auto build = [&]() -> Preset {
    if (name == "golden-square") {
      NumerationSystem s = golden_square_system();
      OLCertificate c = real_interval_certificate(s);
      return {name, s, c, {{}, 1}, SelectorFamily::golden, std::nullopt, true};
    }
    if (name == "golden-mean") {
      NumerationSystem s = golden_mean_system();
      OLCertificate c = real_interval_certificate(s);
      auto rules = expand_rules(s, parse_rules(s, golden_mean_rules_text()));
      return {name, s, c, {rules, 3}, SelectorFamily::generic, std::nullopt, false};
    }
    if (name == "knuth") {
      NumerationSystem s = knuth_system();
      return {name, s, knuth_certificate(), {{}, 1}, SelectorFamily::knuth, knuth_dmin(), false};
    }
    if (name == "eisenstein") {
      NumerationSystem s = eisenstein_system();
      auto rules = expand_rules(s, parse_rules(s, eisenstein_rules_text()));
      return {name, s, eisenstein_certificate(), {rules, 3}, SelectorFamily::eisenstein, std::nullopt,
              false};
    }
    if (name == "base4") {
      NumerationSystem s = make_integer_system(4, -2, 2);
      return {name, s, real_interval_certificate(s), {{}, 1}, SelectorFamily::generic, std::nullopt, false};
    }
    if (name.rfind("integer:", 0) == 0) {
      long b = 0, m = 0, M = 0;
      char c1 = 0, c2 = 0;
      std::istringstream in(name.substr(8));
      if (!(in >> b >> c1 >> m >> c2 >> M) || c1 != ':' || c2 != ':' || !in.eof()) {
        throw ParseError("preset integer:<b>:<m>:<M> expected, got '" + name + "'");
      }
      NumerationSystem s = make_integer_system(b, m, M);
      return {name, s, real_interval_certificate(s), {integer_rules(s, b, m, M), 3},
              SelectorFamily::generic, std::nullopt, false};
    }
    throw ParseError("unknown preset '" + name + "'");
  };
  Preset p = build();
  presets::self_validate(p);
  return p;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> n{"golden-square", "golden-mean", "knuth", "eisenstein",
                                          "base4", "integer:<b>:<m>:<M>"};
  return n;
}

inline RationalInterval preset_dmin(const Preset& p) {
  if (p.d_min_override) return *p.d_min_override;
  DminBound b = dmin_lower_bound(p.sys, p.pre, p.pre.analysis_depth);
  if (b.enclosure.lo <= 0) throw DomainError("preset " + p.name + ": D_min not certified positive");
  if (b.exact && b.exact->is_rational()) return RationalInterval(b.exact->to_rational());
  return b.enclosure;
}

// Multiplication parameters; μ/ν systems take the smallest-delay frontier point.
inline ParamSet preset_mult_params(const Preset& p) {
  if (p.cert.variant == CertVariant::mu_nu) {
    auto f = mu_nu_frontier(p.sys, p.cert, Mode::mult);
    return params_from_frontier(f.front(), Mode::mult, p.sys);
  }
  return mult_params(p.sys, p.cert);
}

inline ParamSet preset_div_params(const Preset& p, bool generic_only = false) {
  RationalInterval dm = preset_dmin(p);
  if (p.cert.variant == CertVariant::mu_nu) {
    auto f = mu_nu_frontier(p.sys, p.cert, Mode::div, dm);
    return params_from_frontier(f.front(), Mode::div, p.sys, dm);
  }
  if (p.refined_division && !generic_only) return symmetric_interval_div_params(p.sys, p.cert, dm);
  return div_params(p.sys, p.cert, dm);
}

inline MulOptions preset_mul_options(const Preset& p, const ParamSet& params) {
  MulOptions o;
  switch (p.selector) {
    case SelectorFamily::golden:
      o.select = params.window_l == 3 ? MulSelect::golden : MulSelect::generic;
      break;
    case SelectorFamily::knuth: o.select = MulSelect::knuth; break;
    case SelectorFamily::eisenstein: o.select = MulSelect::eisenstein; break;
    case SelectorFamily::generic:
      if (params.window_l != params.window_l_bound) {
        TableOptions t;
        t.safe_L = params.window_l_bound;
        auto table = synthesize_table(p.sys, p.cert, params.window_l, t);
        if (!table) throw DomainError("reduced window table is inconsistent");
        o.select = MulSelect::table;
        o.table = std::move(table);
      }
      break;
  }
  return o;
}

inline DivOptions preset_div_options(const Preset& p) {
  DivOptions o;
  switch (p.selector) {
    case SelectorFamily::golden: o.select = DivSelect::golden; break;
    case SelectorFamily::knuth: o.select = DivSelect::knuth; break;
    case SelectorFamily::eisenstein: o.select = DivSelect::eisenstein; break;
    case SelectorFamily::generic: break;
  }
  return o;
}

}  // namespace olnum
