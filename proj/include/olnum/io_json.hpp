#pragma once

#include "field.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace olnum::io {

using nlohmann::json;

namespace detail {

// Integers may be JSON numbers or decimal strings (for big values).
inline Integer integer_of(const json& j, const char* what) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw ParseError(std::string("bad integer in ") + what);
    return v;
  }
  throw ParseError(std::string("expected an integer for ") + what);
}

inline json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  return j.at(key);
}

}  // namespace detail

// {"a", "b", "q", "d"}: (a + b√d)/q, missing keys default to a=b=0, q=1, d=0;
// a bare integer is accepted as well.
inline RealQuad real_from_json(const json& j) {
  if (j.is_number_integer() || j.is_string()) return RealQuad(detail::integer_of(j, "real"));
  if (!j.is_object()) throw ParseError("expected a real value object");
  Integer a = j.contains("a") ? detail::integer_of(j.at("a"), "a") : Integer(0);
  Integer b = j.contains("b") ? detail::integer_of(j.at("b"), "b") : Integer(0);
  Integer q = j.contains("q") ? detail::integer_of(j.at("q"), "q") : Integer(1);
  long d = j.contains("d") ? j.at("d").get<long>() : 0;
  if (q <= 0) throw ParseError("q must be positive");
  try {
    return RealQuad(a, b, q, d);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline json to_json(const RealQuad& x) {
  return {{"a", detail::integer_json(x.a())},
          {"b", detail::integer_json(x.b())},
          {"q", detail::integer_json(x.q())},
          {"d", x.d()}};
}

// {"re", "im"}; a RealQuad object stands for a real value.
inline ComplexQuad complex_from_json(const json& j) {
  if (j.is_object() && j.contains("re")) {
    RealQuad re = real_from_json(j.at("re"));
    RealQuad im = j.contains("im") ? real_from_json(j.at("im")) : RealQuad(0);
    return ComplexQuad(re, im);
  }
  return ComplexQuad(real_from_json(j));
}

inline json to_json(const ComplexQuad& z) { return {{"re", to_json(z.re())}, {"im", to_json(z.im())}}; }

// {"d", "base", "alphabet", "symbols"}; symbols default to the digit strings.
inline NumerationSystem system_from_json(const json& j) {
  ComplexQuad base = complex_from_json(detail::field(j, "base"));
  std::vector<ComplexQuad> alphabet;
  for (const auto& a : detail::field(j, "alphabet")) alphabet.push_back(complex_from_json(a));
  std::vector<std::string> symbols;
  if (j.contains("symbols")) {
    for (const auto& s : j.at("symbols")) symbols.push_back(s.get<std::string>());
  } else {
    for (const auto& a : alphabet) {
      if (!a.is_real() || !a.re().is_rational()) throw ParseError("non-integer digits need explicit symbols");
      symbols.push_back(a.re().to_rational().get_str());
    }
  }
  NumerationSystem sys = make_system(base, alphabet, symbols);
  if (j.contains("d") && j.at("d").get<long>() != sys.d() && sys.d() > 1) {
    throw ParseError("declared field descriptor d disagrees with the system's values");
  }
  return sys;
}

inline json to_json(const NumerationSystem& sys) {
  json a = json::array(), s = json::array();
  for (size_t i = 0; i < sys.size(); ++i) {
    a.push_back(to_json(sys.digit(i)));
    s.push_back(sys.symbol(i));
  }
  return {{"d", sys.d()}, {"base", to_json(sys.base())}, {"alphabet", a}, {"symbols", s}};
}

// {"vertices", "epsilon", "variant", "mu", "nu"}
inline OLCertificate certificate_from_json(const json& j) {
  OLCertificate c;
  for (const auto& v : detail::field(j, "vertices")) c.vertices.push_back(complex_from_json(v));
  c.epsilon = real_from_json(detail::field(j, "epsilon"));
  std::string variant = j.value("variant", std::string("single_epsilon"));
  if (variant == "mu_nu") {
    c.variant = CertVariant::mu_nu;
    c.mu = real_from_json(detail::field(j, "mu"));
    c.nu = real_from_json(detail::field(j, "nu"));
  } else if (variant != "single_epsilon") {
    throw ParseError("unknown certificate variant '" + variant + "'");
  }
  if (!c.is_interval() && c.vertices.size() >= 3) c.vertices = geom::make_ccw(c.vertices);
  return c;
}

inline json to_json(const OLCertificate& c) {
  json v = json::array();
  for (const auto& z : c.vertices) v.push_back(to_json(z));
  json out{{"vertices", v}, {"epsilon", to_json(c.epsilon)}, {"variant", to_string(c.variant)}};
  if (c.mu) out["mu"] = to_json(*c.mu);
  if (c.nu) out["nu"] = to_json(*c.nu);
  return out;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

}  // namespace olnum::io
