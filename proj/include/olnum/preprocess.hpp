#pragma once

#include "field.hpp"
#include "interval.hpp"
#include "numeration.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace olnum {

// Value-preserving rewrite of a leading digit block: 0.lhs = 0.rhs.
struct RewriteRule {
  std::vector<size_t> lhs, rhs;

  friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

struct PreprocessSpec {
  std::vector<RewriteRule> rules;
  int analysis_depth = 3;
};

inline std::vector<size_t> parse_tokens(const NumerationSystem& sys, const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::vector<size_t> r;
  while (in >> tok) {
    auto idx = sys.index_of_symbol(tok);
    if (!idx) throw ParseError("unknown digit symbol '" + tok + "'");
    r.push_back(*idx);
  }
  return r;
}

inline std::string format_tokens(const NumerationSystem& sys, const std::vector<size_t>& ds) {
  std::string out;
  for (size_t i = 0; i < ds.size(); ++i) {
    if (i) out += ' ';
    out += sys.symbol(ds[i]);
  }
  return out;
}

// "lhs-tokens -> rhs-tokens"
inline RewriteRule parse_rule(const NumerationSystem& sys, const std::string& line) {
  auto arrow = line.find("->");
  if (arrow == std::string::npos) throw ParseError("rule line lacks '->': " + line);
  RewriteRule r{parse_tokens(sys, line.substr(0, arrow)), parse_tokens(sys, line.substr(arrow + 2))};
  if (r.lhs.empty() || r.lhs.size() != r.rhs.size()) {
    throw ParseError("rule sides must be non-empty and of equal length: " + line);
  }
  return r;
}

inline std::vector<RewriteRule> parse_rules(const NumerationSystem& sys, const std::string& text) {
  std::vector<RewriteRule> rules;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rules.push_back(parse_rule(sys, line));
  }
  return rules;
}

inline std::string format_rule(const NumerationSystem& sys, const RewriteRule& r) {
  return format_tokens(sys, r.lhs) + " -> " + format_tokens(sys, r.rhs);
}

inline ComplexQuad eval_fraction(const NumerationSystem& sys, const std::vector<size_t>& ds) {
  return eval_digits(sys, DigitString{{}, ds});
}

// Closure under digit-wise multiplication by each nonzero digit.
inline std::vector<RewriteRule> expand_rules(const NumerationSystem& sys,
                                             const std::vector<RewriteRule>& seeds) {
  std::vector<RewriteRule> out;
  auto mul = [&](const std::vector<size_t>& v, const ComplexQuad& a) {
    std::vector<size_t> r;
    for (size_t i : v) {
      auto idx = sys.index_of(sys.digit(i) * a);
      if (!idx) throw DomainError("rule expansion leaves the alphabet");
      r.push_back(*idx);
    }
    return r;
  };
  for (const auto& s : seeds) {
    std::vector<RewriteRule> group{s};
    for (size_t k = 0; k < sys.size(); ++k) {
      if (k == sys.zero_index()) continue;
      group.push_back({mul(s.lhs, sys.digit(k)), mul(s.rhs, sys.digit(k))});
    }
    for (auto& g : group) {
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
    }
  }
  return out;
}

struct RuleCheck {
  RewriteRule rule;
  bool pass;
};

inline std::vector<RuleCheck> verify_rules(const NumerationSystem& sys,
                                           const std::vector<RewriteRule>& rules) {
  std::vector<RuleCheck> out;
  for (const auto& r : rules) {
    bool ok = r.lhs.size() == r.rhs.size() && !r.rhs.empty() &&
              r.rhs.front() == sys.zero_index() &&
              eval_fraction(sys, r.lhs) == eval_fraction(sys, r.rhs);
    out.push_back({r, ok});
  }
  return out;
}

inline bool all_rules_pass(const NumerationSystem& sys, const std::vector<RewriteRule>& rules) {
  for (const auto& c : verify_rules(sys, rules)) {
    if (!c.pass) return false;
  }
  return true;
}

namespace detail {

// Index of the first rule whose lhs matches seq at pos (zero-padded).
inline std::optional<size_t> rule_at(const NumerationSystem& sys,
                                     const std::vector<RewriteRule>& rules,
                                     const std::vector<size_t>& seq, size_t pos) {
  for (size_t r = 0; r < rules.size(); ++r) {
    const auto& lhs = rules[r].lhs;
    bool match = true;
    for (size_t j = 0; j < lhs.size() && match; ++j) {
      size_t d = pos + j < seq.size() ? seq[pos + j] : sys.zero_index();
      match = d == lhs[j];
    }
    if (match) return r;
  }
  return std::nullopt;
}

}  // namespace detail

struct Preprocessed {
  DigitString digits;  // 0 . d1 d2 ... with d1 ≠ 0
  int shift = 0;       // value(digits) = β^shift · value(input)
};

// Rewrite at the leading nonzero digit until no rule applies, then move the
// point so that d₁ ≠ 0.
inline Preprocessed preprocess_divisor(const NumerationSystem& sys, const PreprocessSpec& spec,
                                       const DigitString& ds, size_t max_steps = 100000) {
  std::vector<size_t> seq = ds.int_digits;
  seq.insert(seq.end(), ds.frac_digits.begin(), ds.frac_digits.end());
  const long n_int = static_cast<long>(ds.int_digits.size());
  auto lead = [&]() -> std::optional<size_t> {
    for (size_t i = 0; i < seq.size(); ++i) {
      if (seq[i] != sys.zero_index()) return i;
    }
    return std::nullopt;
  };
  for (size_t step = 0;; ++step) {
    if (step > max_steps) throw DomainError("preprocessing did not terminate; rule set deficient");
    auto p = lead();
    if (!p) throw DomainError("divisor is zero");
    auto r = detail::rule_at(sys, spec.rules, seq, *p);
    if (!r) break;
    const auto& rhs = spec.rules[*r].rhs;
    if (seq.size() < *p + rhs.size()) seq.resize(*p + rhs.size(), sys.zero_index());
    std::copy(rhs.begin(), rhs.end(), seq.begin() + static_cast<long>(*p));
  }
  size_t p = *lead();
  Preprocessed out;
  out.digits.frac_digits.assign(seq.begin() + static_cast<long>(p), seq.end());
  out.shift = static_cast<int>(static_cast<long>(p) - n_int);
  return out;
}

struct DminBound {
  RationalInterval enclosure;         // certified: true bound ≥ enclosure.lo
  std::optional<RealQuad> exact;      // exact value of the bound when in the field
  RealQuad min_prefix_norm_sq;        // min |0.d1..d_depth|² over irreducible prefixes
};

// Lower bound on |D| over streams with d₁ ≠ 0 to which no rule applies.
inline DminBound dmin_lower_bound(const NumerationSystem& sys, const PreprocessSpec& spec,
                                  int depth) {
  if (depth < 1) throw DomainError("depth must be at least 1");
  std::optional<RealQuad> best;
  std::vector<size_t> s(static_cast<size_t>(depth), 0);
  const size_t n = sys.size();
  // odometer over all prefixes
  std::vector<size_t> idx(static_cast<size_t>(depth), 0);
  for (;;) {
    for (int j = 0; j < depth; ++j) s[j] = idx[j];
    if (s[0] != sys.zero_index()) {
      bool reducible = false;
      for (const auto& r : spec.rules) {
        if (r.lhs.size() > s.size()) continue;
        if (std::equal(r.lhs.begin(), r.lhs.end(), s.begin())) {
          reducible = true;
          break;
        }
      }
      if (!reducible) {
        RealQuad v = eval_fraction(sys, s).norm_sq();
        if (!best || v < *best) best = v;
      }
    }
    int j = depth - 1;
    while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
    if (j < 0) break;
  }
  if (!best) throw DomainError("all prefixes are reducible");

  DminBound out;
  out.min_prefix_norm_sq = *best;
  Expr head = [&]() -> Expr {
    if (auto e = field_sqrt(*best)) return lit(*e);
    return sqrt(lit(*best));
  }();
  Expr tail = sys.d_max() / pow(sys.base_abs(), depth);
  Expr bound = head - tail;
  out.enclosure = refine(bound, Rational(1, 1) / Rational(Integer(1) << 100));
  auto head_exact = field_sqrt(*best);
  auto base_exact = sys.base_abs_exact();
  if (head_exact && base_exact && sys.d_max_exact()) {
    out.exact = *head_exact - *sys.d_max_exact() / base_exact->pow(depth);
  }
  return out;
}

}  // namespace olnum
