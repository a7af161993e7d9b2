#pragma once

#include "field.hpp"
#include "interval.hpp"
#include "io_json.hpp"
#include "numeration.hpp"
#include "ol_region.hpp"
#include "online_div.hpp"
#include "online_mul.hpp"
#include "params.hpp"
#include "preprocess.hpp"
#include "presets.hpp"
#include "select.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace olnum {

namespace cli_detail {

// Exit codes
constexpr int kOk = 0, kParse = 1, kDomain = 2, kCertificate = 3;

// Values such as "3/5", "-1/2 + sqrt(3)/2*i", "beta^-7", "(1+sqrt(5))/2".
class ValueParser {
 public:
  ValueParser(const NumerationSystem& sys, std::string_view s) : sys_(sys), s_(s) {}

  ComplexQuad parse() {
    ComplexQuad v = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("value '" + std::string(s_) + "': " + what + " at offset " + std::to_string(pos_));
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
  std::string ident() {
    skip();
    size_t b = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }
  Integer integer() {
    skip();
    size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (b == pos_) fail("number expected");
    return Integer(std::string(s_.substr(b, pos_ - b)));
  }
  ComplexQuad expr() {
    ComplexQuad v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  ComplexQuad term() {
    ComplexQuad v = unary();
    for (;;) {
      if (eat('*')) {
        v = v * unary();
      } else if (eat('/')) {
        ComplexQuad d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }
  ComplexQuad unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  ComplexQuad power() {
    ComplexQuad v = atom();
    if (eat('^')) {
      bool neg = eat('-');
      long e = integer().get_si();
      if (neg) e = -e;
      if (v.is_zero() && e < 0) fail("zero to a negative power");
      v = v.pow(static_cast<int>(e));
    }
    return v;
  }
  ComplexQuad atom() {
    skip();
    if (eat('(')) {
      ComplexQuad v = expr();
      if (!eat(')')) fail("')' expected");
      return v;
    }
    std::string id = ident();
    if (id == "beta" || id == "b") return sys_.base();
    if (id == "i") return ComplexQuad::i();
    if (id == "sqrt") {
      if (!eat('(')) fail("'(' expected");
      Integer n = integer();
      if (!eat(')')) fail("')' expected");
      return ComplexQuad(radical(n));
    }
    if (!id.empty()) {
      if (auto k = sys_.index_of_symbol(id)) return sys_.digit(*k);  // digit symbols such as w, W
      fail("unknown name '" + id + "'");
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      return ComplexQuad(RealQuad(integer()));
    }
    fail("unexpected input");
  }
  // √n = k√m with m square-free
  static RealQuad radical(Integer n) {
    Integer k = 1;
    for (Integer p = 2; p * p <= n; ++p) {
      while (n % (p * p) == 0) {
        n /= p * p;
        k *= p;
      }
    }
    if (!n.fits_slong_p()) throw ParseError("radicand too large");
    return RealQuad(k) * RealQuad::sqrt_of(n.get_si());
  }

  const NumerationSystem& sys_;
  std::string_view s_;
  size_t pos_ = 0;
};

inline ComplexQuad parse_value(const NumerationSystem& sys, const std::string& s) {
  try {
    return ValueParser(sys, s).parse();
  } catch (const DomainError& e) {
    throw ParseError("value '" + s + "': " + e.what());
  }
}

inline Rational parse_rational(const std::string& s) {
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0) throw ParseError("bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

inline unsigned precision_bits() {
  const char* e = std::getenv("OLNUM_PRECISION");
  if (!e || !*e) return 64;
  char* end = nullptr;
  long v = std::strtol(e, &end, 10);
  if (*end != '\0' || v < 8 || v > 8192) throw ParseError("OLNUM_PRECISION must be an integer in [8, 8192]");
  return static_cast<unsigned>(v);
}

// Decimal with k digits after the point, rounded down (up when ceil).
inline std::string decimal(const Rational& x, int k, bool ceil) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(k));
  Rational y = x * scale;
  Integer n = y.get_num(), q;
  if (ceil) mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), y.get_den_mpz_t());
  else mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), y.get_den_mpz_t());
  bool neg = q < 0;
  std::string digits = Integer(abs(q)).get_str();
  if (static_cast<int>(digits.size()) <= k) digits.insert(0, static_cast<size_t>(k) + 1 - digits.size(), '0');
  digits.insert(digits.size() - static_cast<size_t>(k), ".");
  return (neg ? "-" : "") + digits;
}

// Exact rationals print as p/q; enclosures as a decimal interval.
inline std::string show(const RationalInterval& iv, unsigned bits) {
  if (iv.lo == iv.hi) return iv.lo.get_str();
  RationalInterval r = round_outward(iv, bits);
  int k = std::max(6, static_cast<int>(bits * 0.30103) - 1);
  return "[" + decimal(r.lo, k, false) + ", " + decimal(r.hi, k, true) + "]";
}

struct Options {
  std::string preset = "golden-square";
  std::string system_file, region_file, rules_file, trace_file;
  int depth = 3;
  int digits = 20;
  std::string mode = "mult";
  bool generic = false, no_preprocess = false, stats = false, dmin = false;
  std::string value, epsilon;
  int table_l = -1;
  std::vector<std::string> inputs;
};

inline Preset load_context(const Options& o, bool validate = true) {
  if (o.system_file.empty()) {
    if (!o.region_file.empty() || !o.rules_file.empty()) {
      throw ParseError("--region and --rules need --system");
    }
    return make_preset(o.preset);
  }
  NumerationSystem sys = io::system_from_json(io::read_json_file(o.system_file));
  OLCertificate cert;
  if (!o.region_file.empty()) {
    cert = io::certificate_from_json(io::read_json_file(o.region_file));
  } else if (sys.is_real()) {
    cert = real_interval_certificate(sys);
  } else {
    cert = complex_parallelogram_certificate(sys);
  }
  PreprocessSpec pre{{}, o.depth};
  if (!o.rules_file.empty()) {
    std::ifstream in(o.rules_file);
    if (!in) throw ParseError("cannot open '" + o.rules_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    pre.rules = expand_rules(sys, parse_rules(sys, ss.str()));
  }
  Preset p{"custom", sys, cert, pre, SelectorFamily::generic, std::nullopt, false};
  if (validate) presets::self_validate(p);
  return p;
}

// An operand: a file path, "-" (one line of stdin) or literal digit text.
inline std::string operand_text(const std::string& arg, std::istream& in) {
  if (arg == "-") {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    throw ParseError("stdin ended before an operand was read");
  }
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream f(arg);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
  std::istringstream probe(arg);
  std::string tok;
  while (probe >> tok) {
    if (tok == ".") return arg;
  }
  throw ParseError("cannot open '" + arg + "'");
}

inline std::vector<DigitString> operands(const NumerationSystem& sys, const Options& o, size_t n,
                                         std::istream& in) {
  if (o.inputs.size() > n) throw ParseError("too many operands");
  std::vector<DigitString> out;
  for (size_t i = 0; i < n; ++i) {
    std::string arg = i < o.inputs.size() ? o.inputs[i] : "-";
    out.push_back(parse_digits(sys, operand_text(arg, in)));
  }
  return out;
}

class TraceFile {
 public:
  TraceFile(const std::string& path, std::ostream& out) {
    if (path.empty()) return;
    if (path == "-") {
      os_ = &out;
    } else {
      file_.open(path);
      if (!file_) throw ParseError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  explicit operator bool() const { return os_ != nullptr; }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

inline void print_stats(std::ostream& out, const ParamSet& p, const RunStats& s, int scale) {
  out << "delta=" << p.delta << " L=" << p.window_l << " steps=" << s.steps << " scale=" << scale
      << " window_int_digits=" << s.max_window_int_digits << "/" << s.window_int_bound
      << " selector_checks=" << s.selector_checks << "\n";
}

inline int cmd_mul(const Options& o, std::istream& in, std::ostream& out) {
  Preset p = load_context(o);
  auto ops = operands(p.sys, o, 2, in);
  ParamSet params = preset_mult_params(p);
  MulOptions mo = o.generic ? MulOptions{} : preset_mul_options(p, params);
  TraceFile tf(o.trace_file, out);
  if (tf) {
    tf.stream() << trace_header(false) << "\n";
    mo.trace = [&](const StepRecord& r) { tf.stream() << trace_line(p.sys, r) << "\n"; };
  }
  int scale = 2 * params.delta + as_fraction(ops[0]).shift + as_fraction(ops[1]).shift;
  int steps = std::max(0, o.digits + scale);
  MulResult r = mul_run(p.sys, p.cert, params, ops[0], ops[1], steps, std::move(mo));
  out << format_digits(p.sys, shift_point(p.sys, r.product, r.scale)) << "\n";
  if (o.stats) print_stats(out, params, r.stats, r.scale);
  return kOk;
}

inline int cmd_div(const Options& o, std::istream& in, std::ostream& out) {
  Preset p = load_context(o);
  auto ops = operands(p.sys, o, 2, in);
  ParamSet params = preset_div_params(p, o.generic);
  DivOptions dopt = o.generic ? DivOptions{} : preset_div_options(p);
  PreprocessSpec spec = p.pre;
  if (o.no_preprocess) {
    const DigitString& d = ops[1];
    if (!d.int_digits.empty() || d.frac_digits.empty() || d.frac_digits[0] == p.sys.zero_index()) {
      throw DomainError("--no-preprocess needs a divisor of the form 0 . d1 ... with d1 != 0");
    }
    spec.rules.clear();
  }
  TraceFile tf(o.trace_file, out);
  if (tf) {
    tf.stream() << trace_header(true) << "\n";
    dopt.trace = [&](const StepRecord& r) { tf.stream() << trace_line(p.sys, r) << "\n"; };
  }
  Preprocessed pd = preprocess_divisor(p.sys, spec, ops[1]);
  int scale = params.delta + as_fraction(ops[0]).shift + pd.shift;
  int steps = std::max(0, o.digits + scale);
  DivResult r = div_run(p.sys, p.cert, params, spec, ops[0], ops[1], steps, std::move(dopt));
  out << format_digits(p.sys, shift_point(p.sys, r.quotient, r.scale)) << "\n";
  if (o.stats) print_stats(out, params, r.stats, r.scale);
  return kOk;
}

inline int cmd_encode(const Options& o, std::istream& in, std::ostream& out) {
  Preset p = load_context(o);
  std::string text = o.value;
  if (text.empty()) {
    if (!std::getline(in, text)) throw ParseError("encode needs --value or a value on stdin");
  }
  ComplexQuad v = parse_value(p.sys, text);
  Encoded e = encode_value(p.sys, p.cert, v, o.digits);
  out << format_digits(p.sys, e.digits) << "\n";
  if (o.stats) out << "shift=" << e.shift << "\n";
  return kOk;
}

inline int cmd_eval(const Options& o, std::istream& in, std::ostream& out) {
  Preset p = load_context(o);
  unsigned bits = precision_bits();
  auto ops = operands(p.sys, o, std::max<size_t>(1, o.inputs.size()), in);
  for (const auto& ds : ops) {
    ComplexQuad v = eval_digits(p.sys, ds);
    out << v.str() << "  ~ " << show(enclose(v.re(), bits), bits);
    if (!v.is_real()) out << " + " << show(enclose(v.im(), bits), bits) << "*i";
    out << "\n";
  }
  return kOk;
}

inline int cmd_preprocess(const Options& o, std::istream& in, std::ostream& out) {
  Preset p = load_context(o);
  auto ops = operands(p.sys, o, std::max<size_t>(1, o.inputs.size()), in);
  for (const auto& ds : ops) {
    Preprocessed r = preprocess_divisor(p.sys, p.pre, ds);
    out << format_digits(p.sys, r.digits) << "  shift=" << r.shift << "\n";
  }
  if (o.dmin) out << "D_min=" << show(preset_dmin(p), precision_bits()) << "\n";
  return kOk;
}

inline int cmd_params(const Options& o, std::ostream& out) {
  Preset p = load_context(o);
  unsigned bits = precision_bits();
  Mode m;
  if (o.mode == "mult") m = Mode::mult;
  else if (o.mode == "div") m = Mode::div;
  else throw ParseError("--mode must be mult or div");
  auto row = [&](const ParamSet& ps) {
    out << p.name << " " << to_string(ps.mode) << " δ=" << ps.delta << " L=" << ps.window_l;
    if (ps.window_l != ps.window_l_bound) out << " (inequality L=" << ps.window_l_bound << ")";
    if (ps.alpha) out << " α=" << ps.alpha->str();
    if (ps.mode == Mode::div) out << " D_min=" << show(ps.d_min, bits);
    if (ps.mu) out << " μ=" << ps.mu->str() << " ν=" << ps.nu->str();
    out << " source=" << ps.source << "\n";
  };
  if (p.cert.variant == CertVariant::mu_nu) {
    std::optional<RationalInterval> dm;
    if (m == Mode::div) dm = preset_dmin(p);
    for (const auto& f : mu_nu_frontier(p.sys, p.cert, m, dm)) {
      ParamSet ps = params_from_frontier(f, m, p.sys, dm);
      ps.source = "frontier";
      row(ps);
    }
    return kOk;
  }
  if (m == Mode::mult) {
    MultOptions mo;
    mo.reduce = !o.generic;
    row(mult_params(p.sys, p.cert, mo));
  } else {
    row(preset_div_params(p, o.generic));
  }
  return kOk;
}

inline int cmd_check_ol(const Options& o, std::ostream& out) {
  Preset p = load_context(o, false);
  if (!o.epsilon.empty()) p.cert.epsilon = RealQuad(parse_rational(o.epsilon));
  VerifyResult v = verify_certificate(p.sys, p.cert);
  if (v.pass) {
    out << "pass";
    if (p.cert.is_interval() && fattening_equals_union(p.sys, p.cert)) out << " (fattening (beta I)^(2eps) equals the union)";
    out << "\n";
    return kOk;
  }
  out << "fail";
  if (v.witness) out << " witness=" << v.witness->str();
  if (!v.detail.empty()) out << " (" << v.detail << ")";
  out << "\n";
  return kCertificate;
}

inline int cmd_table(const Options& o, std::ostream& out) {
  Preset p = load_context(o);
  if (p.cert.variant == CertVariant::mu_nu) throw DomainError("table: needs a single-epsilon certificate");
  ParamSet params = mult_params(p.sys, p.cert);
  TableOptions t;
  t.safe_L = params.window_l_bound;
  int L = o.table_l >= 0 ? o.table_l : params.window_l;
  auto table = synthesize_table(p.sys, p.cert, L, t);
  if (!table) throw DomainError("no consistent table with L=" + std::to_string(L));
  out << "# int_len=" << table->int_len << " L=" << table->L << " entries=" << table->entries.size() << "\n";
  out << table->serialize(p.sys);
  return kOk;
}

}  // namespace cli_detail

// Dispatches one olnum command line (without the program name).
inline int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                       std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"On-line multiplication and division in redundant numeration systems", "olnum"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sc) {
    sc->add_option("--preset", o.preset, "golden-square | golden-mean | knuth | eisenstein | base4 | integer:<b>:<m>:<M>");
    sc->add_option("--system", o.system_file, "numeration system JSON (overrides --preset)");
    sc->add_option("--region", o.region_file, "certificate JSON for --system");
    sc->add_option("--rules", o.rules_file, "preprocessing rule file for --system");
    sc->add_option("--depth", o.depth, "prefix depth of the D_min analysis for --system");
  };
  auto* mul = app.add_subcommand("mul", "on-line product of two digit strings");
  auto* div = app.add_subcommand("div", "on-line quotient of two digit strings");
  auto* enc = app.add_subcommand("encode", "digits of an exact value");
  auto* ev = app.add_subcommand("eval", "exact value of digit strings");
  auto* pre = app.add_subcommand("preprocess", "rewrite divisors so every prefix is at least D_min");
  auto* par = app.add_subcommand("params", "derive delay, window length and alpha");
  auto* chk = app.add_subcommand("check-ol", "verify the certificate of the OL property");
  auto* tab = app.add_subcommand("table", "synthesize the multiplication select table");
  for (auto* sc : {mul, div, enc, ev, pre, par, chk, tab}) common(sc);
  for (auto* sc : {mul, div}) {
    sc->add_option("--digits", o.digits, "fractional digits of the result")->check(CLI::NonNegativeNumber);
    sc->add_option("--trace", o.trace_file, "per-step CSV trace ('-' for stdout)");
    sc->add_flag("--generic", o.generic, "generic select functions and parameters");
    sc->add_flag("--stats", o.stats, "print run statistics");
    sc->add_option("operands", o.inputs, "digit-string files, '-' or literal text");
  }
  div->add_flag("--no-preprocess", o.no_preprocess, "use the divisor as given");
  enc->add_option("--value", o.value, "value expression, e.g. '1/beta' or '-1/2+sqrt(3)/2*i'");
  enc->add_option("--digits", o.digits, "fractional digits")->check(CLI::NonNegativeNumber);
  enc->add_flag("--stats", o.stats, "print the applied shift");
  ev->add_option("operands", o.inputs, "digit-string files, '-' or literal text");
  pre->add_option("operands", o.inputs, "digit-string files, '-' or literal text");
  pre->add_flag("--dmin", o.dmin, "print the certified D_min");
  par->add_option("--mode", o.mode, "mult | div");
  par->add_flag("--generic", o.generic, "generic inequalities only");
  chk->add_option("--epsilon", o.epsilon, "override epsilon (rational)");
  tab->add_option("--L", o.table_l, "window length (defaults to the derived L)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "olnum: " << e.what() << "\n";
    return kParse;
  }
  try {
    if (*mul) return cmd_mul(o, in, out);
    if (*div) return cmd_div(o, in, out);
    if (*enc) return cmd_encode(o, in, out);
    if (*ev) return cmd_eval(o, in, out);
    if (*pre) return cmd_preprocess(o, in, out);
    if (*par) return cmd_params(o, out);
    if (*chk) return cmd_check_ol(o, out);
    if (*tab) return cmd_table(o, out);
  } catch (const ParseError& e) {
    err << "olnum: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const nlohmann::json::exception& e) {
    err << "olnum: parse error: " << e.what() << "\n";
    return kParse;
  } catch (const CertificateError& e) {
    err << "olnum: certificate error: " << e.what() << "\n";
    return kCertificate;
  } catch (const DomainError& e) {
    err << "olnum: domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const InvariantViolation& e) {
    err << "olnum: invariant violation: " << e.what() << "\n";
    return kDomain;
  }
  return kParse;
}

}  // namespace olnum
