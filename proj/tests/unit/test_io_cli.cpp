#include <olnum/cli.hpp>
#include <olnum/io_json.hpp>
#include <olnum/presets.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace olnum;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int c = run_command(args, in, out, err);
  return {c, out.str(), err.str()};
}

std::string data(const char* f) { return std::string(OLNUM_DATA_DIR) + "/" + f; }

size_t count_tokens(const std::string& s) {
  std::istringstream in(s);
  std::string t;
  size_t n = 0;
  while (in >> t) ++n;
  return n;
}

}  // namespace

TEST(Json, RealAndComplexRoundTrip) {
  RealQuad x = presets::q5(3, -7, 4);
  EXPECT_EQ(io::real_from_json(io::to_json(x)), x);
  ComplexQuad z = presets::omega();
  EXPECT_EQ(io::complex_from_json(io::to_json(z)), z);
  EXPECT_EQ(io::real_from_json(io::json::parse(R"({"a": "123456789012345678901234567890"})")),
            RealQuad(Integer("123456789012345678901234567890")));
  EXPECT_EQ(io::real_from_json(io::json(5)), RealQuad(5));
}

TEST(Json, SystemAndCertificateRoundTrip) {
  for (const char* n : {"golden-square", "knuth", "eisenstein"}) {
    Preset p = make_preset(n);
    NumerationSystem s = io::system_from_json(io::to_json(p.sys));
    EXPECT_EQ(s.base(), p.sys.base()) << n;
    EXPECT_EQ(s.symbols(), p.sys.symbols()) << n;
    OLCertificate c = io::certificate_from_json(io::to_json(p.cert));
    EXPECT_EQ(c.epsilon, p.cert.epsilon) << n;
    EXPECT_EQ(c.vertices.size(), p.cert.vertices.size()) << n;
    EXPECT_TRUE(verify_certificate(s, c).pass) << n;
  }
}

TEST(Json, Errors) {
  EXPECT_THROW(io::real_from_json(io::json::parse(R"({"a": 1, "q": 0})")), ParseError);
  EXPECT_THROW(io::real_from_json(io::json::parse(R"({"a": 1, "b": 1, "d": 4})")), ParseError);
  EXPECT_THROW(io::system_from_json(io::json::parse(R"({"base": 2})")), ParseError);
  EXPECT_THROW(io::certificate_from_json(io::json::parse(R"({"vertices": [], "epsilon": 1, "variant": "x"})")),
               ParseError);
}

TEST(Json, DataFiles) {
  NumerationSystem s = io::system_from_json(io::read_json_file(data("base2.json")));
  EXPECT_EQ(s.base(), ComplexQuad(2));
  OLCertificate c = io::certificate_from_json(io::read_json_file(data("base2_region.json")));
  EXPECT_TRUE(verify_certificate(s, c).pass);
  NumerationSystem e = io::system_from_json(io::read_json_file(data("eisenstein_system.json")));
  EXPECT_EQ(e.base(), presets::eisenstein_system().base());
}

TEST(ValueParser, Expressions) {
  NumerationSystem g = presets::golden_square_system();
  EXPECT_EQ(cli_detail::parse_value(g, "1/beta"), g.power(-1));
  EXPECT_EQ(cli_detail::parse_value(g, "(3 - sqrt(5))/2"), g.power(-1));
  EXPECT_EQ(cli_detail::parse_value(g, "b^-2 + 1"), g.power(-2) + ComplexQuad(1));
  NumerationSystem e = presets::eisenstein_system();
  EXPECT_EQ(cli_detail::parse_value(e, "-1/2+sqrt(3)/2*i"), presets::omega());
  EXPECT_EQ(cli_detail::parse_value(e, "w"), presets::omega());
  EXPECT_EQ(cli_detail::parse_value(e, "sqrt(12)"), ComplexQuad(RealQuad(Integer(0), Integer(2), Integer(1), 3)));
  EXPECT_THROW(cli_detail::parse_value(g, "1/"), ParseError);
  EXPECT_THROW(cli_detail::parse_value(g, "foo"), ParseError);
  EXPECT_THROW(cli_detail::parse_value(g, "sqrt(3) + sqrt(5)"), ParseError);
}

TEST(Cli, ParamsRows) {
  CliRun r = run({"params", "--preset", "golden-square", "--mode", "div"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("golden-square div δ=6 L=9"), std::string::npos) << r.out;
  CliRun k = run({"params", "--preset", "knuth", "--mode", "mult"});
  EXPECT_NE(k.out.find("knuth mult δ=9 L=7"), std::string::npos) << k.out;
  CliRun g = run({"params", "--preset", "golden-square", "--mode", "div", "--generic"});
  EXPECT_NE(g.out.find("δ=7"), std::string::npos) << g.out;
}

TEST(Cli, MulOutputHasRequestedDigits) {
  CliRun r = run({"mul", "--preset", "golden-square", "--digits", "12", "0 . 1 1", "0 . 1 -1"});
  ASSERT_EQ(r.code, 0) << r.err;
  // "0 . d1 … d12"
  EXPECT_EQ(count_tokens(r.out), 14u) << r.out;
}

TEST(Cli, MulFromStdinAndStats) {
  CliRun r = run({"mul", "--stats", "--digits", "8", "-", "-"}, "0 . 1\n\n0 . 1\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("delta=4 L=3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("selector_checks="), std::string::npos);
}

TEST(Cli, DivAndTrace) {
  CliRun r = run({"div", "--preset", "knuth", "--digits", "6", "--trace", "-", "0 . 1", "0 . 1 1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("k,digit,W,window,divisor_window", 0), 0u);
}

TEST(Cli, DivNoPreprocessNeedsNormalizedDivisor) {
  CliRun r = run({"div", "--no-preprocess", "0 . 1", "0 . 0 1"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, EncodeAndEval) {
  CliRun e = run({"encode", "--preset", "golden-square", "--value", "1/beta", "--digits", "3"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.out, "0 . 1 0 0\n");
  CliRun v = run({"eval", "--preset", "golden-mean", "0 . 1 -1 -1"});
  ASSERT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(v.out.substr(0, 1), "0");
}

TEST(Cli, PreprocessAndDmin) {
  CliRun r = run({"preprocess", "--preset", "integer:2:-1:1", "--dmin", data("base2_divisor.ds")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0 . 1 0 -1 1 0 0 1  shift=3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("D_min=1/4"), std::string::npos) << r.out;
}

TEST(Cli, CustomSystemWithRules) {
  CliRun r = run({"preprocess", "--system", data("base2.json"), "--rules", data("base2.rules"), "--dmin",
               "0 . 1 -1 -1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("D_min=1/4"), std::string::npos) << r.out;
}

TEST(Cli, CheckOl) {
  EXPECT_EQ(run({"check-ol", "--preset", "knuth"}).code, 0);
  CliRun f = run({"check-ol", "--preset", "knuth", "--epsilon", "1/2"});
  EXPECT_EQ(f.code, 3);
  EXPECT_EQ(f.out.rfind("fail witness=", 0), 0u) << f.out;
  EXPECT_EQ(run({"check-ol", "--system", data("base2.json")}).code, 0);
  // the parallelogram construction needs an integer alphabet
  EXPECT_EQ(run({"check-ol", "--system", data("eisenstein_system.json")}).code, 2);
}

TEST(Cli, Table) {
  CliRun r = run({"table"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("entries=243"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"mul", "0 . x", "0 . 1"}).code, 1);
  EXPECT_EQ(run({"mul", "--preset", "nope", "0 . 1", "0 . 1"}).code, 1);
  EXPECT_EQ(run({"mul", "--system", data("missing.json"), "0 . 1", "0 . 1"}).code, 1);
  EXPECT_EQ(run({"div", "0 . 1", "0 . 0"}).code, 2);
  EXPECT_EQ(run({"params", "--preset", "integer:3:-1:1"}).code, 2);
}

TEST(Cli, PrecisionEnvironment) {
  ::setenv("OLNUM_PRECISION", "16", 1);
  CliRun lo = run({"params", "--preset", "golden-square", "--mode", "div"});
  ::setenv("OLNUM_PRECISION", "4", 1);
  CliRun bad = run({"params", "--preset", "golden-square", "--mode", "div"});
  ::unsetenv("OLNUM_PRECISION");
  CliRun hi = run({"params", "--preset", "golden-square", "--mode", "div"});
  EXPECT_EQ(lo.code, 0);
  EXPECT_NE(bad.code, 0);
  EXPECT_NE(lo.out, hi.out);  // D_min printed at a different resolution
}
