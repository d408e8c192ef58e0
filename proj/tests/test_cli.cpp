#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace gfa;
using namespace gfa::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gfa_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("exponent strings") {
  CHECK(exponent_string(2.0) == "2.0");
  CHECK(exponent_string(-1.25) == "-1.25");
  CHECK(exponent_string(0.1234567) == "0.123457");
  CHECK(exponent_string(-0.0) == "0.0");
  CHECK(exponent_string(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(exponent_string(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(exponent_string(std::nan("")) == "nan");
  CHECK(number(1.5).is_number());
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("config defaults, overrides and unknown keys") {
  Config c;
  CHECK(c.integer("grid.first") == 6);
  CHECK(c.integer("grid.last") == 24);
  CHECK(c.number("domain.lo") == -4.0);
  c.set("grid.last=20");
  CHECK(c.grid("grid").values().front() == doctest::Approx(std::ldexp(1.0, -6)));
  const auto p = Config::parse("# comment\nmicrolocal.n_max = 10\n\nextension.rho=0.5\n");
  CHECK(p.microlocal().n_max == 10);
  CHECK(p.number("extension.rho") == 0.5);
  CHECK_THROWS(c.set("grid.lats=3"));
  CHECK_THROWS(c.set("grid.last=abc"));
  CHECK_THROWS(c.set("no_equals_sign"));
  CHECK_THROWS_AS(Config::load("/nonexistent/gfa.cfg"), IoError);
  // dump/parse round trip
  CHECK(Config::parse(c.dump()).values() == c.values());
}

TEST_CASE("valuation of eps^2 reports exponent 2.0") {
  const auto dir = scratch("valuation");
  const auto r = call({"--out", dir.string(), "valuation", "eps^2"});
  REQUIRE(r.code == kOk);
  const auto j = r.json();
  CHECK(j["schema"] == "gfa.valuation/1");
  CHECK(j["valuation"]["exponent"] == "2.0");
  CHECK(fs::exists(dir / "valuation.json"));
  CHECK(slurp(dir / "valuation.json") == r.out);
}

TEST_CASE("analyze reports a non-analytic net") {
  const auto dir = scratch("analyze");
  const auto r = call({"--out", dir.string(), "analyze", "x/cosh(x/eps)", "--at", "0", "--radius", "0.5"});
  REQUIRE(r.code == kOk);
  CHECK(r.json()["verdict"] == "not-analytic");
}

TEST_CASE("wave front of the embedded Heaviside function sits over 0") {
  const auto dir = scratch("wavefront");
  const auto r = call({"--out", dir.string(), "wavefront", "emb:heaviside", "--probes", "-1,0,1"});
  REQUIRE(r.code == kOk);
  const auto wf = r.json()["wavefront"];
  CHECK(wf["singular_support"] == Json::array({0.0}));
  CHECK(wf["singular_pairs"].size() == 2);
  for (const auto& pair : wf["singular_pairs"]) CHECK(pair[0] == 0.0);
  CHECK(fs::exists(dir / "wavefront.svg"));
}

TEST_CASE("parse errors exit with code 2 and point at the offset") {
  const auto r = call({"--quiet", "valuation", "x++"});
  CHECK(r.code == kUsageError);
  CHECK(r.err.find("offset 2") != std::string::npos);
  CHECK(r.err.find("  ^") != std::string::npos);
  CHECK(call({"frobnicate"}).code == kUsageError);
  CHECK(call({"--set", "bogus.key=1", "valuation", "eps"}).code == kUsageError);
  CHECK(call({"sublinear", "--values=1,2"}).code == kUsageError);
}

TEST_CASE("analysis and io errors") {
  CHECK(call({"--quiet", "--out", scratch("err").string(), "analyze", "log(x)", "--at", "0"}).code == kAnalysisError);
  CHECK(call({"--quiet", "--out", "/proc/gfa-nope", "valuation", "eps"}).code == kIoError);
  CHECK(call({"--config", "/nonexistent/gfa.cfg", "valuation", "eps"}).code == kIoError);
}

TEST_CASE("reports are deterministic") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& verb : std::vector<std::vector<std::string>>{
           {"classify", "exp(-1/eps)"}, {"analyze", "1/(x^2+eps)", "--at", "0.5"}, {"examples"}}) {
    auto args_a = std::vector<std::string>{"--quiet", "--out", a.string()};
    auto args_b = std::vector<std::string>{"--quiet", "--out", b.string()};
    args_a.insert(args_a.end(), verb.begin(), verb.end());
    args_b.insert(args_b.end(), verb.begin(), verb.end());
    REQUIRE(call(args_a).code == kOk);
    REQUIRE(call(args_b).code == kOk);
    const auto file = verb.front() + ".json";
    CHECK(slurp(a / file) == slurp(b / file));
  }
}

TEST_CASE("parse helpers") {
  CHECK(parse_list("-1, 0,2.5") == std::vector<double>{-1, 0, 2.5});
  CHECK_THROWS_AS(parse_list("1,,2"), UsageError);
  Config c;
  const auto net = parse_net("x*eps", c);
  CHECK(net.value(0.5, 0.25) == doctest::Approx(0.125));
  CHECK_NOTHROW(parse_net("emb:delta", c));
  CHECK_NOTHROW(parse_net("embt:heaviside", c));
  CHECK(!fixtures().empty());
  for (const auto& f : fixtures()) CHECK_NOTHROW(parse_net(f.net, c));
}
