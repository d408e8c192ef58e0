// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// A criterion passes only when its checks hold and it finishes inside its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gfa/analyticity.hpp"
#include "gfa/asymptotics.hpp"
#include "gfa/embedding.hpp"
#include "gfa/microlocal.hpp"

using namespace gfa;

namespace {

const Box kDomain = Box::interval(-3, 3);
const std::vector<double> kProbes{-1.0, 0.0, 1.0};
const char* kExample2 = "abs(log(eps))*psi(x*abs(log(eps)))";

using Pairs = std::set<std::pair<double, int>>;

Pairs as_set(const std::vector<std::pair<double, int>>& v) { return {v.begin(), v.end()}; }

std::string show(const Pairs& p) {
  std::ostringstream s;
  s << "{";
  for (const auto& [x, d] : p) s << "(" << x << "," << (d > 0 ? "+" : "-") << ")";
  return s.str() + "}";
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

// Wave-front reports shared by criteria 6 and 7.
std::map<std::string, WaveFrontReport> wavefronts;

const WaveFrontReport& wavefront_of(const std::string& key, const FunctionNet& net) {
  auto it = wavefronts.find(key);
  if (it == wavefronts.end())
    it = wavefronts.emplace(key, wavefront_estimate(net, kProbes, {-1, 1}, microlocal_grid())).first;
  return it->second;
}

Outcome valuation_recovery() {
  Outcome o;
  const auto g = EpsilonGrid::standard();
  for (double a : {0.0, 1.0, 2.5, 5.0})
    for (double c : {1e-3, 1.0, 1e3, -1e-3, -1.0, -1e3}) {
      const double got = estimate_valuation(ScalarNet::power(c, a), g).exponent;
      o.require(std::abs(got - a) <= 0.05, "c=" + fmt(c) + " a=" + fmt(a) + " -> " + fmt(got));
    }
  if (o.ok) o.detail = "24 power laws within 0.05";
  return o;
}

Outcome ultrametric() {
  Outcome o;
  const auto g = EpsilonGrid::standard();
  std::mt19937_64 rng(20240611);
  // unit-scale coefficients: a spread of 10^k shifts a fitted exponent by up to
  // k ln 10 / ln(1/eps_min) before the asymptotic regime is reached
  std::uniform_real_distribution<double> expo(0.0, 6.0), mag(-0.3, 0.3);
  std::bernoulli_distribution sign(0.5);
  auto draw = [&] { return ScalarNet::power((sign(rng) ? 1 : -1) * std::pow(10.0, mag(rng)), expo(rng)); };
  double worst = kInfinity;
  for (int t = 0; t < 200; ++t) {
    const auto r = draw(), s = draw(), u = draw();
    const double lhs = estimate_valuation(r - u, g).exponent;
    const double rhs = std::min(estimate_valuation(r - s, g).exponent, estimate_valuation(s - u, g).exponent);
    if (lhs != kInfinity) worst = std::min(worst, lhs - rhs);
    o.require(lhs >= rhs - 0.05, "triple " + std::to_string(t) + ": " + fmt(lhs) + " < " + fmt(rhs));
  }
  if (o.ok) o.detail = "200 triples, worst v(r-u) - min = " + fmt(worst);
  return o;
}

Outcome mollifier_certificates() {
  Outcome o;
  const auto m = build_mollifier();
  o.require(std::abs(m.mass - 1) <= 1e-8, "mass " + fmt(m.mass, 12));
  double worst_moment = 0;
  for (int k = 1; k <= 6; ++k) {
    o.require(k < static_cast<int>(m.moments.size()), "moment " + std::to_string(k) + " missing");
    if (k < static_cast<int>(m.moments.size())) {
      worst_moment = std::max(worst_moment, std::abs(m.moments[k]));
      o.require(std::abs(m.moments[k]) <= 1e-8, "moment " + std::to_string(k) + " = " + fmt(m.moments[k]));
    }
  }
  const auto tm = truncate_mollifier(m, EpsilonGrid::standard());
  double worst = kInfinity;
  std::set<std::pair<int, int>> seen;
  for (const auto& c : tm.certificate) {
    seen.insert({c.k, c.alpha});
    worst = std::min(worst, c.estimate.exponent);
    o.require(c.estimate.exponent >= 8, "(k,alpha)=(" + std::to_string(c.k) + "," + std::to_string(c.alpha) +
                                            ") exponent " + fmt(c.estimate.exponent));
  }
  o.require(seen.size() == 9, "expected 9 (k, alpha) pairs");
  if (o.ok)
    o.detail = "mass-1 " + fmt(m.mass - 1) + ", max moment " + fmt(worst_moment) + ", min truncation exponent " +
               fmt(worst);
  return o;
}

Outcome analyticity_fixtures() {
  Outcome o;
  const auto g = EpsilonGrid::standard();
  const auto c = test_real_analytic(FunctionNet::symbolic("1", kDomain), 0, 0.5, g);
  o.require(c.verdict == Verdict::Analytic, "constant: " + to_string(c.verdict));
  const auto gauss = test_real_analytic(embed("smooth(exp(-x^2))", kDomain), 0, 0.5, g);
  o.require(gauss.verdict == Verdict::Analytic, "gauss: " + to_string(gauss.verdict));
  const auto e1 = test_real_analytic(FunctionNet::symbolic("x/cosh(x/eps)", kDomain), 0, 0.5, g);
  o.require(e1.verdict == Verdict::NotAnalytic, "example 1: " + to_string(e1.verdict));
  o.require(std::abs(e1.d_slope + 1) <= 0.1, "example 1 slope " + fmt(e1.d_slope));
  const auto e2 = test_real_analytic(FunctionNet::symbolic(kExample2, kDomain), 0, 0.5, g);
  o.require(e2.verdict == Verdict::Analytic, "example 2: " + to_string(e2.verdict));
  if (o.ok) o.detail = "example 1 d_n slope " + fmt(e1.d_slope);
  return o;
}

Outcome holomorphic_extension() {
  Outcome o;
  const auto g = EpsilonGrid::dyadic(6, 16, 6);
  const auto net = embed("smooth(sin(x))", kDomain);
  const auto ext = taylor_extension(net, Box::interval(-1, 1), 1.0, g);
  double slice = 0;
  for (double e : g.values())
    for (int i = 0; i <= 200; ++i) {
      const double x = -1 + i * 0.01;
      slice = std::max(slice, std::abs(ext(x, 0.0, e) - std::complex<double>(net.value(x, e))));
    }
  o.require(slice == 0.0, "real slice differs by " + fmt(slice));
  const auto cert = dbar_residual(ext, g);
  o.require(cert.estimate.exponent >= 8, "residual exponent " + fmt(cert.estimate.exponent));
  o.require(cert.warning.empty(), "grid shrunk: " + cert.warning);
  auto frozen = ext;
  frozen.sigma = [](double) { return 3; };
  const auto control = dbar_residual(frozen, g);
  o.require(control.estimate.exponent < 4, "frozen sigma exponent " + fmt(control.estimate.exponent));
  if (o.ok)
    o.detail = "residual exponent " + fmt(cert.estimate.exponent) + ", sigma=3 control " +
               fmt(control.estimate.exponent);
  return o;
}

Outcome wavefront_agreement() {
  Outcome o;
  std::string found;
  for (const char* text : {"delta", "ddelta 1", "heaviside", "smooth(sin(x))"}) {
    const auto dist = DistributionSpec::parse(text);
    const auto est = as_set(wavefront_of(text, embed_truncated(dist, kDomain)).singular_pairs());
    const auto known = as_set(known_wavefront(dist, kProbes));
    o.require(est == known, std::string(text) + ": estimated " + show(est) + " vs classical " + show(known));
    found += std::string(found.empty() ? "" : ", ") + text + " " + show(est);
  }
  const auto e2 = as_set(wavefront_of("example2", FunctionNet::symbolic(kExample2, kDomain)).singular_pairs());
  o.require(e2.empty(), "example 2: " + show(e2));
  if (o.ok) o.detail = found + ", example2 {}";
  return o;
}

Outcome projection() {
  Outcome o;
  const auto agrid = EpsilonGrid::standard();
  const std::vector<std::pair<std::string, std::function<FunctionNet()>>> fixtures = {
      {"constant", [] { return FunctionNet::symbolic("1", kDomain); }},
      {"gauss", [] { return embed_truncated(DistributionSpec::parse("smooth(exp(-x^2))"), kDomain); }},
      {"example1", [] { return FunctionNet::symbolic("x/cosh(x/eps)", kDomain); }},
      {"example2", [] { return FunctionNet::symbolic(kExample2, kDomain); }},
      {"delta", [] { return embed_truncated(DistributionSpec::parse("delta"), kDomain); }},
      {"heaviside", [] { return embed_truncated(DistributionSpec::parse("heaviside"), kDomain); }},
  };
  int compared = 0;
  for (const auto& [name, make] : fixtures) {
    const auto net = make();
    const auto& wf = wavefront_of(name, net);
    const auto ss = singular_support(net, kProbes, 0.25, agrid);
    o.require(projection_check(wf, ss), name + ": projection mismatch");
    compared += static_cast<int>(kProbes.size() - ss.inconclusive.size());
  }
  if (o.ok) o.detail = "6 fixtures, " + std::to_string(compared) + " conclusive probes, 0 mismatches";
  return o;
}

Outcome association() {
  Outcome o;
  const auto g = EpsilonGrid::standard();
  const auto tf = default_test_functions();
  const auto delta = DistributionSpec::parse("delta");
  const auto full = association_test(embed("delta"), delta, tf, g);
  o.require(full.strong, "embed(delta) not strongly associated");
  o.require(full.slope >= 4, "embed(delta) slope " + fmt(full.slope));
  const auto ex2 = association_test(FunctionNet::symbolic(kExample2, Box::interval(-4, 4)), delta, tf, g);
  o.require(ex2.associated, "example 2 not associated");
  o.require(ex2.slope < 0.1, "example 2 slope " + fmt(ex2.slope));
  if (o.ok) o.detail = "slopes " + fmt(full.slope) + " and " + fmt(ex2.slope);
  return o;
}

Outcome sublinearity() {
  Outcome o;
  std::vector<double> lin, quad;
  // a horizon N only excludes k < 2N - 1 for -n^2, so N must exceed 2 * 64
  for (int n = 0; n <= 160; ++n) {
    lin.push_back(-1.0 - n);
    quad.push_back(-1.0 * n * n);
  }
  const auto a = sublinearity_test(lin);
  o.require(a.sublinear && a.k == 2, "p_n = -1-n gave k = " + std::to_string(a.k));
  const auto b = sublinearity_test(quad, 64);
  o.require(!b.sublinear && b.k == -1, "p_n = -n^2 gave k = " + std::to_string(b.k));
  if (o.ok) o.detail = "k = 2 and none up to 64";
  return o;
}

Outcome taylor() {
  Outcome o;
  const auto c = sharp_taylor_convergence(FunctionNet::symbolic(kExample2, kDomain), GeneralizedPoint::classical(0), 3,
                                          6, EpsilonGrid::standard());
  o.require(c.converges, "not convergent");
  double prev = -kInfinity;
  std::string terms;
  for (std::size_t n = 0; n < c.term_valuations.size(); ++n) {
    const double v = c.term_valuations[n];
    terms += (n ? " " : "") + fmt(v);
    if (v == kInfinity) continue;
    o.require(v > prev, "term " + std::to_string(n) + " does not increase");
    prev = v;
  }
  o.require(c.term_valuations.size() >= 7 && c.term_valuations[6] > 8, "term 6 valuation not above 8");
  if (o.ok) o.detail = "term valuations " + terms;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "valuation recovery", 1, valuation_recovery},
      {2, "ultrametric inequality", 5, ultrametric},
      {3, "mollifier certificates", 30, mollifier_certificates},
      {4, "analyticity fixtures", 120, analyticity_fixtures},
      {5, "holomorphic extension", 120, holomorphic_extension},
      {6, "wave-front agreement", 300, wavefront_agreement},
      {7, "projection property", 60, projection},
      {8, "association discriminator", 30, association},
      {9, "sub-linearity decision", 1, sublinearity},
      {10, "sharp Taylor convergence", 60, taylor},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, "over budget (" + fmt(c.budget_s) + " s)");
    failed += !o.ok;
    std::printf("%s criterion %d (%s) [%.2f s]: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
