#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "report.hpp"

#include "gfa/analyticity.hpp"
#include "gfa/distribution.hpp"
#include "gfa/embedding.hpp"
#include "gfa/expression.hpp"
#include "gfa/microlocal.hpp"

namespace gfa::cli {

namespace {

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

// emb:<dist> nets are tested through their truncated representative when a
// spectral method needs compact support.
FunctionNet spectral_net(const std::string& text, const Config& cfg, std::string& representative) {
  if (starts_with(text, "emb:")) {
    representative = "truncated";
    return embed_truncated(DistributionSpec::parse(text.substr(4)), cfg.domain());
  }
  representative = starts_with(text, "embt:") ? "truncated" : "given";
  return parse_net(text, cfg);
}

class Writer {
public:
  Writer(std::string dir, bool quiet, std::ostream& out) : dir_(std::move(dir)), quiet_(quiet), out_(out) {}

  void file(const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << content;
    if (!f) throw IoError("write failed for " + path.string());
  }
  void main(const std::string& name, const Json& j) {
    const auto text = dump(j);
    file(name, text);
    if (!quiet_) out_ << text;
  }

private:
  std::string dir_;
  bool quiet_;
  std::ostream& out_;
};

Json config_json(const Config& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.values()) j[k] = v;
  return j;
}

ScalarNet scalar_net(const std::string& text) {
  const auto e = Expression::parse(text);
  if (e.uses_x() || e.uses_y()) throw UsageError("scalar nets depend on eps only");
  return ScalarNet{[e](double eps) { return std::complex<double>(e.eval(0.0, 0.0, eps), 0.0); }, text, {}};
}

}  // namespace

std::vector<double> parse_list(const std::string& text);

namespace {

std::vector<std::array<double, 2>> parse_points_2d(const std::string& text) {
  std::vector<std::array<double, 2>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto c = item.find(':');
    if (c == std::string::npos) throw UsageError("2D probe points are written x:y, got '" + item + "'");
    const auto xy = parse_list(item.substr(0, c) + "," + item.substr(c + 1));
    if (xy.size() != 2) throw UsageError("2D probe points are written x:y, got '" + item + "'");
    out.push_back({xy[0], xy[1]});
  }
  if (out.empty()) throw UsageError("no probe points");
  return out;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

FunctionNet parse_net(const std::string& text, const Config& cfg) {
  if (starts_with(text, "emb:")) return embed(DistributionSpec::parse(text.substr(4)), build_mollifier(), cfg.domain());
  if (starts_with(text, "embt:")) return embed_truncated(DistributionSpec::parse(text.substr(5)), cfg.domain());
  const auto e = Expression::parse(text);
  return FunctionNet::symbolic(e, e.uses_y() ? cfg.domain_2d() : cfg.domain());
}

const std::vector<Fixture>& fixtures() {
  static const std::vector<Fixture> f = {
      {"constant", "1", "constant net, analytic everywhere"},
      {"gauss", "emb:smooth(exp(-x^2))", "embedded Gaussian, analytic everywhere"},
      {"sin", "emb:smooth(sin(x))", "embedded sine, analytic everywhere"},
      {"delta", "emb:delta", "embedded Dirac delta, singular at 0"},
      {"ddelta", "emb:ddelta 1", "embedded first derivative of delta, singular at 0"},
      {"heaviside", "emb:heaviside", "embedded Heaviside step, singular at 0"},
      {"absx", "emb:absx", "embedded |x|, singular at 0"},
      {"example1", "x/cosh(x/eps)", "tends to 0 uniformly, not analytic at 0"},
      {"example2", "abs(log(eps))*psi(x*abs(log(eps)))", "analytic, associated to delta but not strongly"},
  };
  return f;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real analytic generalized functions: valuations, analyticity and wave fronts", "gfa"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  bool quiet = false, timestamp = false;
  app.add_option("--config", config_path, "key = value settings file");
  app.add_option("--set", overrides, "override one setting, key=value")->take_all();
  app.add_option("--out", out_dir, "output directory (default $GFA_OUTPUT_DIR or .)");
  app.add_flag("--quiet", quiet, "do not echo the JSON report");
  app.add_flag("--timestamp", timestamp, "stamp SVG output with the generation time");

  std::string expr, dist_text, at_list, eps_list, interval_text, probes_text, directions_text = "-1,1", points2d,
                                                                               values_text;
  double at = 0, radius = 0.5, eta = 1, offset = 3;
  int order = 30, freeze_sigma = -1;
  bool truncated = false, certificate = false, csv = false, plots = false, run_taylor = false;

  auto* valuation = app.add_subcommand("valuation", "valuation of a scalar net in eps");
  valuation->add_option("net", expr, "expression in eps")->required();
  auto* classify_cmd = app.add_subcommand("classify", "negligible / moderate classification of a scalar net");
  classify_cmd->add_option("net", expr, "expression in eps")->required();

  auto* embed_cmd = app.add_subcommand("embed", "embed a catalog distribution and sample it");
  embed_cmd->add_option("distribution", dist_text, "delta, ddelta k, heaviside, absx, smooth:<expr>, sums")->required();
  embed_cmd->add_option("--at", at_list, "sample points")->default_val("0");
  embed_cmd->add_option("--eps", eps_list, "eps values")->default_val("0.0625,0.015625,0.00390625");
  embed_cmd->add_flag("--truncated", truncated, "use the truncated kernel psi_eps");
  embed_cmd->add_flag("--certificate", certificate, "include the mollifier (and truncation) certificates");

  auto* analyze = app.add_subcommand("analyze", "real-analyticity test on a ball");
  analyze->add_option("net", expr, "net expression or emb:<dist>")->required();
  analyze->add_option("--at", at, "ball center")->default_val(0.0);
  analyze->add_option("--radius", radius, "ball radius")->default_val(0.5);
  analyze->add_option("--probes", probes_text, "also report the singular support on these points");

  auto* extend = app.add_subcommand("extend", "truncated Taylor extension and its d-bar residual");
  extend->add_option("net", expr, "net expression or emb:<dist>")->required();
  extend->add_option("--interval", interval_text, "a,b")->default_val("-1,1");
  extend->add_option("--eta", eta, "analyticity constant")->default_val(1.0);
  extend->add_option("--freeze-sigma", freeze_sigma, "use a fixed number of Taylor terms");

  auto* wavefront = app.add_subcommand("wavefront", "analytic wave front estimate");
  wavefront->add_option("net", expr, "net expression or emb:<dist>")->required();
  wavefront->add_option("--probes", probes_text, "1D probe points")->default_val("-1,0,1");
  wavefront->add_option("--directions", directions_text, "1D directions (+1, -1)")->default_val("-1,1");
  wavefront->add_option("--points2d", points2d, "2D probe points x:y,x:y");
  wavefront->add_flag("--csv", csv, "also write per-(n, eps) envelopes");
  wavefront->add_flag("--plots", plots, "also write a decay plot per probe");

  auto* associate = app.add_subcommand("associate", "association and strong association to a distribution");
  associate->add_option("net", expr, "net expression or emb:<dist>")->required();
  associate->add_option("distribution", dist_text, "catalog distribution")->required();

  auto* sublinear = app.add_subcommand("sublinear", "sub-linearity of derivative valuations");
  sublinear->add_option("net", expr, "net expression or emb:<dist>");
  sublinear->add_option("--values", values_text, "valuation sequence p_0,p_1,...");
  sublinear->add_option("--at", at, "classical center")->default_val(0.0);
  sublinear->add_option("--order", order, "highest derivative order")->default_val(30)->check(CLI::Range(4, 200));
  sublinear->add_flag("--taylor", run_taylor, "also test sharp convergence of the Taylor series");
  sublinear->add_option("--offset", offset, "Taylor increment eps^offset")->default_val(3.0);

  auto* examples = app.add_subcommand("examples", "list the fixture catalog");

  std::vector<std::string> argv_store{"gfa"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  Config cfg;
  try {
    if (!config_path.empty()) cfg = Config::load(config_path);
    for (const auto& o : overrides) cfg.set(std::string_view(o));
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
  if (out_dir.empty()) {
    const char* env = std::getenv("GFA_OUTPUT_DIR");
    out_dir = env && *env ? env : ".";
  }
  Writer w(out_dir, quiet, out);

  try {
    if (valuation->parsed()) {
      const auto net = scalar_net(expr);
      const auto est = estimate_valuation(net, cfg.grid("grid"), cfg.thresholds());
      w.main("valuation.json",
             report("valuation", Json{{"command", "valuation"}, {"net", expr}, {"valuation", to_json(est)},
                                      {"config", config_json(cfg)}}));
    } else if (classify_cmd->parsed()) {
      const auto net = scalar_net(expr);
      const auto th = cfg.thresholds();
      const auto est = estimate_valuation(net, cfg.grid("grid"), th);
      w.main("classify.json", report("classify", Json{{"command", "classify"},
                                                      {"net", expr},
                                                      {"classification", to_string(classify(est, th))},
                                                      {"valuation", to_json(est)},
                                                      {"config", config_json(cfg)}}));
    } else if (embed_cmd->parsed()) {
      const auto dist = DistributionSpec::parse(dist_text);
      const auto moll = build_mollifier();
      const auto net = truncated ? embed_truncated(dist, cfg.domain()) : embed(dist, moll, cfg.domain());
      const auto xs = parse_list(at_list), es = parse_list(eps_list);
      Json values = Json::array();
      for (double e : es) {
        Json row = Json::array();
        for (double x : xs) row.push_back(number(net.value(x, e)));
        values.push_back(row);
      }
      Json body{{"command", "embed"},   {"distribution", dist_text}, {"truncated", truncated},
                {"points", xs},         {"eps", es},                 {"values", values}};
      if (certificate) {
        body["mollifier"] = to_json(moll);
        if (truncated) {
          const auto tm = truncate_mollifier(moll, cfg.grid("grid"), cfg.number("threshold.negligible_exponent"));
          Json certs = Json::array();
          for (const auto& c : tm.certificate) certs.push_back(to_json(c));
          body["truncation"] = certs;
        }
      }
      body["config"] = config_json(cfg);
      w.main("embed.json", report("embed", body));
    } else if (analyze->parsed()) {
      const auto net = parse_net(expr, cfg);
      const auto grid = cfg.grid("grid");
      const auto opt = cfg.analyticity();
      const auto r = test_real_analytic(net, at, radius, grid, opt);
      Json body{{"command", "analyze"}, {"net", expr}, {"verdict", to_string(r.verdict)}, {"report", to_json(r)}};
      if (!probes_text.empty())
        body["singular_support"] = to_json(singular_support(net, parse_list(probes_text), radius, grid, opt));
      body["config"] = config_json(cfg);
      w.main("analyze.json", report("analyze", body));
    } else if (extend->parsed()) {
      const auto net = parse_net(expr, cfg);
      const auto iv = parse_list(interval_text);
      if (iv.size() != 2 || !(iv[0] < iv[1])) throw UsageError("--interval expects a,b with a < b");
      const auto grid = cfg.grid("grid");
      auto ext = taylor_extension(net, Box::interval(iv[0], iv[1]), eta, grid, cfg.analyticity());
      if (freeze_sigma >= 0) ext.sigma = [freeze_sigma](double) { return freeze_sigma; };
      const auto cert = dbar_residual(ext, grid, cfg.number("extension.rho"), cfg.number("extension.bound"),
                                      cfg.integer("extension.points"));
      // F_eps(x, 0) = f_eps(x) at a few points of the smallest eps
      const double e = cert.eps.empty() ? grid.smallest() : cert.eps.back();
      double slice = 0;
      for (int k = 0; k <= 8; ++k) {
        const double x = iv[0] + (iv[1] - iv[0]) * k / 8.0;
        slice = std::max(slice, std::abs(ext(x, 0.0, e) - std::complex<double>(net.value(x, e), 0.0)));
      }
      w.main("extend.json", report("extend", Json{{"command", "extend"},
                                                  {"net", expr},
                                                  {"interval", iv},
                                                  {"eta", eta},
                                                  {"sigma", freeze_sigma >= 0 ? Json(freeze_sigma) : Json("default")},
                                                  {"real_slice_error", number(slice)},
                                                  {"residual", to_json(cert)},
                                                  {"config", config_json(cfg)}}));
    } else if (wavefront->parsed()) {
      std::string representative;
      const auto opt = cfg.microlocal();
      WaveFrontReport r;
      std::vector<double> eps;
      if (!points2d.empty()) {
        const auto pts = parse_points_2d(points2d);
        if (starts_with(expr, "emb")) throw UsageError("2D wave fronts take expressions in x, y");
        representative = "given";
        const auto ex = Expression::parse(expr);
        const auto net = FunctionNet::symbolic(ex, cfg.domain_2d());
        const auto grid = cfg.grid("microlocal.grid_2d");
        eps = grid.values();
        r = wavefront_estimate_2d(net, pts, grid, opt);
      } else {
        const auto net = spectral_net(expr, cfg, representative);
        std::vector<int> dirs;
        for (double d : parse_list(directions_text)) {
          if (d != 1 && d != -1) throw UsageError("1D directions are +1 and -1");
          dirs.push_back(int(d));
        }
        const auto grid = cfg.grid("microlocal.grid");
        eps = grid.values();
        r = wavefront_estimate(net, parse_list(probes_text), dirs, grid, opt);
      }
      std::string stamp;
      if (timestamp) {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        stamp = std::to_string(now);
      }
      w.file("wavefront.svg", wavefront_svg(r, "wave front of " + expr, stamp));
      if (csv) w.file("wavefront.csv", envelope_csv(r, eps));
      if (plots)
        for (std::size_t k = 0; k < r.probes.size(); ++k)
          w.file("decay_" + std::to_string(k) + ".svg",
                 decay_svg(r.probes[k], eps, expr + " at " + exponent_string(r.probes[k].point[0]) + ", " +
                                                 r.probes[k].cone.label()));
      w.main("wavefront.json", report("wavefront", Json{{"command", "wavefront"},
                                                        {"net", expr},
                                                        {"representative", representative},
                                                        {"eps", eps},
                                                        {"wavefront", to_json(r)},
                                                        {"config", config_json(cfg)}}));
    } else if (associate->parsed()) {
      const auto net = parse_net(expr, cfg);
      const auto dist = DistributionSpec::parse(dist_text);
      const auto a = association_test(net, dist, default_test_functions(), cfg.grid("grid"));
      w.main("associate.json", report("associate", Json{{"command", "associate"},
                                                        {"net", expr},
                                                        {"distribution", dist_text},
                                                        {"association", to_json(a)},
                                                        {"config", config_json(cfg)}}));
    } else if (sublinear->parsed()) {
      if (expr.empty() == values_text.empty()) throw UsageError("give either a net or --values");
      Json body{{"command", "sublinear"}};
      std::vector<double> p;
      if (!values_text.empty()) {
        p = parse_list(values_text);
        if (p.size() < 5) throw UsageError("--values needs at least five entries");
        body["values"] = p;
      } else {
        const auto net = parse_net(expr, cfg);
        const auto grid = cfg.grid("grid");
        const auto vals = derivative_valuations_at(net, GeneralizedPoint::classical(at), order, grid);
        Json vj = Json::array();
        for (const auto& v : vals) {
          p.push_back(v.exponent);
          vj.push_back(to_json(v));
        }
        body["net"] = expr;
        body["at"] = at;
        body["valuations"] = vj;
        if (run_taylor)
          body["taylor"] = to_json(sharp_taylor_convergence(net, GeneralizedPoint::classical(at), offset, order, grid,
                                                            cfg.number("taylor.bound")));
      }
      body["result"] = to_json(sublinearity_test(p, cfg.integer("sublinear.k_max")));
      body["config"] = config_json(cfg);
      w.main("sublinear.json", report("sublinear", body));
    } else if (examples->parsed()) {
      Json list = Json::array();
      for (const auto& f : fixtures())
        list.push_back(Json{{"name", f.name}, {"net", f.net}, {"description", f.description}});
      w.main("examples.json", report("examples", Json{{"command", "examples"}, {"fixtures", list}}));
    }
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << "\n" << e.diagnostic() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    err << "analysis error: " << e.what() << "\n";
    return kAnalysisError;
  }
  return kOk;
}

}  // namespace gfa::cli
