#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gfa::cli {

namespace {

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d = {
      {"grid.first", "6"},
      {"grid.last", "24"},
      {"grid.tail", "8"},
      {"threshold.negligible_exponent", "8"},
      {"threshold.negligible_residual", "0.5"},
      {"threshold.moderate_exponent", "-64"},
      {"threshold.moderate_residual", "1"},
      {"analyticity.max_order", "30"},
      {"analyticity.points", "256"},
      {"analyticity.slack", "0.5"},
      {"analyticity.not_analytic_slope", "-0.5"},
      {"analyticity.form", "factorial"},
      {"extension.rho", "0.5"},
      {"extension.bound", "8"},
      {"extension.points", "128"},
      {"microlocal.n_max", "12"},
      {"microlocal.radius", "0.25"},
      {"microlocal.resolution", "4096"},
      {"microlocal.resolution_2d", "512"},
      {"microlocal.n_max_2d", "8"},
      {"microlocal.slack", "1"},
      {"microlocal.sectors", "64"},
      {"microlocal.half_angle", "0.09817477042468103"},
      {"microlocal.grid.first", "4"},
      {"microlocal.grid.last", "9"},
      {"microlocal.grid.tail", "6"},
      {"microlocal.grid_2d.first", "4"},
      {"microlocal.grid_2d.last", "7"},
      {"microlocal.grid_2d.tail", "4"},
      {"domain.lo", "-4"},
      {"domain.hi", "4"},
      {"taylor.bound", "8"},
      {"sublinear.k_max", "64"},
  };
  return d;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, const std::string& v) {
  double out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw Error("config: " + key + " expects a number, got '" + v + "'");
  return out;
}

}  // namespace

Config::Config() : values_(defaults()) {}

Config Config::parse(std::string_view text) {
  Config c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      c.set(t);
    } catch (const Error& e) {
      throw Error("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void Config::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw Error("expected key = value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::set(const std::string& key, const std::string& value) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error("unknown config key '" + key + "'");
  if (key == "analyticity.form") {
    if (value != "factorial" && value != "power") throw Error("analyticity.form is factorial or power");
  } else {
    to_number(key, value);
  }
  it->second = value;
}

double Config::number(const std::string& key) const { return to_number(key, text(key)); }

int Config::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v)) throw Error("config: " + key + " expects an integer");
  return int(v);
}

const std::string& Config::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error("unknown config key '" + key + "'");
  return it->second;
}

std::string Config::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

EpsilonGrid Config::grid(const std::string& prefix) const {
  return EpsilonGrid::dyadic(integer(prefix + ".first"), integer(prefix + ".last"),
                             std::size_t(integer(prefix + ".tail")));
}

Thresholds Config::thresholds() const {
  Thresholds t;
  t.negligible_exponent = number("threshold.negligible_exponent");
  t.negligible_residual = number("threshold.negligible_residual");
  t.moderate_exponent = number("threshold.moderate_exponent");
  t.moderate_residual = number("threshold.moderate_residual");
  return t;
}

AnalyticityOptions Config::analyticity() const {
  AnalyticityOptions o;
  o.max_order = integer("analyticity.max_order");
  o.points_per_axis = integer("analyticity.points");
  o.slack = number("analyticity.slack");
  o.not_analytic_slope = number("analyticity.not_analytic_slope");
  o.form = text("analyticity.form") == "power" ? BoundForm::Power : BoundForm::Factorial;
  return o;
}

MicrolocalOptions Config::microlocal() const {
  MicrolocalOptions o;
  o.n_max = integer("microlocal.n_max");
  o.radius = number("microlocal.radius");
  o.resolution = integer("microlocal.resolution");
  o.resolution_2d = integer("microlocal.resolution_2d");
  o.n_max_2d = integer("microlocal.n_max_2d");
  o.slack = number("microlocal.slack");
  o.sectors = integer("microlocal.sectors");
  o.half_angle = number("microlocal.half_angle");
  return o;
}

Box Config::domain() const { return Box::interval(number("domain.lo"), number("domain.hi")); }

Box Config::domain_2d() const {
  const double lo = number("domain.lo"), hi = number("domain.hi");
  return Box::rect(lo, hi, lo, hi);
}

}  // namespace gfa::cli
