#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gfa::cli {

std::string exponent_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  if (s == "-0.0") s = "0.0";
  return s;
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  return exponent_string(v);
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

Json to_json(const ValuationEstimate& v) {
  return Json{{"exponent", exponent_string(v.exponent)},
              {"residual", number(v.residual)},
              {"classification", to_string(v.classification)}};
}

Json to_json(const AnalyticityReport& r) {
  Json sups = Json::array();
  for (const auto& row : r.sups) sups.push_back(numbers(row));
  Json vals = Json::array();
  for (const auto& v : r.valuations) vals.push_back(to_json(v));
  return Json{{"point", r.point},
              {"radius", r.radius},
              {"eps", numbers(r.eps)},
              {"sups", sups},
              {"valuations", vals},
              {"d_slope", exponent_string(r.d_slope)},
              {"a", exponent_string(r.a)},
              {"eta", number(r.eta)},
              {"form", r.form == BoundForm::Factorial ? "factorial" : "power"},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const SingularSupport& s) {
  Json reports = Json::array();
  for (const auto& r : s.reports)
    reports.push_back(Json{{"point", r.point}, {"verdict", to_string(r.verdict)}, {"a", exponent_string(r.a)},
                           {"eta", number(r.eta)}, {"d_slope", exponent_string(r.d_slope)}});
  return Json{{"singular", numbers(s.singular)}, {"inconclusive", numbers(s.inconclusive)}, {"probes", reports}};
}

Json to_json(const ResidualCertificate& c) {
  return Json{{"eps", numbers(c.eps)},
              {"log_residual", numbers(c.log_residual)},
              {"estimate", to_json(c.estimate)},
              {"passed", c.passed},
              {"warning", c.warning}};
}

Json to_json(const AssociationResult& a) {
  Json details = Json::array();
  for (const auto& d : a.details)
    details.push_back(Json{{"test_function", d.test_function},
                           {"errors", numbers(d.errors)},
                           {"slope", exponent_string(d.slope)}});
  return Json{{"associated", a.associated}, {"strong", a.strong}, {"slope", exponent_string(a.slope)}, {"details", details}};
}

Json to_json(const SublinearityResult& s) { return Json{{"sublinear", s.sublinear}, {"k", s.k}}; }

Json to_json(const TaylorConvergence& t) {
  Json terms = Json::array(), rems = Json::array();
  for (double v : t.term_valuations) terms.push_back(exponent_string(v));
  for (double v : t.remainder_valuations) rems.push_back(exponent_string(v));
  return Json{{"converges", t.converges}, {"term_valuations", terms}, {"remainder_valuations", rems}};
}

Json to_json(const Mollifier& m) {
  return Json{{"mass", m.mass}, {"moments", numbers(m.moments)}, {"moment_order_checked", m.moment_order_checked},
              {"peak", m.peak}};
}

Json to_json(const NegligibilityCertificate& c) {
  return Json{{"k", c.k}, {"alpha", c.alpha}, {"sups", numbers(c.sups)}, {"estimate", to_json(c.estimate)}};
}

Json to_json(const ProbeResult& p) {
  Json j{{"point", p.cone.dimension == 1 ? Json(p.point[0]) : Json::array({p.point[0], p.point[1]})}};
  if (p.cone.dimension == 1) {
    j["direction"] = p.cone.direction[0] > 0 ? 1 : -1;
  } else {
    j["direction"] = std::atan2(p.cone.direction[1], p.cone.direction[0]);
    j["half_angle"] = p.cone.half_angle;
  }
  j["verdict"] = to_string(p.verdict);
  j["C"] = number(p.fit.C);
  j["a"] = exponent_string(p.fit.a);
  j["worst_margin"] = number(p.fit.worst_margin);
  j["margins"] = numbers(p.fit.margins);
  return j;
}

Json to_json(const WaveFrontReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes) probes.push_back(to_json(p));
  auto points = [&](const std::vector<std::array<double, 2>>& v) {
    Json a = Json::array();
    for (const auto& pt : v) a.push_back(r.dimension == 1 ? Json(pt[0]) : Json::array({pt[0], pt[1]}));
    return a;
  };
  Json pairs = Json::array();
  if (r.dimension == 1)
    for (const auto& [x, s] : r.singular_pairs()) pairs.push_back(Json::array({x, s}));
  else
    for (const auto& p : r.probes)
      if (p.verdict == MicroVerdict::Singular)
        pairs.push_back(Json::array({Json::array({p.point[0], p.point[1]}),
                                     std::atan2(p.cone.direction[1], p.cone.direction[0])}));
  return Json{{"dimension", r.dimension},
              {"singular_pairs", pairs},
              {"singular_support", points(r.singular_support)},
              {"inconclusive", points(r.inconclusive)},
              {"probes", probes}};
}

Json to_json(const ClassicalDecay& c) {
  return Json{{"C", number(c.C)},
              {"worst_margin", number(c.worst_margin)},
              {"margins", numbers(c.margins)},
              {"log_envelope", numbers(c.log_envelope)},
              {"verdict", to_string(c.verdict)}};
}

Json report(const std::string& kind, Json body) {
  Json j{{"schema", "gfa." + kind + "/1"}};
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string wavefront_svg(const WaveFrontReport& r, const std::string& title, const std::string& timestamp) {
  std::vector<std::array<double, 2>> points;
  std::vector<std::string> rows;
  for (const auto& p : r.probes) {
    if (std::find(points.begin(), points.end(), p.point) == points.end()) points.push_back(p.point);
    const auto label = p.cone.label();
    if (std::find(rows.begin(), rows.end(), label) == rows.end()) rows.push_back(label);
  }
  const int cw = 56, ch = 18, left = 110, top = 40;
  const int width = left + cw * int(points.size()) + 20;
  const int height = top + ch * int(rows.size()) + 60;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"monospace\" font-size=\"11\">\n";
  if (!timestamp.empty()) s << "<!-- generated " << xml_escape(timestamp) << " -->\n";
  s << "<text x=\"10\" y=\"20\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  for (std::size_t c = 0; c < points.size(); ++c) {
    const std::string lab = r.dimension == 1 ? fmt(points[c][0]) : fmt(points[c][0]) + "," + fmt(points[c][1]);
    s << "<text x=\"" << left + cw * int(c) + 4 << "\" y=\"" << top - 6 << "\">" << lab << "</text>\n";
  }
  for (std::size_t k = 0; k < rows.size(); ++k)
    s << "<text x=\"10\" y=\"" << top + ch * int(k) + 13 << "\">" << xml_escape(rows[k]) << "</text>\n";
  for (const auto& p : r.probes) {
    const auto c = std::find(points.begin(), points.end(), p.point) - points.begin();
    const auto k = std::find(rows.begin(), rows.end(), p.cone.label()) - rows.begin();
    const char* color = p.verdict == MicroVerdict::Singular       ? "#d7301f"
                        : p.verdict == MicroVerdict::Inconclusive ? "#fdae61"
                                                                  : "#a6d96a";
    s << "<rect x=\"" << left + cw * c << "\" y=\"" << top + ch * k << "\" width=\"" << cw - 2 << "\" height=\""
      << ch - 2 << "\" fill=\"" << color << "\"><title>" << to_string(p.verdict) << " margin "
      << exponent_string(p.fit.worst_margin) << "</title></rect>\n";
  }
  const int ly = top + ch * int(rows.size()) + 25;
  const char* names[] = {"microanalytic", "inconclusive", "singular"};
  const char* colors[] = {"#a6d96a", "#fdae61", "#d7301f"};
  for (int i = 0; i < 3; ++i) {
    s << "<rect x=\"" << 10 + 120 * i << "\" y=\"" << ly << "\" width=\"12\" height=\"12\" fill=\"" << colors[i]
      << "\"/>\n<text x=\"" << 26 + 120 * i << "\" y=\"" << ly + 10 << "\">" << names[i] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string decay_svg(const ProbeResult& p, const std::vector<double>& eps, const std::string& title) {
  const auto& env = p.fit.log_envelope;
  const int n_max = int(env.size());
  const double logC = std::log(p.fit.C);
  // bound at the smallest eps, in the same units as the envelope
  auto bound = [&](int n) { return (n + 1) * logC + n * std::log(double(n)) - p.fit.a * std::log(eps.back()); };
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& row : env)
    for (double v : row)
      if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  for (int n = 1; n <= n_max; ++n) lo = std::min(lo, bound(n)), hi = std::max(hi, bound(n));
  if (!(hi > lo)) lo = 0, hi = 1;
  const double W = 480, H = 300, L = 50, T = 30;
  auto X = [&](int n) { return L + (n - 1) * W / std::max(1, n_max - 1); };
  auto Y = [&](double v) { return T + H - (v - lo) / (hi - lo) * H; };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << L + W + 30 << "\" height=\"" << T + H + 50
    << "\" font-family=\"monospace\" font-size=\"11\">\n";
  s << "<text x=\"10\" y=\"18\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W << "\" height=\"" << H
    << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    std::string pts;
    for (int n = 1; n <= n_max; ++n) {
      const double v = env[n - 1][i];
      if (std::isfinite(v)) pts += fmt(X(n)) + "," + fmt(Y(v)) + " ";
    }
    const int shade = 40 + int(160.0 * i / std::max<std::size_t>(1, eps.size() - 1));
    s << "<polyline fill=\"none\" stroke=\"rgb(" << shade << "," << shade << ",220)\" points=\"" << pts
      << "\"><title>eps " << eps[i] << "</title></polyline>\n";
  }
  std::string bpts;
  for (int n = 1; n <= n_max; ++n) bpts += fmt(X(n)) + "," + fmt(Y(bound(n))) + " ";
  s << "<polyline fill=\"none\" stroke=\"#d7301f\" stroke-dasharray=\"4 3\" points=\"" << bpts << "\"/>\n";
  s << "<text x=\"" << L << "\" y=\"" << T + H + 20 << "\">n = 1 .. " << n_max << ", dashed: bound at smallest eps</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string envelope_csv(const WaveFrontReport& r, const std::vector<double>& eps) {
  std::ostringstream s;
  s << "point,direction,n,eps,log_envelope,log_bound\n";
  for (const auto& p : r.probes) {
    const double logC = std::log(p.fit.C);
    for (std::size_t n = 1; n <= p.fit.log_envelope.size(); ++n)
      for (std::size_t i = 0; i < eps.size() && i < p.fit.log_envelope[n - 1].size(); ++i) {
        const double bnd = (n + 1) * logC + n * std::log(double(n)) - p.fit.a * std::log(eps[i]);
        s << p.point[0] << "," << p.cone.label() << "," << n << "," << eps[i] << ","
          << exponent_string(p.fit.log_envelope[n - 1][i]) << "," << exponent_string(bnd) << "\n";
      }
  }
  return s.str();
}

}  // namespace gfa::cli
