#pragma once

#include <string>

#include "json.hpp"

#include "gfa/analyticity.hpp"
#include "gfa/embedding.hpp"
#include "gfa/microlocal.hpp"

namespace gfa::cli {

using Json = nlohmann::ordered_json;

/// Exponents as decimal strings: "2.0", "-1.25", "inf", "-inf", "nan".
/// Six decimals, trailing zeros dropped, at least one decimal kept.
std::string exponent_string(double v);
/// Finite values as JSON numbers, the rest as the strings above.
Json number(double v);

Json to_json(const ValuationEstimate& v);
Json to_json(const AnalyticityReport& r);
Json to_json(const SingularSupport& s);
Json to_json(const ResidualCertificate& c);
Json to_json(const AssociationResult& a);
Json to_json(const SublinearityResult& s);
Json to_json(const TaylorConvergence& t);
Json to_json(const Mollifier& m);
Json to_json(const NegligibilityCertificate& c);
Json to_json(const ProbeResult& p);
Json to_json(const WaveFrontReport& r);
Json to_json(const ClassicalDecay& c);

/// Envelope wrapper shared by all reports: {"schema": "gfa.<kind>/1", "command": ..., ...}.
Json report(const std::string& kind, Json body);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

/// Probes by direction (rows) and point (columns), colored by verdict.
std::string wavefront_svg(const WaveFrontReport& r, const std::string& title, const std::string& timestamp = {});
/// log envelope against n, one polyline per eps, with the fitted bound.
std::string decay_svg(const ProbeResult& p, const std::vector<double>& eps, const std::string& title);
/// point, direction, n, eps, log_envelope, log_bound rows.
std::string envelope_csv(const WaveFrontReport& r, const std::vector<double>& eps);

}  // namespace gfa::cli
