#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "gfa/function_nets.hpp"

namespace gfa::cli {

enum ExitCode { kOk = 0, kAnalysisError = 1, kUsageError = 2, kIoError = 3 };

/// Runs one command line (without the program name). Reports go to the
/// output directory (--out, else $GFA_OUTPUT_DIR, else the working
/// directory) and the main JSON report is echoed to `out` unless --quiet.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `emb:<dist>` and `embt:<dist>` embed a catalog distribution with phi_eps or
/// psi_eps; anything else is an expression in x (and y), eps.
FunctionNet parse_net(const std::string& text, const Config& cfg);

/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);

struct Fixture {
  std::string name;
  std::string net;
  std::string description;
};
const std::vector<Fixture>& fixtures();

}  // namespace gfa::cli
