#pragma once

#include <map>
#include <string>
#include <string_view>

#include "gfa/analyticity.hpp"
#include "gfa/asymptotics.hpp"
#include "gfa/microlocal.hpp"

namespace gfa::cli {

/// Flat `key = value` settings. Every key has a default; unknown keys are
/// rejected so that a typo cannot silently leave a threshold at its default.
/// Lines starting with # are comments.
class Config {
public:
  Config();
  static Config parse(std::string_view text);
  /// Throws IoError when the file cannot be read.
  static Config load(const std::string& path);

  /// `key=value`; throws on unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  void set(std::string_view assignment);

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  const std::string& text(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  std::string dump() const;

  /// `<prefix>.first`, `.last`, `.tail`: dyadic grid 2^-first .. 2^-last.
  EpsilonGrid grid(const std::string& prefix) const;
  Thresholds thresholds() const;
  AnalyticityOptions analyticity() const;
  MicrolocalOptions microlocal() const;
  Box domain() const;
  Box domain_2d() const;

private:
  std::map<std::string, std::string> values_;
};

/// Failures reading or writing files (exit code 3).
class IoError : public Error {
public:
  using Error::Error;
};

/// Malformed arguments (exit code 2).
class UsageError : public Error {
public:
  using Error::Error;
};

}  // namespace gfa::cli
