#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gfa/asymptotics.hpp"
#include "gfa/jet.hpp"

namespace gfa {

struct DistributionSpec;

/// Syntax error with a byte offset into the source and a caret diagnostic.
class ParseError : public Error {
public:
  ParseError(std::string_view source, std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }
  const std::string& diagnostic() const { return diagnostic_; }

private:
  std::size_t offset_;
  std::string diagnostic_;
};

enum class Op { Number, X, Y, Eps, Neg, Add, Sub, Mul, Div, Pow, Call, Emb };

enum class Func {
  Exp, Sin, Cos, Cosh, Sinh, Tanh, Sech, Log, Sqrt, Abs,
  Psi, Phi, BigPhi, Chi, Bump, GBump
};

struct Node {
  Op op = Op::Number;
  double value = 0.0;
  Func fn = Func::Exp;
  std::vector<std::shared_ptr<const Node>> args;
  std::shared_ptr<const DistributionSpec> dist;
};

/// Parsed expression over x, y and eps. Immutable and cheap to copy.
class Expression {
public:
  static Expression parse(std::string_view text);
  static Expression from_node(std::shared_ptr<const Node> root, std::string text);

  const std::string& text() const { return text_; }
  const Node& root() const { return *root_; }
  bool uses_y() const { return uses_y_; }
  bool uses_eps() const { return uses_eps_; }
  bool uses_x() const { return uses_x_; }

  double operator()(double x, double eps) const { return eval(x, 0.0, eps); }
  double eval(double x, double y, double eps) const;
  Jet<double> eval(const Jet<double>& x, const Jet<double>& y, double eps) const;
  Jet<Jet<double>> eval(const Jet<Jet<double>>& x, const Jet<Jet<double>>& y, double eps) const;

private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  bool uses_x_ = false, uses_y_ = false, uses_eps_ = false;
};

/// Names of the built-in functions, for diagnostics and docs.
std::vector<std::string> builtin_function_names();

}  // namespace gfa
