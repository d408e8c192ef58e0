#include "gfa/expression.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "gfa/distribution.hpp"
#include "gfa/kernels.hpp"

namespace gfa {

ParseError::ParseError(std::string_view source, std::size_t offset, const std::string& what)
    : Error("syntax error at offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {
  diagnostic_ = std::string(source) + "\n" + std::string(offset, ' ') + "^ " + what;
}

namespace {

const std::map<std::string, Func, std::less<>>& function_table() {
  static const std::map<std::string, Func, std::less<>> t = {
      {"exp", Func::Exp},   {"sin", Func::Sin},     {"cos", Func::Cos},   {"cosh", Func::Cosh},
      {"sinh", Func::Sinh}, {"tanh", Func::Tanh},   {"sech", Func::Sech}, {"log", Func::Log},
      {"sqrt", Func::Sqrt}, {"abs", Func::Abs},     {"psi", Func::Psi},   {"phi", Func::Phi},
      {"Phi", Func::BigPhi}, {"chi", Func::Chi},    {"bump", Func::Bump}, {"gbump", Func::GBump},
  };
  return t;
}

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  n->value = value;
  return n;
}

NodePtr make_call(Func fn, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->fn = fn;
  n->args = {std::move(arg)};
  return n;
}

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) { throw ParseError(src_, pos_, what); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Op::Add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Op::Sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::Mul, {lhs, unary()});
      } else if (accept('/')) {
        NodePtr rhs = unary();
        // a/cosh(b) -> a*sech(b): stays finite when cosh overflows.
        if (rhs->op == Op::Call && rhs->fn == Func::Cosh)
          lhs = make(Op::Mul, {lhs, make_call(Func::Sech, rhs->args[0])});
        else
          lhs = make(Op::Div, {lhs, rhs});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* first = src_.data() + pos_;
    double v = 0;
    auto [ptr, ec] = std::from_chars(first, src_.data() + src_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += std::size_t(ptr - first);
    return make(Op::Number, {}, v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return make(Op::X);
    if (name == "y") return make(Op::Y);
    if (name == "eps") return make(Op::Eps);
    if (name == "pi") return make(Op::Number, {}, M_PI);
    if (name == "emb") return embedding(start, false);
    if (name == "embt") return embedding(start, true);
    const auto& table = function_table();
    const auto it = table.find(name);
    if (it == table.end()) {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!accept('(')) fail("expected '(' after function name");
    NodePtr arg = expr();
    if (!accept(')')) fail("expected ')'");
    return make_call(it->second, arg);
  }

  NodePtr embedding(std::size_t start, bool truncated) {
    if (!accept('(')) fail("expected '(' after emb");
    const std::size_t body = pos_;
    int depth = 1;
    while (pos_ < src_.size() && depth > 0) {
      if (src_[pos_] == '(') ++depth;
      if (src_[pos_] == ')') --depth;
      ++pos_;
    }
    if (depth != 0) {
      pos_ = start;
      fail("unbalanced emb(...)");
    }
    const std::string_view inner = src_.substr(body, pos_ - 1 - body);
    auto n = std::make_shared<Node>();
    n->op = Op::Emb;
    try {
      auto d = DistributionSpec::parse(inner);
      d.truncated = truncated;
      n->dist = std::make_shared<DistributionSpec>(std::move(d));
    } catch (const ParseError& e) {
      throw ParseError(src_, body + e.offset(), e.what());
    }
    return n;
  }
};

void scan_usage(const Node& n, bool& ux, bool& uy, bool& ue) {
  switch (n.op) {
    case Op::X: ux = true; break;
    case Op::Y: uy = true; break;
    case Op::Eps: ue = true; break;
    case Op::Emb: ux = ue = true; break;
    default: break;
  }
  for (const auto& a : n.args) scan_usage(*a, ux, uy, ue);
}

bool is_constant(const Node& n) {
  if (n.op == Op::X || n.op == Op::Y || n.op == Op::Eps || n.op == Op::Emb) return false;
  for (const auto& a : n.args)
    if (!is_constant(*a)) return false;
  return true;
}

// ---- evaluation ----

template <class T>
struct Env {
  const T& x;
  const T& y;
  double eps;
};

template <class T>
T bump_t(const T& t, bool gevrey) {
  const double p = primal(t);
  if (std::abs(p) >= 1.0) return T(0.0);
  using std::exp;
  using std::sqrt;
  const T q = T(1.0) - t * t;
  return exp(-(T(1.0) / (gevrey ? sqrt(q) : q)));
}

template <class T>
T kernel_call(Func fn, const T& a) {
  auto via = [&](auto oracle) -> T {
    if constexpr (std::is_same_v<T, double>)
      return oracle(a, 0)[0];
    else
      return apply_scalar(oracle, a);
  };
  switch (fn) {
    case Func::Psi:
    case Func::Phi: return via([](double u, int m) { return kernels::phi_derivatives(u, m); });
    case Func::BigPhi:
      return via([](double u, int m) { return kernels::heaviside_derivatives(u, m); });
    case Func::Chi: return via([](double u, int m) { return kernels::chi_derivatives(u, m); });
    default: break;
  }
  throw Error("not a kernel function");
}

template <class T>
T apply(Func fn, const T& a) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tanh;
  switch (fn) {
    case Func::Exp: return exp(a);
    case Func::Sin: return sin(a);
    case Func::Cos: return cos(a);
    case Func::Cosh: return cosh(a);
    case Func::Sinh: return sinh(a);
    case Func::Tanh: return tanh(a);
    case Func::Sech: return sech(a);
    case Func::Log:
      if (!(primal(a) > 0)) throw Error("log of nonpositive value");
      return log(a);
    case Func::Sqrt:
      if (primal(a) < 0) throw Error("sqrt of negative value");
      return sqrt(a);
    case Func::Abs: return abs(a);
    case Func::Bump: return bump_t(a, false);
    case Func::GBump: return bump_t(a, true);
    default: return kernel_call(fn, a);
  }
}

template <class T>
T eval_node(const Node& n, const Env<T>& env) {
  using std::exp;
  using std::log;
  using std::pow;
  switch (n.op) {
    case Op::Number: return T(n.value);
    case Op::X: return env.x;
    case Op::Y: return env.y;
    case Op::Eps: return T(env.eps);
    case Op::Neg: return -eval_node(*n.args[0], env);
    case Op::Add: return eval_node(*n.args[0], env) + eval_node(*n.args[1], env);
    case Op::Sub: return eval_node(*n.args[0], env) - eval_node(*n.args[1], env);
    case Op::Mul: return eval_node(*n.args[0], env) * eval_node(*n.args[1], env);
    case Op::Div: return eval_node(*n.args[0], env) / eval_node(*n.args[1], env);
    case Op::Pow: {
      const T base = eval_node(*n.args[0], env);
      if (is_constant(*n.args[1])) {
        const double zero = 0.0;
        const double p = eval_node(*n.args[1], Env<double>{zero, zero, env.eps});
        if constexpr (std::is_same_v<T, double>) {
          if (base < 0 && p != std::round(p)) throw Error("non-integer power of negative value");
          return std::pow(base, p);
        } else {
          return pow(base, p);
        }
      }
      const T e = eval_node(*n.args[1], env);
      if (!(primal(base) > 0)) throw Error("variable power of nonpositive value");
      return exp(e * log(base));
    }
    case Op::Call: return apply(n.fn, eval_node(*n.args[0], env));
    case Op::Emb: return n.dist->embedded(env.x, env.eps);
  }
  throw Error("corrupt expression");
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(text);
  return from_node(p.parse_all(), std::string(text));
}

Expression Expression::from_node(std::shared_ptr<const Node> root, std::string text) {
  Expression e;
  e.root_ = std::move(root);
  e.text_ = std::move(text);
  scan_usage(*e.root_, e.uses_x_, e.uses_y_, e.uses_eps_);
  return e;
}

double Expression::eval(double x, double y, double eps) const {
  return eval_node(*root_, Env<double>{x, y, eps});
}

Jet<double> Expression::eval(const Jet<double>& x, const Jet<double>& y, double eps) const {
  return eval_node(*root_, Env<Jet<double>>{x, y, eps});
}

Jet<Jet<double>> Expression::eval(const Jet<Jet<double>>& x, const Jet<Jet<double>>& y,
                                  double eps) const {
  return eval_node(*root_, Env<Jet<Jet<double>>>{x, y, eps});
}

std::vector<std::string> builtin_function_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : function_table()) out.push_back(k);
  return out;
}

}  // namespace gfa
