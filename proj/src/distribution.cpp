#include "gfa/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace gfa {

namespace {

class DistParser {
public:
  explicit DistParser(std::string_view s) : src_(s) {}

  DistributionSpec run() {
    DistributionSpec spec;
    spec.text = std::string(src_);
    skip();
    if (src_.substr(pos_).starts_with("smooth:")) {
      pos_ += 7;
      DistributionTerm t;
      t.kind = DistKind::Smooth;
      t.smooth = std::make_shared<Expression>(parse_expr(src_.substr(pos_), pos_));
      spec.terms.push_back(std::move(t));
      return spec;
    }
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    for (;;) {
      spec.terms.push_back(term(sign));
      skip();
      if (pos_ >= src_.size()) break;
      if (accept('+'))
        sign = 1.0;
      else if (accept('-'))
        sign = -1.0;
      else
        fail("expected '+' or '-' between distribution terms");
    }
    return spec;
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) { throw ParseError(src_, pos_, what); }
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool at_number() {
    skip();
    return pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
            src_[pos_] == '-');
  }
  double number() {
    skip();
    double v = 0;
    const char* first = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, src_.data() + src_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += std::size_t(ptr - first);
    return v;
  }
  std::string_view word() {
    skip();
    const std::size_t s = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return src_.substr(s, pos_ - s);
  }

  static Expression parse_expr(std::string_view text, std::size_t base) {
    try {
      return Expression::parse(text);
    } catch (const ParseError& e) {
      throw ParseError(text, base + e.offset(), e.what());
    }
  }

  DistributionTerm term(double sign) {
    DistributionTerm t;
    t.coefficient = sign;
    skip();
    if (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      t.coefficient *= number();
      if (!accept('*')) fail("expected '*' after coefficient");
    }
    const std::size_t name_at = pos_;
    const std::string_view name = word();
    if (name == "delta") {
      t.kind = DistKind::Delta;
    } else if (name == "ddelta") {
      t.kind = DistKind::DeltaDerivative;
      accept(':');
      skip();
      if (!at_number()) fail("ddelta needs a derivative order");
      const double k = number();
      if (k < 0 || k != std::floor(k) || k > 64) fail("derivative order must be an integer in [0,64]");
      t.order = int(k);
    } else if (name == "heaviside") {
      t.kind = DistKind::Heaviside;
    } else if (name == "absx") {
      t.kind = DistKind::AbsX;
    } else if (name == "smooth") {
      t.kind = DistKind::Smooth;
      if (!accept('(')) fail("expected '(' after smooth");
      const std::size_t body = pos_;
      int depth = 1;
      while (pos_ < src_.size() && depth > 0) {
        if (src_[pos_] == '(') ++depth;
        if (src_[pos_] == ')') --depth;
        ++pos_;
      }
      if (depth) fail("unbalanced smooth(...)");
      t.smooth = std::make_shared<Expression>(parse_expr(src_.substr(body, pos_ - 1 - body), body));
      if (t.smooth->uses_y()) fail("smooth terms are functions of x only");
    } else {
      pos_ = name_at;
      fail(name.empty() ? "expected a distribution name" : "unknown distribution '" + std::string(name) + "'");
    }
    if (accept('@')) t.location = number();
    return t;
  }
};

}  // namespace

DistributionSpec DistributionSpec::parse(std::string_view text) { return DistParser(text).run(); }

std::vector<double> DistributionSpec::singular_points() const {
  std::vector<double> pts;
  for (const auto& t : terms)
    if (t.kind != DistKind::Smooth && t.coefficient != 0.0) pts.push_back(t.location);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool DistributionSpec::has_smooth_terms() const {
  return std::any_of(terms.begin(), terms.end(), [](const auto& t) { return t.kind == DistKind::Smooth; });
}

double DistributionSpec::classical_value(double x) const {
  double v = 0;
  for (const auto& t : terms) {
    const double s = x - t.location;
    switch (t.kind) {
      case DistKind::Heaviside: v += t.coefficient * (s > 0 ? 1.0 : s < 0 ? 0.0 : 0.5); break;
      case DistKind::AbsX: v += t.coefficient * std::abs(s); break;
      case DistKind::Smooth: v += t.coefficient * (*t.smooth)(s, 0.0); break;
      default: throw Error("distribution has no pointwise values");
    }
  }
  return v;
}

}  // namespace gfa
