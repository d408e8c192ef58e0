#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gfa/asymptotics.hpp"
#include "gfa/expression.hpp"

namespace gfa {

/// Closed box in dimension 1 or 2 (second axis ignored in 1D).
struct Box {
  int dimension = 1;
  std::array<double, 2> lo{0, 0}, hi{0, 0};

  static Box interval(double a, double b);
  static Box rect(double x0, double x1, double y0, double y1);
  static Box ball(double center, double radius) { return interval(center - radius, center + radius); }

  bool contains(double x, double y = 0.0) const;
  bool contains(const Box& inner) const;
  double center(int axis = 0) const { return 0.5 * (lo[axis] + hi[axis]); }
  double width(int axis = 0) const { return hi[axis] - lo[axis]; }
};

struct SpatialGrid {
  Box bounds;
  int points_per_axis = 4096;

  SpatialGrid(Box b, int points);
  static SpatialGrid standard(const Box& b);  // 4096 in 1D, 512 per axis in 2D
  int dimension() const { return bounds.dimension; }
};

/// An eps-indexed family of smooth functions with a derivative oracle.
class FunctionNet {
public:
  /// Net given by an expression in x (and y in 2D) and eps.
  static FunctionNet symbolic(Expression expr, Box domain, std::string label = {});
  static FunctionNet symbolic(std::string_view text, Box domain);

  /// Net known only through periodic samples on `grid` (1D). Derivatives
  /// come from the spectrum and are trusted up to order 12.
  using Sampler = std::function<std::vector<double>(double eps)>;
  static FunctionNet sampled(Sampler sampler, SpatialGrid grid, std::string label = {});

  static constexpr int kSampledMaxOrder = 12;
  /// Factorials past 170 overflow double.
  static constexpr int kSymbolicMaxOrder = 170;

  int dimension() const { return domain_.dimension; }
  const Box& domain() const { return domain_; }
  const std::string& label() const { return label_; }
  int max_reliable_order() const { return expr_ ? kSymbolicMaxOrder : kSampledMaxOrder; }
  bool is_symbolic() const { return bool(expr_); }
  const SpatialGrid* sample_grid() const { return sample_grid_ ? &*sample_grid_ : nullptr; }
  const Expression* expression() const { return expr_ ? &*expr_ : nullptr; }
  /// Points where derivatives concentrate (embedded singularities).
  const std::vector<double>& anchors() const { return anchors_; }
  void add_anchor(double a) { anchors_.push_back(a); }

  double value(double x, double eps) const;
  double value(double x, double y, double eps) const;
  /// f, f', ..., f^{(n)} at x.
  std::vector<double> derivatives(double x, double eps, int n) const;
  /// d[a][b] = d^{a+b} f / dx^a dy^b, a + b <= n.
  std::vector<std::vector<double>> derivatives(double x, double y, double eps, int n) const;
  /// Normalized Taylor coefficients f^{(k)}(x)/k!, k <= n (symbolic, 1D).
  std::vector<double> taylor_coefficients(double x, double eps, int n) const;

  /// Values on a uniform grid (row-major in 2D), endpoint excluded.
  std::vector<double> sample(const SpatialGrid& grid, double eps) const;

private:
  Box domain_;
  std::string label_;
  std::optional<Expression> expr_;
  Sampler sampler_;
  std::optional<SpatialGrid> sample_grid_;
  std::vector<double> anchors_;

  std::vector<double> sampled_derivatives(double x, double eps, int n) const;
};

/// sup over region of |f^{(k)}| for each k <= order (1D) or of
/// max_{a+b=k} |d^a_x d^b_y f| (2D).
std::vector<double> derivative_sups(const FunctionNet& net, int order, const Box& region, double eps,
                                    int points_per_axis = 0);

/// mu_nu: sup of all derivatives of order <= nu on region.
double seminorm(const FunctionNet& net, int order, const Box& region, double eps,
                int points_per_axis = 0);

struct FunctionNetClassification {
  std::vector<ValuationEstimate> per_order;
  Classification overall = Classification::Moderate;
};

FunctionNetClassification classify_function_net(const FunctionNet& net, const EpsilonGrid& grid,
                                                const Box& region, int max_order,
                                                int points_per_axis = 0,
                                                const Thresholds& th = default_thresholds());

/// eps-indexed point staying in `support` for eps < eps0.
struct GeneralizedPoint {
  std::vector<ScalarNet> coordinates;
  Box support;
  double eps0 = 1.0;

  static GeneralizedPoint classical(double x);
  static GeneralizedPoint net(ScalarNet x, Box support, double eps0 = 1.0);
  double coordinate(int axis, double eps) const;
};

ScalarNet evaluate_at_point(const FunctionNet& net, const GeneralizedPoint& point);

/// Sample positions used for suprema: uniform grid plus geometric clusters
/// around anchors so that eps-scale structure is resolved at every eps.
std::vector<double> sup_sample_points(const Box& region, const std::vector<double>& anchors,
                                      int points_per_axis);

}  // namespace gfa
