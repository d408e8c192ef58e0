#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gfa/expression.hpp"
#include "gfa/jet.hpp"
#include "gfa/kernels.hpp"

namespace gfa {

enum class DistKind { Delta, DeltaDerivative, Heaviside, AbsX, Smooth };

struct DistributionTerm {
  double coefficient = 1.0;
  DistKind kind = DistKind::Delta;
  int order = 0;          // derivative order for DeltaDerivative
  double location = 0.0;  // translate: T(x - location)
  std::shared_ptr<const Expression> smooth;
};

/// A finite linear combination of catalog distributions.
///
/// Text form: terms joined by + or -, each `[c*]name[@loc]` with name one of
/// delta, ddelta k, heaviside, absx, smooth(<expr in x>). A lone
/// `smooth:<expr>` is accepted as well.
struct DistributionSpec {
  std::vector<DistributionTerm> terms;
  std::string text;
  /// Embed with the compactly supported truncation of phi_eps instead of
  /// phi_eps itself.
  bool truncated = false;

  static DistributionSpec parse(std::string_view text);

  /// Points where some term is not smooth.
  std::vector<double> singular_points() const;
  bool has_smooth_terms() const;

  /// (T * phi_eps)(x). Smooth terms use the function itself: convolution with
  /// phi_eps changes it by a negligible amount because every moment of phi
  /// of order >= 1 vanishes.
  template <class T>
  T embedded(const T& x, double eps) const;

  /// The classical object where it is a function (heaviside, absx, smooth);
  /// throws for point-supported terms.
  double classical_value(double x) const;
};

namespace detail {

inline double kernel_scalar(kernels::Kind kind, int order, double u) {
  return kernels::kernel_derivatives(kind, order, u, 0)[0];
}

template <class T>
T kernel_apply(kernels::Kind kind, int order, const T& u, double trunc_eps = 0.0) {
  if constexpr (std::is_same_v<T, double>) {
    if (trunc_eps > 0) return kernels::truncated_kernel_derivatives(kind, order, u, 0, trunc_eps)[0];
    return kernel_scalar(kind, order, u);
  } else {
    if (trunc_eps > 0) {
      auto oracle = [kind, order, trunc_eps](double v, int m) {
        return kernels::truncated_kernel_derivatives(kind, order, v, m, trunc_eps);
      };
      return apply_scalar(oracle, u);
    }
    auto oracle = [kind, order](double v, int m) {
      return kernels::kernel_derivatives(kind, order, v, m);
    };
    return apply_scalar(oracle, u);
  }
}

template <class T>
T smooth_eval(const Expression& e, const T& x, double eps) {
  if constexpr (std::is_same_v<T, double>)
    return e.eval(x, 0.0, eps);
  else
    return e.eval(x, T(0.0), eps);
}

}  // namespace detail

template <class T>
T DistributionSpec::embedded(const T& x, double eps) const {
  T total(0.0);
  const double te = truncated ? eps : 0.0;
  for (const auto& t : terms) {
    const T shifted = x - T(t.location);
    const T u = shifted * (1.0 / eps);
    T v(0.0);
    switch (t.kind) {
      case DistKind::Delta:
        v = detail::kernel_apply(kernels::Kind::Phi, 0, u, te) * (1.0 / eps);
        break;
      case DistKind::DeltaDerivative:
        v = detail::kernel_apply(kernels::Kind::Phi, t.order, u, te) * std::pow(eps, -1.0 - t.order);
        break;
      case DistKind::Heaviside:
        v = detail::kernel_apply(kernels::Kind::Heaviside, 0, u, te);
        break;
      case DistKind::AbsX:
        v = detail::kernel_apply(kernels::Kind::Abs, 0, u, te) * eps;
        break;
      case DistKind::Smooth:
        v = detail::smooth_eval(*t.smooth, shifted, eps);
        break;
    }
    total += v * t.coefficient;
  }
  return total;
}

}  // namespace gfa
