#pragma once

// Euler-type integral of an Appell F1 function, used to check the reduction of
// cap integrals of 2F1~ to a single smooth integral.

#include <cmath>

#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace spheq::specfun {

/// Γ(β)/(Γ(β+γ-α)Γ(α)) (1-xy)^{-β}
///   ∫_0^1 v^{β+γ-α-1}(1-v)^{α-1}(1-xv)^{β-γ}(1 - x(1-y)v/(1-xy))^{-β} dv.
inline double appell_f1_euler(double alpha, double beta, double gamma, double x, double y) {
  if (!(alpha > 0.0 && beta > 0.0 && gamma > 0.0)) throw domain_error("appell_f1_euler: parameters must be positive");
  if (!(beta + gamma > alpha)) throw domain_error("appell_f1_euler: requires beta + gamma > alpha");
  if (!(x > 0.0 && x < 1.0)) throw domain_error("appell_f1_euler: x must lie in (0, 1)");
  if (!(y > -1.0 && y < 1.0)) throw domain_error("appell_f1_euler: y must lie in (-1, 1)");
  const double e0 = beta + gamma - alpha - 1.0;
  const double e1 = alpha - 1.0;
  const double w = x * (1.0 - y) / (1.0 - x * y);
  auto f = [&](double v, double dv0, double dv1) {
    return std::pow(dv0, e0) * std::pow(dv1, e1) * std::pow(1.0 - x * v, beta - gamma) * std::pow(1.0 - w * v, -beta);
  };
  const double I = quadrature::tanh_sinh(f, 0.0, 1.0, 1e-13);
  const double lg = log_gamma(beta) - log_gamma(beta + gamma - alpha) - log_gamma(alpha);
  return std::exp(lg) * std::pow(1.0 - x * y, -beta) * I;
}

}  // namespace spheq::specfun
