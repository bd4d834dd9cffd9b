#pragma once

// Geometry of S^d reduced to the height u = <x, north pole>: surface measure
// ratios, sphere energies, the ring-averaged kernel and radial quadrature.

#include <cmath>
#include <limits>
#include <numbers>

#include "errors.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace spheq::sphere {

/// ω_d / ω_{d-1} = √π Γ(d/2) / Γ((d+1)/2), for d >= 1.
inline double omega_ratio(int d) {
  if (d < 1) throw domain_error("omega_ratio: dimension must be positive");
  using specfun::log_gamma;
  return std::sqrt(std::numbers::pi) * std::exp(log_gamma(0.5 * d) - log_gamma(0.5 * (d + 1)));
}

inline double omega_ratio(const Params& p) { return omega_ratio(p.d); }

/// Energy of the normalized surface measure on S^d.
inline double sphere_energy(const Params& p) {
  using specfun::log_gamma;
  const int d = p.d;
  if (p.is_log()) {
    // derivative of W_s at s = 0
    return -std::numbers::ln2 - 0.5 * specfun::digamma(0.5 * d) + 0.5 * specfun::digamma(static_cast<double>(d));
  }
  const double s = p.s;
  return std::exp(log_gamma(d) + log_gamma(0.5 * (d - s)) - s * std::numbers::ln2 - log_gamma(0.5 * d) -
                  log_gamma(d - 0.5 * s));
}

/// Riesz energy of σ_d for any 0 < s < d (no regime restriction).
inline double riesz_sphere_energy(int d, double s) { return sphere_energy(Params{d, KernelKind::riesz, s}); }

/// Ring-averaged Riesz kernel ∫ |z - x|^{-s} dσ_{d-1}(x) for heights u, xi, 0 < s <= d.
/// xi_minus_u must equal xi - u; it is passed separately to keep precision when
/// the heights nearly coincide.
inline double riesz_kappa(double u, double xi, int d, double s, double xi_minus_u) {
  const double a = 0.5 * s;
  const double b = 1.0 - 0.5 * (d - s);
  const double c = 0.5 * d;
  if (xi_minus_u == 0.0) {
    if (s >= d - 1) return std::numeric_limits<double>::infinity();
    // Gauss summation at w = 1
    const double gauss = std::tgamma(c) * std::tgamma(c - a - b) * specfun::rgamma(c - a) * specfun::rgamma(c - b);
    return std::pow((1.0 - u) * (1.0 + u), -a) * gauss;
  }
  if (xi_minus_u > 0.0) {
    const double den = (1.0 - u) * (1.0 + xi);
    const double omw = 2.0 * xi_minus_u / den;
    const double w = omw < 0.5 ? 1.0 - omw : (1.0 + u) * (1.0 - xi) / den;
    return std::pow(den, -a) * specfun::hyp2f1(a, b, c, w, omw);
  }
  const double den = (1.0 + u) * (1.0 - xi);
  const double omw = -2.0 * xi_minus_u / den;
  const double w = omw < 0.5 ? 1.0 - omw : (1.0 - u) * (1.0 + xi) / den;
  return std::pow(den, -a) * specfun::hyp2f1(a, b, c, w, omw);
}

/// Ring-averaged logarithmic kernel on S^2.
inline double log_kappa(double u, double xi) {
  if (xi >= u) return -0.5 * (std::log1p(xi) + std::log1p(-u));
  return -0.5 * (std::log1p(-xi) + std::log1p(u));
}

/// κ(u, ξ): potential at height ξ of the uniform probability measure on the ring at height u.
inline double kappa(double u, double xi, const Params& p) {
  if (!(u >= -1.0 && u <= 1.0 && xi >= -1.0 && xi <= 1.0)) throw domain_error("kappa: heights must lie in [-1,1]");
  if (p.is_log()) return log_kappa(u, xi);
  return riesz_kappa(u, xi, p.d, p.s, xi - u);
}

/// Potential of the uniform unit ring at height t, evaluated at height xi, for s = d-2.
inline double boundary_potential(double t, double xi, const Params& p) {
  if (!p.is_exceptional()) throw domain_error("boundary_potential: requires s = d-2 with d >= 3");
  const double e = 1.0 - 0.5 * p.d;
  if (xi >= t) return std::pow((1.0 - t) * (1.0 + xi), e);
  return std::pow((1.0 + t) * (1.0 - xi), e);
}

/// Height of the Kelvin image of a point at height u, for the inversion centred at R p.
inline double kelvin_image_height(double u, double R) {
  if (!(R > 1.0)) throw domain_error("kelvin_image_height: R must exceed 1");
  return (R + 1.0) * (R + 1.0) * (1.0 - u) / (R * R - 2.0 * R * u + 1.0) - 1.0;
}

/// Squared distance |x - R p|^2 for a point at height u.
inline double dist2_to_axis_point(double u, double R) { return (R - 1.0) * (R - 1.0) + 2.0 * R * (1.0 - u); }

using quadrature::RadialQuadrature;

/// Rule for (ω_{d-1}/ω_d) ∫_{-1}^t g(u) (t-u)^singular_exponent (1-u^2)^{d/2-1} du.
inline RadialQuadrature build_quadrature(double t, const Params& p, int order, double singular_exponent) {
  const double e = 0.5 * p.d - 1.0;
  auto q = quadrature::radial_rule(t, {e, singular_exponent, e, 1.0}, order);
  const double scale = 1.0 / omega_ratio(p.d);
  for (auto& w : q.weights) w *= scale;
  return q;
}

/// Radial weight of the sphere measure with an extra edge factor (t-u)^edge.
inline quadrature::RadialWeight sphere_weight(int d, double edge, double edge_scale = 1.0) {
  const double e = 0.5 * d - 1.0;
  return {e, edge, e, edge_scale};
}

}  // namespace spheq::sphere
