#pragma once

// Rotationally invariant measures carried by a cap Σ_t = {u <= t}: a radial density
// with an optional power singularity at the edge plus an optional uniform ring atom.

#include <cmath>
#include <functional>
#include <string>

#include "errors.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "sphere.hpp"

namespace spheq {

/// Measure on Σ_t with density (w.r.t. σ_d) (t-u)^edge_exponent * regular(u, t-u) on
/// [-1, t) and mass boundary_coeff spread uniformly over the ring u = t.
struct CapMeasure {
  Params params;
  double t = 1.0;
  double edge_exponent = 0.0;
  std::function<double(double, double)> regular;
  double boundary_coeff = 0.0;
  double mass = 1.0;  ///< nominal total mass
  double phi = 0.0;   ///< constant value of the weighted potential on the cap, when meaningful
  double edge_scale = 1.0;

  /// Density at height u, with t - u supplied exactly.
  double density_gap(double u, double gap) const {
    if (!(gap > 0.0) && !(gap == 0.0 && edge_exponent == 0.0))
      throw domain_error("CapMeasure: density requested outside the cap");
    const double g = regular(u, gap);
    return edge_exponent == 0.0 ? g : std::pow(gap, edge_exponent) * g;
  }
  double density(double u) const { return density_gap(u, t - u); }

  /// Mass of the absolutely continuous part, by quadrature.
  double interior_mass(double rel_tol = 1e-13) const {
    const auto w = sphere::sphere_weight(params.d, edge_exponent, edge_scale);
    return quadrature::integrate_radial(regular, t, w, rel_tol, 1e-15) / sphere::omega_ratio(params.d);
  }
  double quadrature_mass(double rel_tol = 1e-13) const { return interior_mass(rel_tol) + boundary_coeff; }

  /// ∫ f(u) dμ including the ring term f(t) * boundary_coeff.
  template <class F>
  double moment(F&& f, double rel_tol = 1e-12) const {
    const auto w = sphere::sphere_weight(params.d, edge_exponent, edge_scale);
    const double in = quadrature::integrate_radial([&](double u, double gap) { return f(u) * regular(u, gap); }, t, w,
                                                   rel_tol, 1e-15) /
                      sphere::omega_ratio(params.d);
    return in + boundary_coeff * f(t);
  }
};

using SignedCapMeasure = CapMeasure;
using BoundaryMeasureCap = CapMeasure;

enum class SolvedBy { interior_root, boundary_t_equals_1 };

inline std::string to_string(SolvedBy s) {
  return s == SolvedBy::interior_root ? "interior_root" : "boundary_t_equals_1";
}

/// Support cap Σ_{t0} of the extremal measure and the measure itself.
struct CapSolution {
  double t0 = 1.0;
  double phi_at_t0 = 0.0;
  CapMeasure equilibrium;
  SolvedBy solved_by = SolvedBy::boundary_t_equals_1;
  AxisMeasure field;
  Params params;
};

using AxisCapSolution = CapSolution;

/// Σ_i m_i Q_i(ξ) for the axis field: |x - R p|^{-s} or -log|x - R p|.
inline double axis_field_value(double xi, const AxisMeasure& f, const Params& p) {
  double q = 0.0;
  for (const auto& a : f.atoms) {
    const double r2 = sphere::dist2_to_axis_point(xi, a.R);
    q += a.mass * (p.is_log() ? -0.5 * std::log(r2) : std::pow(r2, -0.5 * p.s));
  }
  return q;
}

}  // namespace spheq
