#pragma once

// Fields generated by finitely many positive charges on the positive polar axis.
// Each entry point dispatches on the kernel regime.

#include <cmath>

#include "cap_exceptional.hpp"
#include "cap_measure.hpp"
#include "cap_riesz.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "point_field.hpp"

namespace spheq::axis_field {

enum class Regime { riesz, exceptional, log };

inline Regime regime(const Params& p) {
  if (p.is_log()) {
    if (p.d != 2) throw domain_error("axis_field: the log kernel is supported on S^2 only");
    return Regime::log;
  }
  if (p.is_exceptional()) return Regime::exceptional;
  if (p.is_riesz_interior()) return Regime::riesz;
  throw domain_error("axis_field: s must satisfy d-2 <= s < d (d >= 3 when s = d-2)");
}

inline void require_nonempty(const AxisMeasure& f) {
  if (f.atoms.empty()) throw domain_error("axis_field: the axis measure has no atoms");
}

/// Q(ξ) = Σ m_i |x - R_i p|^{-s}, or -Σ m_i log|x - R_i p| for the log kernel.
inline double axis_Q(double xi, const AxisMeasure& f, const Params& p) {
  if (!(xi >= -1.0 && xi <= 1.0)) throw domain_error("axis_Q: height must lie in [-1, 1]");
  return axis_field_value(xi, f, p);
}

/// Signed equilibrium on the whole sphere.
inline point_field::SphereSignedDensity axis_sphere_equilibrium(const AxisMeasure& f, const Params& p) {
  require_nonempty(f);
  return point_field::sphere_equilibrium(f, p);
}

/// Pole value of the whole-sphere signed density, times W_s for Riesz kernels:
/// F_s(S^d) - Σ m_i (R_i+1)^{d-s}/(R_i-1)^d, or 1 + ‖λ‖ - Σ m_i (R_i+1)^2/(R_i-1)^2 (log).
/// The support is all of S^d iff this is >= 0.
inline double axis_full_support_margin(const AxisMeasure& f, const Params& p) {
  const auto eq = axis_sphere_equilibrium(f, p);
  if (p.is_log()) return eq.density(1.0);
  return eq.density(1.0) * sphere::sphere_energy(p);
}

/// Φ̃(t): F(Σ_t) in each regime.
inline double axis_phi(double t, const AxisMeasure& f, const Params& p) {
  switch (regime(p)) {
    case Regime::riesz:
      return cap_riesz::phi(t, f, p);
    case Regime::exceptional:
      return cap_exceptional::phibar(t, f, p);
    case Regime::log:
      return cap_exceptional::log_f0_functional(t, f);
  }
  return 0.0;
}

/// Signed equilibrium on Σ_t.
inline CapMeasure axis_eta(double t, const AxisMeasure& f, const Params& p) {
  require_nonempty(f);
  switch (regime(p)) {
    case Regime::riesz:
      return cap_riesz::eta_measure(t, f, p);
    case Regime::exceptional:
      return cap_exceptional::etabar(t, f, p);
    case Regime::log:
      return cap_exceptional::log_etabar(t, f);
  }
  return {};
}

/// Support cap t_λ of the extremal measure and the measure on it.
inline AxisCapSolution axis_solve_t(const AxisMeasure& f, const Params& p) {
  require_nonempty(f);
  switch (regime(p)) {
    case Regime::riesz:
      return cap_riesz::solve_t0(f, p);
    case Regime::exceptional:
      return cap_exceptional::solve_t0_exceptional(f, p);
    case Regime::log:
      return cap_exceptional::log_solve_t0(f);
  }
  return {};
}

/// Closed-form weighted potential U^{η_t} + Q at height ξ.
inline double axis_weighted_potential(double xi, double t, const AxisMeasure& f, const Params& p) {
  switch (regime(p)) {
    case Regime::riesz:
      return cap_riesz::weighted_potential(xi, t, f, p);
    case Regime::exceptional:
      return cap_exceptional::weighted_potential_exceptional(xi, t, f, p);
    case Regime::log:
      return cap_exceptional::log_weighted_potential(xi, t, f);
  }
  return 0.0;
}

/// F_0(Σ_t) for the log kernel on S^2.
inline double axis_f0_functional(double t, const AxisMeasure& f) {
  require_nonempty(f);
  return cap_exceptional::log_f0_functional(t, f);
}

/// Edge value of the log extremal density: Σ m_i 2R_i(1-t)(R_i+1)^2/r_i^4 at t = t_λ < 1.
inline double axis_log_edge_density(double t, const AxisMeasure& f) {
  double v = 0.0;
  for (const auto& a : f.atoms) {
    const double r2 = sphere::dist2_to_axis_point(t, a.R);
    v += a.mass * 2.0 * a.R * (1.0 - t) * (a.R + 1.0) * (a.R + 1.0) / (r2 * r2);
  }
  return v;
}

}  // namespace spheq::axis_field
