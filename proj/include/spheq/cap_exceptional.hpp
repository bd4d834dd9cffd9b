#pragma once

// Boundary cases of the cap problem. For s = d-2 (d >= 3) the balayage onto Σ_t puts
// part of the mass uniformly on the ring u = t. For the log kernel on S^2 all
// quantities are elementary.

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "cap_measure.hpp"
#include "cap_riesz.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "point_field.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "sphere.hpp"

namespace spheq::cap_exceptional {

namespace detail {

inline void require_exceptional(const Params& p, const char* who) {
  if (!p.is_exceptional()) throw domain_error(std::string(who) + ": requires s = d-2 with d >= 3");
}

inline void require_log(const Params& p, const char* who) {
  if (!p.is_log() || p.d != 2) throw domain_error(std::string(who) + ": requires the log kernel on S^2");
}

inline void require_height(double t, const char* who) {
  if (!(t > -1.0 && t <= 1.0)) throw domain_error(std::string(who) + ": cap height must lie in (-1, 1]");
}

/// ((1-t)/2)(1-t^2)^{d/2-1}
inline double ring_factor(double t, int d) { return 0.5 * (1.0 - t) * std::pow((1.0 - t) * (1.0 + t), 0.5 * d - 1.0); }

/// (R^2-1)^2 / r_u^{d+2}
inline double kelvin_density(double u, double R, int d) {
  return std::pow(R * R - 1.0, 2) * std::pow(sphere::dist2_to_axis_point(u, R), -0.5 * d - 1.0);
}

/// (R+1)^2 / r_t^d
inline double edge_weight(double t, double R, int d) {
  return (R + 1.0) * (R + 1.0) * std::pow(sphere::dist2_to_axis_point(t, R), -0.5 * d);
}

inline double min_edge_scale(const AxisMeasure& f) { return cap_riesz::detail::min_edge_scale(f); }

}  // namespace detail

// ---------------------------------------------------------------- s = d-2

/// ν̄_t = bal(σ_d, Σ_t): σ_d on the cap plus a ring atom.
inline CapMeasure nubar(double t, const Params& p) {
  detail::require_exceptional(p, "nubar");
  detail::require_height(t, "nubar");
  CapMeasure m;
  m.params = p;
  m.t = t;
  m.regular = [](double, double) { return 1.0; };
  m.boundary_coeff = sphere::sphere_energy(p) * detail::ring_factor(t, p.d);
  m.mass = specfun::beta_inc_reg(0.5 * (1.0 + t), 0.5 * p.d, 0.5 * p.d) + m.boundary_coeff;
  return m;
}

inline double nubar_norm(double t, const Params& p) { return nubar(t, p).mass; }

/// ε̄_t = bal(δ_{Rp}, Σ_t) for a unit charge.
inline CapMeasure epsbar(double t, double R, const Params& p) {
  detail::require_exceptional(p, "epsbar");
  detail::require_height(t, "epsbar");
  if (!(R > 1.0)) throw domain_error("epsbar: R must exceed 1");
  CapMeasure m;
  m.params = p;
  m.t = t;
  m.edge_scale = (R - 1.0) * (R - 1.0) / (2.0 * R);
  const double W = sphere::sphere_energy(p);
  const int d = p.d;
  m.regular = [R, d, W](double u, double) { return detail::kelvin_density(u, R, d) / W; };
  m.boundary_coeff = t == 1.0 ? 0.0 : detail::ring_factor(t, d) * detail::edge_weight(t, R, d);
  m.mass = m.quadrature_mass();
  return m;
}

inline CapMeasure epsbar(double t, const PointCharge& c, const Params& p) { return epsbar(t, c.R, p); }

inline double epsbar_norm(double t, double R, const Params& p) { return epsbar(t, R, p).mass; }

/// Φ̄(t) = W(1 + Σ m_i ‖ε̄_t(R_i)‖)/‖ν̄_t‖.
inline double phibar(double t, const AxisMeasure& f, const Params& p) {
  detail::require_exceptional(p, "phibar");
  detail::require_height(t, "phibar");
  double num = 1.0;
  for (const auto& a : f.atoms) num += a.mass * epsbar_norm(t, a.R, p);
  return sphere::sphere_energy(p) * num / nubar_norm(t, p);
}

inline double phibar(double t, const PointCharge& c, const Params& p) { return phibar(t, as_axis(c), p); }

/// Δ̄(t) = Φ̄(t) - Σ m_i (R_i+1)^2/r_i^d; same sign as the ring coefficient of η̄_t.
inline double deltabar(double t, const AxisMeasure& f, const Params& p) {
  double k = 0.0;
  for (const auto& a : f.atoms) k += a.mass * detail::edge_weight(t, a.R, p.d);
  return phibar(t, f, p) - k;
}

inline double deltabar(double t, const PointCharge& c, const Params& p) { return deltabar(t, as_axis(c), p); }

/// Signed equilibrium η̄_t = (Φ̄/W) ν̄_t - Σ m_i ε̄_t(R_i).
inline CapMeasure etabar(double t, const AxisMeasure& f, const Params& p) {
  detail::require_exceptional(p, "etabar");
  detail::require_height(t, "etabar");
  const double W = sphere::sphere_energy(p);
  const double Phi = phibar(t, f, p);
  CapMeasure m;
  m.params = p;
  m.t = t;
  m.phi = Phi;
  m.mass = 1.0;
  m.edge_scale = detail::min_edge_scale(f);
  const int d = p.d;
  m.regular = [f, d, W, Phi](double u, double) {
    double v = Phi;
    for (const auto& a : f.atoms) v -= a.mass * detail::kelvin_density(u, a.R, d);
    return v / W;
  };
  double k = 0.0;
  for (const auto& a : f.atoms) k += a.mass * detail::edge_weight(t, a.R, d);
  m.boundary_coeff = t == 1.0 ? 0.0 : detail::ring_factor(t, d) * (Phi - k);
  return m;
}

inline CapMeasure etabar(double t, const PointCharge& c, const Params& p) { return etabar(t, as_axis(c), p); }

inline CapSolution solve_t0_exceptional(const AxisMeasure& f, const Params& p) {
  detail::require_exceptional(p, "solve_t0_exceptional");
  if (f.atoms.empty()) throw domain_error("solve_t0_exceptional: empty field");
  CapSolution sol;
  sol.field = f;
  sol.params = p;
  if (deltabar(1.0, f, p) >= 0.0) {
    sol.t0 = 1.0;
    sol.solved_by = SolvedBy::boundary_t_equals_1;
  } else {
    sol.t0 = cap_riesz::solve_decreasing_crossing([&](double t) { return deltabar(t, f, p); }, "solve_t0_exceptional");
    sol.solved_by = SolvedBy::interior_root;
  }
  sol.equilibrium = etabar(sol.t0, f, p);
  // the ring charge vanishes at t0 up to the root tolerance
  sol.phi_at_t0 = sol.equilibrium.phi;
  return sol;
}

inline CapSolution solve_t0_exceptional(const PointCharge& c, const Params& p) {
  return solve_t0_exceptional(as_axis(c), p);
}

/// U^{ν̄_t} at height ξ: W on the cap, W ((1+t)/(1+ξ))^{d/2-1} above it.
inline double nubar_potential(double xi, double t, const Params& p) {
  detail::require_exceptional(p, "nubar_potential");
  const double W = sphere::sphere_energy(p);
  if (xi <= t) return W;
  return W * std::pow((1.0 + t) / (1.0 + xi), 0.5 * p.d - 1.0);
}

/// U^{ε̄_t} at height ξ: |z-a|^{2-d} on the cap, r^{2-d} ((1+t)/(1+ξ))^{d/2-1} above it.
inline double epsbar_potential(double xi, double t, double R, const Params& p) {
  detail::require_exceptional(p, "epsbar_potential");
  if (xi <= t) return std::pow(sphere::dist2_to_axis_point(xi, R), 1.0 - 0.5 * p.d);
  return std::pow(sphere::dist2_to_axis_point(t, R), 1.0 - 0.5 * p.d) * std::pow((1.0 + t) / (1.0 + xi), 0.5 * p.d - 1.0);
}

/// U^{η̄_t} + Q at height ξ.
inline double weighted_potential_exceptional(double xi, double t, const AxisMeasure& f, const Params& p) {
  const double Phi = phibar(t, f, p);
  if (xi <= t) return Phi;
  const double decay = std::pow((1.0 + t) / (1.0 + xi), 0.5 * p.d - 1.0);
  double v = Phi * decay;
  for (const auto& a : f.atoms) {
    v -= a.mass * std::pow(sphere::dist2_to_axis_point(t, a.R), 1.0 - 0.5 * p.d) * decay;
    v += a.mass * std::pow(sphere::dist2_to_axis_point(xi, a.R), 1.0 - 0.5 * p.d);
  }
  return v;
}

inline double weighted_potential_exceptional(double xi, double t, const PointCharge& c, const Params& p) {
  return weighted_potential_exceptional(xi, t, as_axis(c), p);
}

/// Mass of the edge layer γ_s whose weak* limit is the ring atom:
/// sin(πc)/(πc) (1+t)^c with c = 1 - (d-s)/2.
inline double gamma_s_norm(double t, double s, int d) {
  const double c = 1.0 - 0.5 * (d - s);
  if (c == 0.0) return 1.0;
  return std::sin(std::numbers::pi * c) / (std::numbers::pi * c) * std::pow(1.0 + t, c);
}

struct WeakStarGap {
  double s = 0.0;
  double nu_gap = 0.0;   ///< max_k |∫u^k dν_{t,s} - ∫u^k dν̄_t|, k = 0..3
  double eps_gap = 0.0;  ///< same for ε
};

/// Moment gaps between the Riesz balayage measures at exponent s and their s = d-2 limits.
inline std::vector<WeakStarGap> weakstar_gap(double t, const std::vector<double>& s_values, double R, const Params& p) {
  detail::require_exceptional(p, "weakstar_gap");
  const auto nb = nubar(t, p);
  const auto eb = epsbar(t, R, p);
  std::vector<WeakStarGap> out;
  for (double s : s_values) {
    const auto ps = Params::riesz(p.d, s);
    if (!ps.is_riesz_interior()) throw domain_error("weakstar_gap: each s must lie in (d-2, d)");
    const auto ns = cap_riesz::nu_measure(t, ps);
    const auto es = cap_riesz::eps_measure(t, R, ps);
    WeakStarGap g{s, 0.0, 0.0};
    for (int k = 0; k <= 3; ++k) {
      auto f = [k](double u) { return std::pow(u, k); };
      g.nu_gap = std::max(g.nu_gap, std::abs(ns.moment(f) - nb.moment(f)));
      g.eps_gap = std::max(g.eps_gap, std::abs(es.moment(f) - eb.moment(f)));
    }
    out.push_back(g);
  }
  return out;
}

inline std::vector<WeakStarGap> weakstar_gap(double t, const std::vector<double>& s_values, const PointCharge& c,
                                             const Params& p) {
  return weakstar_gap(t, s_values, c.R, p);
}

// ---------------------------------------------------------------- log, d = 2

/// ν̄_{t,0} and ε̄_{t,0} (unit charge at R); both have mass 1.
inline std::pair<CapMeasure, CapMeasure> log_cap_measures(double t, double R, const Params& p = Params::log()) {
  detail::require_log(p, "log_cap_measures");
  detail::require_height(t, "log_cap_measures");
  if (!(R > 1.0)) throw domain_error("log_cap_measures: R must exceed 1");
  CapMeasure nu;
  nu.params = p;
  nu.t = t;
  nu.regular = [](double, double) { return 1.0; };
  nu.boundary_coeff = 0.5 * (1.0 - t);
  CapMeasure eps;
  eps.params = p;
  eps.t = t;
  eps.edge_scale = (R - 1.0) * (R - 1.0) / (2.0 * R);
  eps.regular = [R](double u, double) { return detail::kelvin_density(u, R, 2); };
  eps.boundary_coeff = 0.5 * (1.0 - t) * detail::edge_weight(t, R, 2);
  return {nu, eps};
}

inline std::pair<CapMeasure, CapMeasure> log_cap_measures(double t, const PointCharge& c) {
  return log_cap_measures(t, c.R);
}

/// Logarithmic energy of Σ_t: (1+t)/4 - log(2)/2 - log(1+t)/2.
inline double log_cap_energy(double t) {
  if (!(t > -1.0 && t <= 1.0)) throw domain_error("log_cap_energy: cap height must lie in (-1, 1]");
  return 0.25 * (1.0 + t) - 0.5 * std::numbers::ln2 - 0.5 * std::log1p(t);
}

/// F_0(Σ_t) for the log kernel and an axis field.
inline double log_f0_functional(double t, const AxisMeasure& f) {
  double v = f.total_mass() * 0.25 * (1.0 + t) + log_cap_energy(t);
  for (const auto& a : f.atoms) {
    const double R = a.R;
    v += a.mass * ((R - 1.0) * (R - 1.0) * std::log(sphere::dist2_to_axis_point(t, R)) -
                   2.0 * (R + 1.0) * (R + 1.0) * std::log(R + 1.0)) /
         (8.0 * R);
  }
  return v;
}

inline double log_f0_functional(double t, const PointCharge& c) { return log_f0_functional(t, as_axis(c)); }

/// dF_0/dt.
inline double log_f0_derivative(double t, const AxisMeasure& f) {
  double v = 0.25 * (1.0 + f.total_mass()) - 0.5 / (1.0 + t);
  for (const auto& a : f.atoms) v -= 0.25 * a.mass * (a.R - 1.0) * (a.R - 1.0) / sphere::dist2_to_axis_point(t, a.R);
  return v;
}

/// 1 + ‖λ‖ - Σ m_i (R_i+1)^2/r_i^2: positive below t0, negative above.
inline double log_edge_balance(double t, const AxisMeasure& f) {
  double v = 1.0 + f.total_mass();
  for (const auto& a : f.atoms) v -= a.mass * detail::edge_weight(t, a.R, 2);
  return v;
}

/// η̄_{t,0} = (1+‖λ‖) ν̄_{t,0} - Σ m_i ε̄_{t,0}(R_i), with phi = F_0(Σ_t).
inline CapMeasure log_etabar(double t, const AxisMeasure& f) {
  detail::require_height(t, "log_etabar");
  CapMeasure m;
  m.params = Params::log();
  m.t = t;
  m.phi = log_f0_functional(t, f);
  m.mass = 1.0;
  m.edge_scale = detail::min_edge_scale(f);
  const double top = 1.0 + f.total_mass();
  m.regular = [f, top](double u, double) {
    double v = top;
    for (const auto& a : f.atoms) v -= a.mass * detail::kelvin_density(u, a.R, 2);
    return v;
  };
  m.boundary_coeff = t == 1.0 ? 0.0 : 0.5 * (1.0 - t) * log_edge_balance(t, f);
  return m;
}

/// Support cap for the log kernel. One atom uses t0 = min{1, (R^2-2Rq+1)/(2R(1+q))};
/// several atoms solve 1 + ‖λ‖ = Σ m_i (R_i+1)^2/r_i^2.
inline CapSolution log_solve_t0(const AxisMeasure& f) {
  if (f.atoms.empty()) throw domain_error("log_solve_t0: empty field");
  CapSolution sol;
  sol.field = f;
  sol.params = Params::log();
  if (f.atoms.size() == 1) {
    const double q = f.atoms[0].mass, R = f.atoms[0].R;
    sol.t0 = std::min(1.0, (R * R - 2.0 * R * q + 1.0) / (2.0 * R * (1.0 + q)));
  } else if (log_edge_balance(1.0, f) >= 0.0) {
    sol.t0 = 1.0;
  } else {
    // the balance equals 1 at t = -1 and decreases
    auto g = [&](double t) { return log_edge_balance(t, f); };
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
    const auto r = boost::math::tools::toms748_solve(g, -1.0, 1.0, 1.0, g(1.0), tol, iters);
    sol.t0 = 0.5 * (r.first + r.second);
  }
  sol.solved_by = sol.t0 < 1.0 ? SolvedBy::interior_root : SolvedBy::boundary_t_equals_1;
  sol.equilibrium = log_etabar(sol.t0, f);
  sol.phi_at_t0 = sol.equilibrium.phi;
  return sol;
}

inline CapSolution log_solve_t0(const PointCharge& c) { return log_solve_t0(as_axis(c)); }

/// U_0^{η̄_t} + Q at height ξ: F_0(Σ_t) on the cap.
inline double log_weighted_potential(double xi, double t, const AxisMeasure& f) {
  const double F = log_f0_functional(t, f);
  if (xi <= t) return F;
  double v = F + 0.5 * std::log((1.0 + t) / (1.0 + xi));
  for (const auto& a : f.atoms)
    v += 0.5 * a.mass * std::log(sphere::dist2_to_axis_point(t, a.R) / sphere::dist2_to_axis_point(xi, a.R));
  return v;
}

inline double log_weighted_potential(double xi, double t, const PointCharge& c) {
  return log_weighted_potential(xi, t, as_axis(c));
}

/// Limit of the extremal density at the edge of the support (single charge):
/// (1+q)/q (4qR - (R-1)^2)/(R+1)^2.
inline double log_edge_density(const PointCharge& c) {
  const double q = c.q, R = c.R;
  return (1.0 + q) / q * (4.0 * q * R - (R - 1.0) * (R - 1.0)) / ((R + 1.0) * (R + 1.0));
}

}  // namespace spheq::cap_exceptional
