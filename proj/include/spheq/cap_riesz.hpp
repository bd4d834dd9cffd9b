#pragma once

// Caps Σ_t for d-2 < s < d: balayage densities of σ_d and of the field onto Σ_t,
// their norms, Φ_s(t) = F_s(Σ_t), the signed equilibrium η_t and the support t0.

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "cap_measure.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "point_field.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "sphere.hpp"

namespace spheq::cap_riesz {

namespace detail {

inline void require_regime(const Params& p, const char* who) {
  if (!p.is_riesz_interior()) throw domain_error(std::string(who) + ": requires d-2 < s < d");
}

inline void require_height(double t, const char* who) {
  if (!(t > -1.0 && t <= 1.0)) throw domain_error(std::string(who) + ": cap height must lie in (-1, 1]");
}

/// Γ(d/2)/Γ(d-s/2)
inline double lead(const Params& p) {
  return std::exp(specfun::log_gamma(0.5 * p.d) - specfun::log_gamma(p.d - 0.5 * p.s));
}

/// (R+1)^{d-s}/r^d with r^2 = R^2 - 2Rt + 1.
inline double edge_weight(double R, double t, const Params& p) {
  return std::pow(R + 1.0, p.d - p.s) * std::pow(sphere::dist2_to_axis_point(t, R), -0.5 * p.d);
}

inline double min_edge_scale(const AxisMeasure& f) {
  double sc = 1.0;
  for (const auto& a : f.atoms) sc = std::min(sc, (a.R - 1.0) * (a.R - 1.0) / (2.0 * a.R));
  return sc;
}

/// 2F1~(1, d/2; c; z) with 1 - z supplied.
inline double freg(const Params& p, double z, double omz) {
  return specfun::hyp2f1_regularized(1.0, 0.5 * p.d, 1.0 - 0.5 * (p.d - p.s), z, omz);
}

/// Common factor ((1-t)/(1-u))^{d/2} (1-t)^{(d-s)/2}; the edge power (t-u)^{(s-d)/2} is kept apart.
inline double common(double u, double t, const Params& p) {
  return std::pow((1.0 - t) / (1.0 - u), 0.5 * p.d) * std::pow(1.0 - t, 0.5 * (p.d - p.s));
}

}  // namespace detail

/// Exponent of the edge singularity (t-u)^{(s-d)/2}.
inline double edge_exponent(const Params& p) { return 0.5 * (p.s - p.d); }

/// Regular part of ν_t' (density divided by (t-u)^{(s-d)/2}).
inline double nu_regular(double u, double gap, double t, const Params& p) {
  if (t == 1.0) return std::pow(gap, -edge_exponent(p));
  const double x = gap / (1.0 - u);
  return detail::lead(p) * detail::common(u, t, p) * detail::freg(p, x, (1.0 - t) / (1.0 - u));
}

/// Regular part of ε_t' for an atom at distance R.
inline double eps_regular(double u, double gap, double t, double R, const Params& p) {
  const double W = sphere::sphere_energy(p);
  if (t == 1.0) return std::pow(gap, -edge_exponent(p)) * point_field::sphere_balayage_density(u, R, p);
  const double r2 = sphere::dist2_to_axis_point(t, R);
  const double ru2 = sphere::dist2_to_axis_point(u, R);
  const double z = (R - 1.0) * (R - 1.0) / r2 * gap / (1.0 - u);
  const double omz = (1.0 - t) * ru2 / (r2 * (1.0 - u));
  return detail::edge_weight(R, t, p) / W * detail::lead(p) * detail::common(u, t, p) * detail::freg(p, z, omz);
}

/// Density of ν_t = bal_s(σ_d, Σ_t) with respect to σ_d, for -1 <= u < t.
inline double nu_density(double u, double t, const Params& p) {
  detail::require_regime(p, "nu_density");
  detail::require_height(t, "nu_density");
  if (t == 1.0) return 1.0;
  if (!(u >= -1.0 && u < t)) throw domain_error("nu_density: u must lie in [-1, t)");
  const double gap = t - u;
  return std::pow(gap, edge_exponent(p)) * nu_regular(u, gap, t, p);
}

/// Density of ε_t = bal_s(δ_a, Σ_t) for a unit charge at R p.
inline double eps_density(double u, double t, const PointCharge& c, const Params& p) {
  detail::require_regime(p, "eps_density");
  detail::require_height(t, "eps_density");
  if (t == 1.0) return point_field::sphere_balayage_density(u, c.R, p);
  if (!(u >= -1.0 && u < t)) throw domain_error("eps_density: u must lie in [-1, t)");
  const double gap = t - u;
  return std::pow(gap, edge_exponent(p)) * eps_regular(u, gap, t, c.R, p);
}

/// ν_t as a CapMeasure (unit phi, nominal mass ‖ν_t‖ left to the caller).
inline CapMeasure nu_measure(double t, const Params& p) {
  detail::require_regime(p, "nu_measure");
  detail::require_height(t, "nu_measure");
  CapMeasure m;
  m.params = p;
  m.t = t;
  if (t == 1.0) {
    m.regular = [](double, double) { return 1.0; };
    return m;
  }
  m.edge_exponent = edge_exponent(p);
  m.regular = [t, p](double u, double gap) { return nu_regular(u, gap, t, p); };
  return m;
}

/// ε_t for a unit charge at distance R, as a CapMeasure.
inline CapMeasure eps_measure(double t, double R, const Params& p) {
  detail::require_regime(p, "eps_measure");
  detail::require_height(t, "eps_measure");
  CapMeasure m;
  m.params = p;
  m.t = t;
  m.edge_scale = (R - 1.0) * (R - 1.0) / (2.0 * R);
  if (t == 1.0) {
    m.regular = [R, p](double u, double) { return point_field::sphere_balayage_density(u, R, p); };
    return m;
  }
  m.edge_exponent = edge_exponent(p);
  m.regular = [t, R, p](double u, double gap) { return eps_regular(u, gap, t, R, p); };
  return m;
}

/// ‖ν_t‖ = I((1+t)/2; s/2, d-s/2).
inline double nu_norm(double t, const Params& p) {
  detail::require_regime(p, "nu_norm");
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return specfun::beta_inc_reg(0.5 * (1.0 + t), 0.5 * p.s, p.d - 0.5 * p.s);
}

/// ‖ε_t‖ for a unit charge at distance R > 1, by radial quadrature.
inline double eps_norm(double t, double R, const Params& p) {
  detail::require_regime(p, "eps_norm");
  if (!(R > 1.0)) throw domain_error("eps_norm: R must exceed 1");
  if (t <= -1.0) return 0.0;
  t = std::min(t, 1.0);
  const double d = p.d, s = p.s;
  const double W = sphere::sphere_energy(p);
  const double C = std::exp((1.0 - d) * std::numbers::ln2 + specfun::log_gamma(d) - specfun::log_gamma(d - 0.5 * s) -
                            specfun::log_gamma(0.5 * s));
  const double a2 = (R - 1.0) * (R - 1.0);
  const quadrature::RadialWeight w{0.5 * s - 1.0, 0.0, d - 0.5 * s - 1.0, a2 / (2.0 * R)};
  const double I = quadrature::integrate_radial(
      [&](double, double gap) { return std::pow(a2 + 2.0 * R * ((1.0 - t) + gap), -0.5 * d); }, t, w, 1e-14);
  return C * std::pow(R + 1.0, d - s) / W * I;
}

inline double eps_norm(double t, const PointCharge& c, const Params& p) { return eps_norm(t, c.R, p); }

/// Φ_s(t) = W_s(S^d)(1 + Σ m_i ‖ε_t(R_i)‖)/‖ν_t‖.
inline double phi(double t, const AxisMeasure& f, const Params& p) {
  detail::require_regime(p, "phi");
  if (!(t > -1.0 && t <= 1.0)) throw domain_error("phi: cap height must lie in (-1, 1]");
  double num = 1.0;
  for (const auto& a : f.atoms) num += a.mass * eps_norm(t, a.R, p);
  return sphere::sphere_energy(p) * num / nu_norm(t, p);
}

inline double phi(double t, const PointCharge& c, const Params& p) { return phi(t, as_axis(c), p); }

/// Σ m_i (R_i+1)^{d-s}/r_i(t)^d.
inline double edge_field(double t, const AxisMeasure& f, const Params& p) {
  double k = 0.0;
  for (const auto& a : f.atoms) k += a.mass * detail::edge_weight(a.R, t, p);
  return k;
}

/// Δ(t) = Φ_s(t) - Σ m_i (R_i+1)^{d-s}/r_i(t)^d; the edge value of η_t' has its sign.
inline double delta(double t, const AxisMeasure& f, const Params& p) { return phi(t, f, p) - edge_field(t, f, p); }

inline double delta(double t, const PointCharge& c, const Params& p) { return delta(t, as_axis(c), p); }

/// Signed equilibrium η_t on Σ_t for the axis field, as a CapMeasure.
inline CapMeasure eta_measure(double t, const AxisMeasure& f, const Params& p) {
  detail::require_regime(p, "eta_measure");
  detail::require_height(t, "eta_measure");
  CapMeasure m;
  m.params = p;
  m.t = t;
  m.mass = 1.0;
  m.edge_scale = detail::min_edge_scale(f);
  m.phi = phi(t, f, p);
  if (t == 1.0) {
    const auto eq = point_field::sphere_equilibrium(f, p);
    m.edge_exponent = 0.0;
    m.regular = [eq](double u, double) { return eq.density(u); };
    return m;
  }
  m.edge_exponent = edge_exponent(p);
  struct Atom {
    double mK, y, R;
  };
  std::vector<Atom> atoms;
  for (const auto& a : f.atoms) {
    const double r2 = sphere::dist2_to_axis_point(t, a.R);
    atoms.push_back({a.mass * detail::edge_weight(a.R, t, p), (a.R - 1.0) * (a.R - 1.0) / r2, a.R});
  }
  const double Phi = m.phi;
  const double W = sphere::sphere_energy(p);
  const double pre = detail::lead(p) / W;
  const double hb = 0.5 * p.d, c = 1.0 - 0.5 * (p.d - p.s);
  m.regular = [=](double u, double gap) {
    const double x = gap / (1.0 - u);
    double brace = 0.0;
    if (x <= 0.7) {
      // Σ_n (d/2)_n/Γ(n+c) (Φ - Σ m K y^n) x^n keeps the edge cancellation exact
      std::vector<double> yn(atoms.size(), 1.0);
      double coef = specfun::rgamma(c);
      double xn = 1.0;
      for (int n = 0; n < specfun::detail::kMaxSeriesTerms; ++n) {
        double bracket = Phi;
        double scale = std::abs(Phi);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          bracket -= atoms[i].mK * yn[i];
          scale += atoms[i].mK * yn[i];
          yn[i] *= atoms[i].y;
        }
        const double term = coef * bracket * xn;
        brace += term;
        if (n > 2 && std::abs(coef * scale * xn) < 1e-17 * std::abs(brace)) break;
        coef *= (hb + n) / (n + c);
        xn *= x;
      }
    } else {
      brace = Phi * detail::freg(p, x, (1.0 - t) / (1.0 - u));
      for (const auto& a : atoms) {
        const double r2 = sphere::dist2_to_axis_point(t, a.R);
        const double ru2 = sphere::dist2_to_axis_point(u, a.R);
        brace -= a.mK * detail::freg(p, a.y * x, (1.0 - t) * ru2 / (r2 * (1.0 - u)));
      }
    }
    return pre * detail::common(u, t, p) * brace;
  };
  return m;
}

inline CapMeasure eta_measure(double t, const PointCharge& c, const Params& p) { return eta_measure(t, as_axis(c), p); }

inline double eta_density(double u, double t, const AxisMeasure& f, const Params& p) {
  if (t == 1.0) return point_field::sphere_equilibrium(f, p).density(u);
  if (!(u >= -1.0 && u < t)) throw domain_error("eta_density: u must lie in [-1, t)");
  return eta_measure(t, f, p).density(u);
}

inline double eta_density(double u, double t, const PointCharge& c, const Params& p) {
  return eta_density(u, t, as_axis(c), p);
}

/// Root of a function that is positive near -1 and negative at 1, by grid bracketing and TOMS 748.
template <class F>
double solve_decreasing_crossing(F&& g, const char* who) {
  constexpr int grid = 64;
  double hi = 1.0, ghi = g(1.0);
  double lo = hi, glo = ghi;
  for (int k = grid - 1; k >= 1; --k) {
    const double tk = -1.0 + 2.0 * k / grid;
    const double gk = g(tk);
    if (gk >= 0.0) {
      lo = tk;
      glo = gk;
      break;
    }
    hi = tk;
    ghi = gk;
  }
  if (lo == hi) {
    // sign change lies in (-1, -1 + 2/grid]
    double step = 2.0 / grid;
    for (int k = 0; k < 60 && lo == hi; ++k) {
      step *= 0.5;
      const double tk = -1.0 + step;
      const double gk = g(tk);
      if (gk >= 0.0) {
        lo = tk;
        glo = gk;
      } else {
        hi = tk;
        ghi = gk;
      }
    }
    if (lo == hi) throw convergence_error(std::string(who) + ": no sign change found near t = -1");
  }
  if (glo == 0.0) return lo;
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(1.0, std::abs(a)); };
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
  return 0.5 * (r.first + r.second);
}

/// Support cap of the extremal measure for the axis field.
inline CapSolution solve_t0(const AxisMeasure& f, const Params& p) {
  detail::require_regime(p, "solve_t0");
  if (f.atoms.empty()) throw domain_error("solve_t0: empty field");
  CapSolution sol;
  sol.field = f;
  sol.params = p;
  if (delta(1.0, f, p) >= 0.0) {
    sol.t0 = 1.0;
    sol.solved_by = SolvedBy::boundary_t_equals_1;
  } else {
    sol.t0 = solve_decreasing_crossing([&](double t) { return delta(t, f, p); }, "solve_t0");
    sol.solved_by = SolvedBy::interior_root;
  }
  sol.equilibrium = eta_measure(sol.t0, f, p);
  sol.phi_at_t0 = sol.equilibrium.phi;
  return sol;
}

inline CapSolution solve_t0(const PointCharge& c, const Params& p) { return solve_t0(as_axis(c), p); }

/// U_s^{ν_t} at height ξ > t: W_s I((1+t)/(1+ξ); s/2, (d-s)/2). Equals W_s on the cap.
inline double nu_potential(double xi, double t, const Params& p) {
  detail::require_regime(p, "nu_potential");
  const double W = sphere::sphere_energy(p);
  if (xi <= t) return W;
  return W * specfun::beta_inc_reg((1.0 + t) / (1.0 + xi), 0.5 * p.s, 0.5 * (p.d - p.s));
}

/// U_s^{ε_t} at height ξ for a unit charge at R; equals |z - a|^{-s} on the cap.
inline double eps_potential(double xi, double t, double R, const Params& p) {
  detail::require_regime(p, "eps_potential");
  const double rho2 = sphere::dist2_to_axis_point(xi, R);
  if (xi <= t) return std::pow(rho2, -0.5 * p.s);
  const double r2 = sphere::dist2_to_axis_point(t, R);
  const double x = std::min(1.0, rho2 / r2 * (1.0 + t) / (1.0 + xi));
  return std::pow(rho2, -0.5 * p.s) * specfun::beta_inc_reg(x, 0.5 * p.s, 0.5 * (p.d - p.s));
}

/// U_s^{η_t}(z) + Q(z) at height ξ, closed form.
inline double weighted_potential(double xi, double t, const AxisMeasure& f, const Params& p) {
  detail::require_regime(p, "weighted_potential");
  if (!(xi >= -1.0 && xi <= 1.0)) throw domain_error("weighted_potential: height must lie in [-1, 1]");
  const double Phi = phi(t, f, p);
  if (xi <= t) return Phi;
  const double a = 0.5 * (p.d - p.s), b = 0.5 * p.s;
  double v = Phi - Phi * specfun::beta_inc_reg((xi - t) / (1.0 + xi), a, b);
  for (const auto& at : f.atoms) {
    const double rho2 = sphere::dist2_to_axis_point(xi, at.R);
    const double r2 = sphere::dist2_to_axis_point(t, at.R);
    const double x = std::min(1.0, (at.R + 1.0) * (at.R + 1.0) * (xi - t) / (r2 * (1.0 + xi)));
    v += at.mass * std::pow(rho2, -0.5 * p.s) * specfun::beta_inc_reg(x, a, b);
  }
  return v;
}

inline double weighted_potential(double xi, double t, const PointCharge& c, const Params& p) {
  return weighted_potential(xi, t, as_axis(c), p);
}

/// Coefficient of the (ξ-t)^{(d-s)/2-1} term in the outward derivative of the weighted
/// potential at the edge; zero at t0, negative for t < t0 and positive for t > t0.
inline double edge_derivative_diagnostic(double t, const AxisMeasure& f, const Params& p) {
  detail::require_regime(p, "edge_derivative_diagnostic");
  if (!(t > -1.0 && t < 1.0)) throw domain_error("edge_derivative_diagnostic: cap height must lie in (-1, 1)");
  const double c = std::exp(specfun::log_gamma(0.5 * p.d) - specfun::log_gamma(0.5 * (p.d - p.s)) -
                            specfun::log_gamma(0.5 * p.s));
  return c * (-delta(t, f, p)) * std::pow(1.0 + t, edge_exponent(p));
}

inline double edge_derivative_diagnostic(double t, const PointCharge& c, const Params& p) {
  return edge_derivative_diagnostic(t, as_axis(c), p);
}

}  // namespace spheq::cap_riesz
