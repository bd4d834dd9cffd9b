#pragma once

// Point charge above the north pole: potential of σ_d at the charge, the signed
// equilibrium on the whole sphere and the full-support criterion.

#include <cmath>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "specfun.hpp"
#include "sphere.hpp"

namespace spheq::point_field {

/// U_s^σ(R p): Riesz potential of the normalized surface measure at distance R > 1.
/// For the log kernel on S^2 the log potential is not harmonic, so no mean-value shortcut.
inline double field_potential_on_axis(double R, const Params& p) {
  if (!(R > 1.0)) throw domain_error("field_potential_on_axis: R must exceed 1");
  if (p.is_log()) {
    const double a = (R + 1.0) * (R + 1.0) * std::log(R + 1.0);
    const double b = (R - 1.0) * (R - 1.0) * std::log(R - 1.0);
    return 0.5 - (a - b) / (4.0 * R);
  }
  const double z = 4.0 * R / ((R + 1.0) * (R + 1.0));
  const double omz = ((R - 1.0) / (R + 1.0)) * ((R - 1.0) / (R + 1.0));
  return std::pow(R + 1.0, -p.s) * specfun::hyp2f1(0.5 * p.s, 0.5 * p.d, p.d, z, omz);
}

inline double field_potential_on_axis(const PointCharge& c, const Params& p) { return field_potential_on_axis(c.R, p); }

/// Density (w.r.t. σ_d) at height u of the balayage of δ_{Rp} onto the whole sphere.
inline double sphere_balayage_density(double u, double R, const Params& p) {
  const double r2 = sphere::dist2_to_axis_point(u, R);
  if (p.is_log()) return std::pow((R * R - 1.0) / r2, 2);
  const double W = sphere::sphere_energy(p);
  return std::pow(R * R - 1.0, p.d - p.s) * std::pow(r2, 0.5 * p.s - p.d) / W;
}

/// Signed equilibrium on S^d: density w.r.t. σ_d and weighted energy F.
struct SphereSignedDensity {
  Params params;
  AxisMeasure field;
  double F = 0.0;       ///< constant value of the weighted potential on S^d
  double margin = 0.0;  ///< density at the north pole divided by the total field mass

  double density(double u) const {
    // log balayage preserves mass, so the constant term is 1 + ‖λ‖ rather than F/W
    double v = params.is_log() ? 1.0 + field.total_mass() : F / sphere::sphere_energy(params);
    for (const auto& a : field.atoms) v -= a.mass * sphere_balayage_density(u, a.R, params);
    return v;
  }
};

/// Signed equilibrium on the whole sphere for a discrete axis field.
inline SphereSignedDensity sphere_equilibrium(const AxisMeasure& f, const Params& p) {
  SphereSignedDensity out{p, f, 0.0, 0.0};
  out.F = sphere::sphere_energy(p);
  for (const auto& a : f.atoms) out.F += a.mass * field_potential_on_axis(a.R, p);
  out.margin = out.density(1.0) / f.total_mass();
  return out;
}

inline SphereSignedDensity sphere_equilibrium(const PointCharge& c, const Params& p) {
  return sphere_equilibrium(as_axis(c), p);
}

/// Signed equilibrium density at height u for a point charge.
inline double sphere_signed_density(double u, const PointCharge& c, const Params& p) {
  if (p.is_log()) {
    const double r2 = sphere::dist2_to_axis_point(u, c.R);
    return 1.0 + c.q - c.q * std::pow((c.R * c.R - 1.0) / r2, 2);
  }
  const double W = sphere::sphere_energy(p);
  const double U = field_potential_on_axis(c.R, p);
  const double r2 = sphere::dist2_to_axis_point(u, c.R);
  return 1.0 + c.q * U / W - c.q * std::pow(c.R * c.R - 1.0, p.d - p.s) * std::pow(r2, 0.5 * p.s - p.d) / W;
}

/// F(S^d) = W(S^d) + q U^σ(a), for both kernels.
inline double sphere_weighted_energy(const PointCharge& c, const Params& p) {
  return sphere_equilibrium(c, p).F;
}

/// Full-support margin: W/q - [(R+1)^{d-s}/(R-1)^d - U^σ(a)] for Riesz, and
/// 1/q + 1 - (R+1)^2/(R-1)^2 for log. The support is all of S^d iff margin >= 0.
inline double full_support_margin(const PointCharge& c, const Params& p) {
  const double R = c.R;
  if (p.is_log()) return 1.0 / c.q + 1.0 - std::pow((R + 1.0) / (R - 1.0), 2);
  const double W = sphere::sphere_energy(p);
  return W / c.q - (std::pow(R + 1.0, p.d - p.s) / std::pow(R - 1.0, p.d) - field_potential_on_axis(R, p));
}

/// The bracket (R+1)^{d-s}/(R-1)^d - U^σ(a) written as a positive power series in
/// z = 4R/(R+1)^2. Series summed directly; used as an independent route.
inline double full_support_threshold_series(double R, const Params& p) {
  const double z = 4.0 * R / ((R + 1.0) * (R + 1.0));
  const double s = p.s, d = p.d;
  double ratio = 1.0;  // (s/2)_k / (d)_k
  double coef = 1.0;   // (d/2)_k / k! z^k
  double sum = 0.0;
  for (int k = 0; k < 10000000; ++k) {
    const double add = (1.0 - ratio) * coef;
    sum += add;
    if (k > 10 && add < 1e-17 * sum) break;
    ratio *= (0.5 * s + k) / (d + k);
    coef *= (0.5 * d + k) / (k + 1.0) * z;
  }
  return std::pow(R + 1.0, -s) * sum;
}

/// P(d; ρ) = (ρ^d - 2 - ρ)(ρ+1)^{d-1} + ρ^d.
inline double gonchar_polynomial(int d, double rho) {
  return (std::pow(rho, d) - 2.0 - rho) * std::pow(rho + 1.0, d - 1) + std::pow(rho, d);
}

/// Coefficients c_0..c_{2d-1} of P(d; ρ) in the monomial basis.
inline std::vector<double> gonchar_coefficients(int d) {
  std::vector<double> c(2 * d, 0.0);
  double binom_dm1 = 1.0;  // C(d-1, m)
  double binom_d = 1.0;    // C(d, m)
  for (int m = 0; m <= d - 1; ++m) {
    c[m + d] += binom_dm1;
    c[m] -= binom_d + binom_dm1;
    binom_dm1 = binom_dm1 * (d - 1 - m) / (m + 1.0);
    binom_d = binom_d * (d - m) / (m + 1.0);
  }
  return c;
}

/// Unique root ρ_+ of P(d; ρ) in (1, 2]; bisection on the sign-equivalent
/// P(d; ρ)/(ρ+1)^{d-1}, which does not overflow for large d.
inline double gonchar_root(int d) {
  if (d < 2) throw domain_error("gonchar_root: dimension must be at least 2");
  auto f = [d](double rho) { return std::pow(rho, d) - 2.0 - rho + rho * std::pow(rho / (rho + 1.0), d - 1); };
  double lo = 1.0, hi = 2.0;
  if (!(f(lo) < 0.0 && f(hi) > 0.0)) throw convergence_error("gonchar_root: root not bracketed in (1,2]");
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Critical distance 1 + ρ_+: for d-1 = s and q = 1 the support is the full
/// sphere exactly when R >= 1 + ρ_+.
inline double newton_critical_distance(int d) { return 1.0 + gonchar_root(d); }

}  // namespace spheq::point_field
