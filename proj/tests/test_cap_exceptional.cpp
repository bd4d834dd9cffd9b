#include <gtest/gtest.h>

#include "cap_oracles.hpp"
#include "spheq/cap_exceptional.hpp"

using namespace spheq;
using namespace spheq::cap_exceptional;

namespace {

// U^μ(ξ) for a cap measure, ring atom included, by brute-force quadrature
double potential(const CapMeasure& m, double xi) {
  const auto& p = m.params;
  double U = oracle_ref::cap_potential(p, m.t, xi, [&](double u, double gap) { return m.density_gap(u, gap); });
  if (m.boundary_coeff != 0.0) {
    const double ring = p.is_log() ? sphere::log_kappa(m.t, xi) : sphere::boundary_potential(m.t, xi, p);
    U += m.boundary_coeff * ring;
  }
  return U;
}

double field(double xi, const AxisMeasure& f, const Params& p) { return axis_field_value(xi, f, p); }

}  // namespace

TEST(Nubar, NormAndPotentials) {
  for (int d : {3, 4, 6}) {
    const auto p = Params::riesz(d, d - 2);
    const double W = sphere::sphere_energy(p);
    for (double t : {-0.6, 0.0, 0.45}) {
      const auto m = nubar(t, p);
      // (d-2)/4 W ∫_{-1}^t (1+u)^{d/2-2}(1-u)^{d/2} du
      const double alt = 0.25 * (d - 2) * W *
                         oracle_ref::integrate_dist(
                             [&](double u, double da, double) { return std::pow(da, 0.5 * d - 2) * std::pow(1 - u, 0.5 * d); },
                             -1.0, t);
      EXPECT_NEAR(m.mass, alt, 1e-10) << d << " " << t;
      EXPECT_NEAR(m.quadrature_mass(), m.mass, 1e-12);
      for (double xi : {t - 0.3, t + 0.02, t + 0.3, 0.97}) {
        if (xi <= -1 || xi >= 1) continue;
        EXPECT_NEAR(potential(m, xi), nubar_potential(xi, t, p), 1e-8 * W) << d << " " << t << " " << xi;
        if (xi > t) EXPECT_LT(nubar_potential(xi, t, p), W);
      }
    }
    const auto full = nubar(1.0, p);
    EXPECT_EQ(full.boundary_coeff, 0.0);
    EXPECT_NEAR(full.mass, 1.0, 1e-14);
  }
  EXPECT_THROW(nubar(0.0, Params::riesz(3, 1.5)), spheq::domain_error);
}

TEST(Epsbar, NormAndPotentials) {
  for (int d : {3, 5}) {
    const auto p = Params::riesz(d, d - 2);
    for (double R : {1.3, 2.5}) {
      for (double t : {-0.4, 0.3}) {
        const auto m = epsbar(t, R, p);
        // (d-2)/4 (R+1)^2 ∫ (1+u)^{d/2-2}(1-u)^{d/2}/(R^2-2Ru+1)^{d/2} du
        const double alt = 0.25 * (d - 2) * (R + 1) * (R + 1) *
                           oracle_ref::integrate_dist(
                               [&](double u, double da, double) {
                                 return std::pow(da, 0.5 * d - 2) * std::pow(1 - u, 0.5 * d) *
                                        std::pow(sphere::dist2_to_axis_point(u, R), -0.5 * d);
                               },
                               -1.0, t);
        EXPECT_NEAR(m.mass, alt, 1e-10) << d << " " << R << " " << t;
        for (double xi : {t - 0.5, t - 0.01, t + 0.05, 0.9}) {
          const double U = potential(m, xi);
          EXPECT_NEAR(U, epsbar_potential(xi, t, R, p), 1e-8 * U) << d << " " << R << " " << t << " " << xi;
        }
      }
      // t = 1: full-sphere balayage at s = d-2
      const auto full = epsbar(1.0, R, p);
      EXPECT_EQ(full.boundary_coeff, 0.0);
      EXPECT_NEAR(full.density(0.2), point_field::sphere_balayage_density(0.2, R, p), 1e-14);
    }
  }
}

TEST(SolveT0Exceptional, RingChargeVanishesAndPotentialIsConstant) {
  const auto p = Params::riesz(3, 1.0);
  for (auto [q, R] : {std::pair{1.0, 1.5}, {0.5, 1.2}, {2.0, 2.0}}) {
    const PointCharge c{q, R};
    const auto sol = solve_t0_exceptional(c, p);
    ASSERT_EQ(sol.solved_by, SolvedBy::interior_root) << q << " " << R;
    const auto& m = sol.equilibrium;
    EXPECT_NEAR(m.boundary_coeff, 0.0, 1e-10);
    EXPECT_GT(m.density(sol.t0 - 1e-12), 0.0);
    EXPECT_NEAR(m.quadrature_mass(), 1.0, 1e-10);
    // interior density proportional to 1 - (R-1)^2 r^d / r_u^{d+2}
    const double r2 = sphere::dist2_to_axis_point(sol.t0, R);
    double ratio0 = 0;
    for (double u : {-0.9, -0.3, sol.t0 - 0.01}) {
      const double shape = 1 - (R - 1) * (R - 1) * std::pow(r2, 1.5) / std::pow(sphere::dist2_to_axis_point(u, R), 2.5);
      const double ratio = m.density(u) / shape;
      if (ratio0 == 0) ratio0 = ratio;
      EXPECT_NEAR(ratio, ratio0, 1e-10 * ratio0);
    }
    const AxisMeasure f = as_axis(c);
    for (double xi : {-0.9, -0.2, sol.t0 - 0.05, sol.t0 + 0.05, 0.95}) {
      if (xi > 1) continue;
      const double U = potential(m, xi) + field(xi, f, p);
      EXPECT_NEAR(U, weighted_potential_exceptional(xi, sol.t0, c, p), 1e-8 * sol.phi_at_t0) << xi;
      if (xi > sol.t0) EXPECT_GT(U, sol.phi_at_t0);
    }
  }
}

TEST(SolveT0Exceptional, RingChargeSignAroundT0) {
  const auto p = Params::riesz(4, 2.0);
  const PointCharge c{1.0, 1.5};
  const auto sol = solve_t0_exceptional(c, p);
  EXPECT_GT(etabar(sol.t0 - 0.1, c, p).boundary_coeff, 0.0);
  EXPECT_LT(etabar(sol.t0 + 0.1, c, p).boundary_coeff, 0.0);
  EXPECT_GT(deltabar(sol.t0 - 0.1, c, p), 0.0);
  // far charge: whole sphere
  const auto far = solve_t0_exceptional(PointCharge{0.1, 6.0}, p);
  EXPECT_EQ(far.t0, 1.0);
  EXPECT_NEAR(far.phi_at_t0, point_field::sphere_equilibrium(PointCharge{0.1, 6.0}, p).F, 1e-10);
}

TEST(WeakStar, MomentGapsDecrease) {
  const auto p = Params::riesz(3, 1.0);
  const auto gaps = weakstar_gap(0.0, {1.5, 1.2, 1.05, 1.01}, PointCharge{1.0, 2.0}, p);
  ASSERT_EQ(gaps.size(), 4u);
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    EXPECT_LT(gaps[i].nu_gap, gaps[i - 1].nu_gap) << i;
    EXPECT_LT(gaps[i].eps_gap, gaps[i - 1].eps_gap) << i;
  }
  EXPECT_LT(gaps.back().nu_gap, 0.05);
  // f = 1 gap is the norm difference
  const double n_s = cap_riesz::nu_norm(0.0, Params::riesz(3, 1.01));
  EXPECT_LE(std::abs(n_s - nubar_norm(0.0, p)), gaps.back().nu_gap + 1e-12);
}

TEST(WeakStar, EdgeLayerMass) {
  for (double s : {1.9, 1.5, 1.1, 1.001}) {
    for (double t : {-0.5, 0.0, 0.9}) {
      const double g = gamma_s_norm(t, s, 3);
      EXPECT_LE(g, 2.0);
      EXPECT_GT(g, 0.0);
    }
  }
  EXPECT_NEAR(gamma_s_norm(0.3, 1.0 + 1e-9, 3), 1.0, 1e-8);
}

TEST(LogCap, MeasuresHaveUnitMassAndKnownPotentials) {
  const auto p = Params::log();
  for (double t : {-0.7, 0.0, 0.6}) {
    for (double R : {1.4, 3.0}) {
      const auto [nu, eps] = log_cap_measures(t, R);
      EXPECT_NEAR(nu.quadrature_mass(), 1.0, 1e-13);
      EXPECT_NEAR(eps.quadrature_mass(), 1.0, 1e-11) << t << " " << R;
      for (double xi : {t - 0.2, t + 0.1, 0.99}) {
        const double Un = potential(nu, xi);
        const double expect = log_cap_energy(t) + (xi > t ? 0.5 * std::log((1 + t) / (1 + xi)) : 0.0);
        EXPECT_NEAR(Un, expect, 1e-9) << t << " " << xi;
        if (xi <= t) {
          EXPECT_NEAR(potential(eps, xi) + 0.5 * std::log(sphere::dist2_to_axis_point(xi, R)),
                      potential(eps, t - 0.05) + 0.5 * std::log(sphere::dist2_to_axis_point(t - 0.05, R)), 1e-9);
        }
      }
    }
  }
}

TEST(LogCap, ReferenceChargeClosedForms) {
  const PointCharge c{1.0, 2.0};
  const auto sol = log_solve_t0(c);
  EXPECT_NEAR(sol.t0, 0.125, 1e-15);
  EXPECT_NEAR(log_edge_density(c), 14.0 / 9.0, 1e-14);
  EXPECT_NEAR(sol.equilibrium.density(sol.t0), 14.0 / 9.0, 1e-12);
  EXPECT_NEAR(sol.equilibrium.boundary_coeff, 0.0, 1e-14);
  const double h = 1e-5;
  EXPECT_NEAR((log_f0_functional(sol.t0 + h, c) - log_f0_functional(sol.t0 - h, c)) / (2 * h), 0.0, 1e-8);
  EXPECT_NEAR(log_f0_derivative(sol.t0, as_axis(c)), 0.0, 1e-14);
  EXPECT_NEAR(sol.equilibrium.quadrature_mass(), 1.0, 1e-12);
  // bisection on 1 + q = q(R+1)^2/r^2
  double lo = -1, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (2.0 > 9.0 / sphere::dist2_to_axis_point(mid, 2.0) ? lo : hi) = mid;
  }
  EXPECT_NEAR(sol.t0, lo, 1e-12);
}

TEST(LogCap, F0StructureAndQuadrature) {
  const PointCharge c{0.7, 1.6};
  const auto f = as_axis(c);
  const auto sol = log_solve_t0(c);
  ASSERT_LT(sol.t0, 1.0);
  EXPECT_GT(log_f0_functional(-1 + 1e-8, c), 5.0);
  for (double t = -0.95; t < 0.99; t += 0.1) {
    const double h = 1e-6;
    const double fd = (log_f0_functional(t + h, c) - log_f0_functional(t - h, c)) / (2 * h);
    if (t < sol.t0 - 1e-3) EXPECT_LT(fd, 0.0);
    if (t > sol.t0 + 1e-3) EXPECT_GT(fd, 0.0);
    EXPECT_GE(log_f0_functional(t, c), sol.phi_at_t0 - 1e-14);
    // F_0 = W_0(Σ_t) + ∫ Q dν̄_t
    const auto nu = log_cap_measures(t, c.R).first;
    const double Qint = nu.moment([&](double u) { return -0.5 * c.q * std::log(sphere::dist2_to_axis_point(u, c.R)); });
    EXPECT_NEAR(log_f0_functional(t, c), log_cap_energy(t) + Qint, 1e-10) << t;
    EXPECT_NEAR(log_f0_derivative(t, f), fd, 1e-6);
  }
  // ring charge sign
  EXPECT_GT(log_etabar(sol.t0 - 0.1, f).boundary_coeff, 0.0);
  EXPECT_LT(log_etabar(sol.t0 + 0.1, f).boundary_coeff, 0.0);
  // far charge: whole sphere
  EXPECT_EQ(log_solve_t0(PointCharge{0.1, 5.0}).t0, 1.0);
}

TEST(LogCap, WeightedPotentialMatchesQuadrature) {
  const AxisMeasure f{{{1.8, 0.6}, {3.0, 0.4}}};
  const auto p = Params::log();
  for (double t : {-0.2, 0.3, 1.0}) {
    const auto m = log_etabar(t, f);
    for (double xi : {-0.9, t - 0.1, std::min(1.0, t + 0.1), 0.99}) {
      const double U = potential(m, xi) + field(xi, f, p);
      EXPECT_NEAR(U, log_weighted_potential(xi, t, f), 1e-9) << t << " " << xi;
    }
  }
  const auto sol = log_solve_t0(f);
  EXPECT_NEAR(log_edge_balance(sol.t0, f), 0.0, 1e-14);
  EXPECT_NEAR(log_solve_t0(AxisMeasure{{{2.0, 1.0}}}).t0, 0.125, 1e-15);
}
