#include <gtest/gtest.h>

#include <random>

#include "cap_oracles.hpp"
#include "spheq/axis_field.hpp"

using namespace spheq;
using namespace spheq::axis_field;

namespace {

AxisMeasure random_measure(std::mt19937_64& rng, int atoms) {
  std::uniform_real_distribution<double> rr(1.15, 3.5), mm(0.1, 1.0);
  AxisMeasure f;
  for (int i = 0; i < atoms; ++i) f.atoms.push_back({rr(rng), mm(rng)});
  return f;
}

double cap_weighted_potential(const CapMeasure& m, const AxisMeasure& f, double xi) {
  const auto& p = m.params;
  double U = oracle_ref::cap_potential(p, m.t, xi, [&](double u, double gap) { return m.density_gap(u, gap); });
  if (m.boundary_coeff != 0.0) {
    const double ring = p.is_log() ? sphere::log_kappa(m.t, xi) : sphere::riesz_kappa(m.t, xi, p.d, p.s, xi - m.t);
    U += m.boundary_coeff * ring;
  }
  return U + axis_Q(xi, f, p);
}

}  // namespace

TEST(AxisQ, SuperpositionAndReduction) {
  std::mt19937_64 rng(41);
  for (const auto& p : {Params::riesz(2, 1.0), Params::riesz(3, 1.0), Params::log()}) {
    const auto f1 = random_measure(rng, 2), f2 = random_measure(rng, 3);
    AxisMeasure both = f1;
    both.atoms.insert(both.atoms.end(), f2.atoms.begin(), f2.atoms.end());
    for (double xi : {-1.0, -0.3, 0.4, 1.0}) {
      EXPECT_NEAR(axis_Q(xi, both, p), axis_Q(xi, f1, p) + axis_Q(xi, f2, p), 1e-14);
    }
  }
  EXPECT_EQ(axis_Q(1.0, AxisMeasure{{{2.0, 1.0}}}, Params::log()), 0.0);
  const auto p = Params::riesz(3, 1.5);
  EXPECT_DOUBLE_EQ(axis_Q(0.2, AxisMeasure{{{1.7, 0.4}}}, p), 0.4 * std::pow(1.7 * 1.7 - 2 * 1.7 * 0.2 + 1, -0.75));
  EXPECT_THROW(axis_solve_t(AxisMeasure{}, p), spheq::domain_error);
  EXPECT_THROW(regime(Params::riesz(3, 0.5)), spheq::domain_error);
}

TEST(AxisQ, InversionOfInsideCharges) {
  const auto p = Params::riesz(3, 1.4);
  const auto f = make_axis({{0.5, 0.3}}, p);
  ASSERT_EQ(f.atoms.size(), 1u);
  EXPECT_DOUBLE_EQ(f.atoms[0].R, 2.0);
  EXPECT_DOUBLE_EQ(f.atoms[0].mass, 0.3 * std::pow(0.5, -1.4));
  // on the sphere the two charges generate the same field
  for (double xi : {-1.0, -0.2, 0.6, 1.0}) {
    const double inside = 0.3 * std::pow(0.25 - 2 * 0.5 * xi + 1, -0.7);
    EXPECT_NEAR(axis_Q(xi, f, p), inside, 1e-13 * inside);
  }
  EXPECT_THROW(make_axis({{0.5, 1.0}}, Params::log()), spheq::domain_error);
}

TEST(AxisSphere, SingleAtomMatchesPointChargeAndUnitMass) {
  const auto p = Params::riesz(3, 1.2);
  const PointCharge c{0.6, 2.2};
  const auto eq = axis_sphere_equilibrium(as_axis(c), p);
  for (double u : {-1.0, 0.0, 0.7, 1.0}) EXPECT_EQ(eq.density(u), point_field::sphere_equilibrium(c, p).density(u));
  EXPECT_NEAR(axis_full_support_margin(as_axis(c), p), c.q * point_field::full_support_margin(c, p), 1e-12);
  std::mt19937_64 rng(42);
  const auto f = random_measure(rng, 3);
  const auto eq3 = axis_sphere_equilibrium(f, p);
  const double mass = oracle_ref::cap_integral(3, 1.0, [&](double u, double) { return eq3.density(u); });
  EXPECT_NEAR(mass, 1.0, 1e-10);
  // log criterion: 1 + 1/2 - (1/2)(3/1)^2 = -3
  EXPECT_NEAR(axis_full_support_margin(AxisMeasure{{{2.0, 0.5}}}, Params::log()), -3.0, 1e-14);
  EXPECT_LT(axis_solve_t(AxisMeasure{{{2.0, 0.5}}}, Params::log()).t0, 1.0);
}

TEST(AxisSolve, SingleAtomReducesExactly) {
  const PointCharge c{1.0, 1.3};
  const auto pr = Params::riesz(2, 1.0);
  const auto a = axis_solve_t(as_axis(c), pr);
  const auto b = cap_riesz::solve_t0(c, pr);
  EXPECT_EQ(a.t0, b.t0);
  EXPECT_EQ(a.phi_at_t0, b.phi_at_t0);
  EXPECT_EQ(a.equilibrium.density(-0.4), b.equilibrium.density(-0.4));
  const auto pe = Params::riesz(3, 1.0);
  EXPECT_EQ(axis_solve_t(as_axis(c), pe).t0, cap_exceptional::solve_t0_exceptional(c, pe).t0);
  const PointCharge lc{1.0, 2.0};
  EXPECT_EQ(axis_solve_t(as_axis(lc), Params::log()).t0, 0.125);
  EXPECT_EQ(axis_f0_functional(0.3, as_axis(lc)), cap_exceptional::log_f0_functional(0.3, lc));
}

TEST(AxisSolve, ThreeAtomsAllRegimes) {
  std::mt19937_64 rng(43);
  for (const auto& p : {Params::riesz(2, 1.0), Params::riesz(3, 1.7), Params::riesz(3, 1.0), Params::log()}) {
    AxisMeasure f = random_measure(rng, 3);
    for (auto& a : f.atoms) a.R = 1.1 + 0.3 * (a.R - 1.15);  // close charges so the cap is proper
    const auto sol = axis_solve_t(f, p);
    ASSERT_LT(sol.t0, 1.0) << p.d << " " << p.s;
    const auto& m = sol.equilibrium;
    EXPECT_NEAR(m.quadrature_mass(), 1.0, 1e-9);
    if (!p.is_log() && !p.is_exceptional()) EXPECT_LT(std::abs(cap_riesz::delta(sol.t0, f, p)), 1e-10);
    EXPECT_NEAR(m.boundary_coeff, 0.0, 1e-10);
    for (int i = 0; i < 200; ++i) EXPECT_GE(m.density(-1 + (sol.t0 + 1) * i / 200.0), -1e-10);
    for (double xi : {-0.95, -0.5, sol.t0 - 0.02, sol.t0 + 0.05, 1.0}) {
      if (xi < -1 || xi > 1) continue;
      const double U = cap_weighted_potential(m, f, xi);
      EXPECT_NEAR(U, axis_weighted_potential(xi, sol.t0, f, p), 1e-7 * std::max(1.0, std::abs(sol.phi_at_t0)))
          << p.d << " " << p.s << " " << xi;
      if (xi <= sol.t0) EXPECT_NEAR(U, sol.phi_at_t0, 1e-7 * std::max(1.0, std::abs(sol.phi_at_t0)));
      else EXPECT_GT(U, sol.phi_at_t0);
    }
    if (p.is_log()) {
      EXPECT_NEAR(m.density(sol.t0), axis_log_edge_density(sol.t0, f), 1e-12);
      EXPECT_GT(axis_log_edge_density(sol.t0, f), 0.0);
      const double h = 1e-5;
      EXPECT_NEAR((axis_f0_functional(sol.t0 + h, f) - axis_f0_functional(sol.t0 - h, f)) / (2 * h), 0.0, 1e-8);
    }
  }
}

TEST(AxisSolve, DensityHasAtMostOneSignChange) {
  std::mt19937_64 rng(44);
  const auto p = Params::riesz(2, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_measure(rng, 3);
    for (double t : {-0.5, 0.0, 0.5, 0.9}) {
      const auto m = axis_eta(t, f, p);
      int changes = 0;
      double prev = m.density(-1.0);
      for (int i = 1; i < 400; ++i) {
        const double v = m.density(-1 + (t + 1) * i / 400.0);
        if ((v < 0) != (prev < 0)) ++changes;
        prev = v;
      }
      EXPECT_LE(changes, 1);
      EXPECT_GT(m.density(-1.0), 0.0);
    }
  }
}

TEST(AxisWeakStar, TwoAtomEpsilonGapsDecay) {
  const auto pe = Params::riesz(3, 1.0);
  const AxisMeasure f{{{1.5, 0.4}, {2.5, 0.6}}};
  const double t = 0.0;
  double prev = 1e300;
  for (double s : {1.5, 1.2, 1.05, 1.01}) {
    const auto ps = Params::riesz(3, s);
    double gap = 0.0;
    for (int k = 0; k <= 3; ++k) {
      auto fk = [k](double u) { return std::pow(u, k); };
      double a = 0.0, b = 0.0;
      for (const auto& at : f.atoms) {
        a += at.mass * cap_riesz::eps_measure(t, at.R, ps).moment(fk);
        b += at.mass * cap_exceptional::epsbar(t, at.R, pe).moment(fk);
      }
      gap = std::max(gap, std::abs(a - b));
    }
    EXPECT_LT(gap, prev) << s;
    prev = gap;
  }
}
