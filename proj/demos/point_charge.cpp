// Support cap and extremal density for a unit charge at distance R on S^2 with the
// Coulomb kernel (s = 1), checked against the variational conditions by quadrature.
//
//   demo_point_charge [R]

#include <cstdio>
#include <cstdlib>

#include "spheq/spheq.hpp"

int main(int argc, char** argv) {
  using namespace spheq;
  const double R = argc > 1 ? std::atof(argv[1]) : 1.3;
  const auto p = Params::riesz(2, 1.0);
  PointCharge c;
  try {
    c = make_charge(1.0, R, p);
  } catch (const domain_error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  std::printf("critical distance 1 + rho_+ = %.15f\n", point_field::newton_critical_distance(2));
  std::printf("full-support margin at R = %g: %.6g\n", c.R, point_field::full_support_margin(c, p));

  const auto sol = cap_riesz::solve_t0(c, p);
  std::printf("t0 = %.12f (%s), Phi(t0) = %.12f\n", sol.t0, to_string(sol.solved_by).c_str(), sol.phi_at_t0);

  std::printf("\n%8s %14s\n", "u", "density");
  for (int i = 0; i <= 8; ++i) {
    const double gap = (sol.t0 + 1.0) * (8 - i) / 8.0;
    if (gap == 0.0 && sol.equilibrium.edge_exponent != 0.0) break;
    std::printf("%8.4f %14.8f\n", sol.t0 - gap, sol.equilibrium.density_gap(sol.t0 - gap, gap));
  }

  const auto rep = oracle::check_variational(sol, 24);
  std::printf("\nquadrature check: F = %.12f, max |U+Q-F| on cap = %.2e, min (U+Q-F) off cap = %.2e\n",
              rep.F_estimate, rep.max_violation_on_support, rep.min_margin_off_support);
  return rep.passed(1e-6) ? 0 : 1;
}
