#include <gtest/gtest.h>

#include "oracles.hpp"
#include "spheq/quadrature.hpp"
#include "spheq/sphere.hpp"

using namespace spheq;
using namespace spheq::quadrature;

TEST(GaussJacobi, ExactForPolynomialMoments) {
  for (auto [a, b] : {std::pair{0.0, 0.0}, {-0.5, 0.5}, {-0.9, 0.3}, {1.5, -0.25}, {-0.995, 0.5}}) {
    for (int n : {1, 4, 16, 64, 257}) {
      const auto r = gauss_jacobi(n, a, b);
      for (int k = 0; k <= std::min(2 * n - 1, 12); ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r->weights[i] * std::pow(r->nodes[i], k);
        // ∫ (1-x)^a (1+x)^b x^k dx via the substitution x = 2v - 1 and a binomial sum
        double ref = 0.0;
        for (int j = 0; j <= k; ++j) {
          const double binom = boost::math::binomial_coefficient<double>(k, j);
          ref += binom * std::pow(2.0, j) * ((k - j) % 2 ? -1.0 : 1.0) * std::pow(2.0, a + b + 1) *
                 boost::math::beta(a + 1, b + 1 + j);
        }
        double scale = 0.0;
        for (int j = 0; j <= k; ++j)
          scale += boost::math::binomial_coefficient<double>(k, j) * std::pow(2.0, j + a + b + 1) * boost::math::beta(a + 1, b + 1 + j);
        EXPECT_NEAR(s, ref, 1e-13 * scale) << a << " " << b << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(GaussJacobi, NodesStrictlyInsideAndDescending) {
  const auto r = gauss_jacobi(512, -0.7, 0.5);
  for (std::size_t i = 0; i < r->nodes.size(); ++i) {
    EXPECT_GT(r->nodes[i], -1.0);
    EXPECT_LT(r->nodes[i], 1.0);
    EXPECT_GT(r->weights[i], 0.0);
    if (i) EXPECT_LT(r->nodes[i], r->nodes[i - 1]);
  }
}

TEST(TanhSinh, EndpointSingularities) {
  auto f = [](double, double da, double) { return std::pow(da, -0.9); };
  EXPECT_NEAR(tanh_sinh(f, 0.0, 1.0, 1e-12), 10.0, 1e-9);
  auto g = [](double, double da, double db) { return std::log(da) * std::pow(db, -0.5); };
  const double ref = oracle_ref::integrate([](double x) { return std::log(x) / std::sqrt(1 - x); }, 0.0, 1.0);
  EXPECT_NEAR(tanh_sinh(g, 0.0, 1.0, 1e-12), ref, 1e-10);
}

TEST(RadialRule, MatchesAdaptiveReference) {
  for (double t : {-0.9, 0.0, 0.7, 0.999, 1.0 - 1e-7, 1.0}) {
    const RadialWeight w{0.5, -0.6, 0.5, 1.0};
    auto g = [](double u, double) { return std::cos(3 * u) + 1.0 / (2.1 - u); };
    const double got = integrate_radial(g, t, w);
    const double ref = oracle_ref::integrate_dist(
        [&](double u, double da, double db) {
          return (std::cos(3 * u) + 1.0 / (2.1 - u)) * std::pow(da, 0.5) * std::pow(db, -0.6) *
                 std::pow((1 - t) + db, 0.5);
        },
        -1.0, t);
    EXPECT_NEAR(got, ref, 1e-10 * std::abs(ref)) << t;
  }
}

TEST(RadialRule, SphereWeightsSumToCapMass) {
  for (int d : {2, 3, 4, 7}) {
    const auto p = Params::riesz(d, 0.5 * d);
    for (double t : {-0.5, 0.3, 1.0}) {
      const auto q = sphere::build_quadrature(t, p, 64, 0.0);
      double s = 0.0;
      for (double w : q.weights) s += w;
      const double ref = specfun::beta_inc_reg(0.5 * (1 + t), 0.5 * d, 0.5 * d);
      EXPECT_NEAR(s, ref, 1e-12) << d << " " << t;
    }
  }
}

TEST(RadialRule, RejectsBadHeights) {
  EXPECT_THROW(radial_rule(-1.0, {}, 8), spheq::domain_error);
  EXPECT_THROW(radial_rule(1.5, {}, 8), spheq::domain_error);
}
