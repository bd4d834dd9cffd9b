#pragma once

// Independent checks of the closed forms: potentials of cap measures by direct
// quadrature, Gauss variational inequalities, a discrete particle minimizer on S^2
// and a Monte Carlo estimate of the sphere energy.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "axis_field.hpp"
#include "cap_measure.hpp"
#include "errors.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"
#include "sphere.hpp"

namespace spheq::oracle {

namespace detail {

/// κ(u, ξ) with ξ - u passed exactly.
inline double ring_kernel(const Params& p, double u, double xi, double xi_minus_u) {
  if (xi == 1.0 || xi == -1.0) {
    // pole: the ring is a point at distance^2 = 2|ξ - u|
    const double r2 = 2.0 * std::abs(xi_minus_u);
    return p.is_log() ? -0.5 * std::log(r2) : std::pow(r2, -0.5 * p.s);
  }
  if (!p.is_log()) return sphere::riesz_kappa(u, xi, p.d, p.s, xi_minus_u);
  if (xi_minus_u >= 0.0) return -0.5 * (std::log1p(xi) + std::log((1.0 - xi) + xi_minus_u));
  return -0.5 * (std::log1p(-xi) + std::log((1.0 + xi) - xi_minus_u));
}

constexpr double kRelTol = 1e-11;
constexpr double kAbsTol = 1e-14;

}  // namespace detail

/// U^μ(ξ) for a cap measure by tanh-sinh quadrature. The u-range is split at ξ; on the
/// piece ending at the edge the substitution v = (t-u)^{1+e} removes the edge power.
inline double potential_of(const CapMeasure& m, double xi) {
  const Params& p = m.params;
  if (!(xi >= -1.0 && xi <= 1.0)) throw domain_error("potential_of: height must lie in [-1, 1]");
  const double t = m.t;
  const double e = 0.5 * p.d - 1.0;
  const double jac = e == 0.0 ? 0.0 : e;
  auto weight = [&](double one_plus_u, double one_minus_u) {
    return jac == 0.0 ? 1.0 : std::pow(one_plus_u * one_minus_u, jac);
  };
  // kernel times weight; at a pole the two are combined in logs since the kernel
  // can overflow where the weight underflows
  const bool pole = (xi == 1.0 || xi == -1.0) && !p.is_log();
  auto kernel_weight = [&](double u, double gx, double opu, double omu) {
    if (!pole) return detail::ring_kernel(p, u, xi, gx) * weight(opu, omu);
    const double lw = jac == 0.0 ? 0.0 : jac * std::log(opu * omu);
    return std::exp(-0.5 * p.s * std::log(2.0 * std::abs(gx)) + lw);
  };
  // plain piece [a, b]; gap_xi(da, db) gives ξ - u, gap_t(da, db) gives t - u
  auto plain = [&](double a, double b, auto gap_xi, auto gap_t) {
    if (!(b > a)) return 0.0;
    return quadrature::tanh_sinh(
        [&](double u, double da, double db) {
          const double opu = a == -1.0 ? da : 1.0 + u;
          const double omu = b == 1.0 ? db : 1.0 - u;
          const double gx = gap_xi(da, db);
          if (std::abs(gx) < 1e-200) return 0.0;  // integrable singularity, avoids overflow
          return kernel_weight(u, gx, opu, omu) * m.regular(u, gap_t(da, db)) *
                 (m.edge_exponent == 0.0 ? 1.0 : std::pow(gap_t(da, db), m.edge_exponent));
        },
        a, b, detail::kRelTol, detail::kAbsTol);
  };
  // edge piece [a, t] with the substitution g = t - u = v^{1/(1+e)}
  auto edge = [&](double a) {
    const double pw = 1.0 + m.edge_exponent;
    const double L = std::pow(t - a, pw);
    return quadrature::tanh_sinh(
               [&](double, double dv0, double) {
                 const double g = std::pow(dv0, 1.0 / pw);
                 if (!(g > 1e-200)) return 0.0;  // underflow at the edge
                 const double u = t - g;
                 return kernel_weight(u, (xi - t) + g, 1.0 + u, (1.0 - t) + g) * m.regular(u, g);
               },
               0.0, L, detail::kRelTol, detail::kAbsTol) /
           pw;
  };
  const bool singular_edge = m.edge_exponent != 0.0;
  double U = 0.0;
  if (xi >= t) {
    const double mid = std::max(-1.0, t - 0.5 * (1.0 + t));
    U += plain(-1.0, mid, [&](double, double db) { return (xi - mid) + db; },
               [&](double, double db) { return (t - mid) + db; });
    if (singular_edge)
      U += edge(mid);
    else
      U += plain(mid, t, [&](double, double db) { return (xi - t) + db; }, [&](double, double db) { return db; });
  } else {
    U += plain(-1.0, xi, [&](double, double db) { return db; }, [&](double, double db) { return (t - xi) + db; });
    const double mid = xi + 0.5 * (t - xi);
    U += plain(xi, mid, [&](double da, double) { return -da; }, [&](double, double db) { return (t - mid) + db; });
    if (singular_edge)
      U += edge(mid);
    else
      U += plain(mid, t, [&](double, double db) { return (xi - t) + db; }, [&](double, double db) { return db; });
  }
  U /= sphere::omega_ratio(p.d);
  if (m.boundary_coeff != 0.0) U += m.boundary_coeff * detail::ring_kernel(p, t, xi, xi - t);
  return U;
}

/// U^μ(ξ) + Q(ξ) by quadrature.
inline double weighted_potential_of(const CapMeasure& m, const AxisMeasure& f, double xi) {
  return potential_of(m, xi) + axis_field_value(xi, f, m.params);
}

struct VariationalReport {
  double F_estimate = 0.0;                ///< mean weighted potential over the support grid
  double max_violation_on_support = 0.0;  ///< max |U + Q - F| on Σ_t
  double min_margin_off_support = 0.0;    ///< min (U + Q - F) off Σ_t; 0 when t = 1
  double min_density = 0.0;               ///< min of the density over a dense grid of [-1, t)
  std::vector<double> grid;               ///< heights where U + Q was evaluated
  std::vector<double> values;             ///< U + Q on the grid

  bool passed(double tol) const {
    const double scale = std::max(1.0, std::abs(F_estimate));
    return max_violation_on_support <= tol * scale && min_margin_off_support >= -tol * scale && min_density >= -tol;
  }
};

/// Gauss variational inequalities for a measure on Σ_t: U + Q = F on the cap,
/// U + Q >= F off it, density >= 0.
inline VariationalReport check_variational(const CapMeasure& m, const AxisMeasure& f, int grid_size = 40) {
  if (grid_size < 4) throw domain_error("check_variational: grid_size must be at least 4");
  const double t = m.t;
  VariationalReport r;
  const int n_on = t < 1.0 ? grid_size / 2 : grid_size;
  const int n_off = t < 1.0 ? grid_size - n_on : 0;
  for (int i = 0; i < n_on; ++i) r.grid.push_back(-1.0 + (t + 1.0) * i / (n_on - 1));
  for (int i = 1; i <= n_off; ++i) r.grid.push_back(t + (1.0 - t) * i / n_off);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    r.values.push_back(weighted_potential_of(m, f, r.grid[i]));
    if (static_cast<int>(i) < n_on) sum += r.values.back();
  }
  r.F_estimate = sum / n_on;
  r.min_margin_off_support = n_off ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double dv = r.values[i] - r.F_estimate;
    if (static_cast<int>(i) < n_on)
      r.max_violation_on_support = std::max(r.max_violation_on_support, std::abs(dv));
    else
      r.min_margin_off_support = std::min(r.min_margin_off_support, dv);
  }
  r.min_density = std::numeric_limits<double>::infinity();
  constexpr int dense = 500;
  for (int i = 0; i < dense; ++i) {
    const double gap = (t + 1.0) * (1.0 - static_cast<double>(i) / dense);
    r.min_density = std::min(r.min_density, m.density_gap(t - gap, gap));
  }
  // ring charge counts as density of the same sign
  if (m.boundary_coeff < 0.0) r.min_density = std::min(r.min_density, m.boundary_coeff);
  return r;
}

inline VariationalReport check_variational(const CapSolution& sol, int grid_size = 40) {
  return check_variational(sol.equilibrium, sol.field, grid_size);
}

/// Same check for the signed equilibrium on an arbitrary cap Σ_t.
inline VariationalReport check_variational_at(double t, const AxisMeasure& f, const Params& p, int grid_size = 40) {
  return check_variational(axis_field::axis_eta(t, f, p), f, grid_size);
}

// ---------------------------------------------------------------- particles on S^2

struct ParticleSystem {
  Params params;
  AxisMeasure field;
  std::vector<std::array<double, 3>> points;
  std::vector<double> energy_history;  ///< energy after each accepted step, first entry initial
  double step = 0.0;
  int iterations = 0;
  int accepted = 0;
  bool stalled = false;  ///< no further decrease possible at working precision

  double energy() const { return energy_history.empty() ? 0.0 : energy_history.back(); }
};

namespace detail {

/// (1/n^2) Σ_{i≠j} k + (2/n) Σ Q, and optionally its gradient.
inline double particle_energy(const std::vector<std::array<double, 3>>& x, const Params& p, const AxisMeasure& f,
                              std::vector<std::array<double, 3>>* grad) {
  const std::size_t n = x.size();
  const double inv_n2 = 1.0 / (double(n) * double(n));
  const bool lg = p.is_log();
  const double hs = 0.5 * p.s;
  if (grad) grad->assign(n, {0.0, 0.0, 0.0});
  double pair = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i][0] - x[j][0], dy = x[i][1] - x[j][1], dz = x[i][2] - x[j][2];
      const double r2 = dx * dx + dy * dy + dz * dz;
      double k, dk;  // k(r2), and -dk/d(r2) * 2
      if (lg) {
        k = -0.5 * std::log(r2);
        dk = 1.0 / r2;
      } else {
        k = std::pow(r2, -hs);
        dk = p.s * k / r2;
      }
      row += k;
      if (grad) {
        const double c = 2.0 * inv_n2 * dk;
        (*grad)[i][0] -= c * dx;
        (*grad)[i][1] -= c * dy;
        (*grad)[i][2] -= c * dz;
        (*grad)[j][0] += c * dx;
        (*grad)[j][1] += c * dy;
        (*grad)[j][2] += c * dz;
      }
    }
    pair += row;
  }
  double E = 2.0 * inv_n2 * pair;
  double field_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& a : f.atoms) {
      const double dz = x[i][2] - a.R;
      const double r2 = x[i][0] * x[i][0] + x[i][1] * x[i][1] + dz * dz;
      double q, dq;
      if (lg) {
        q = -0.5 * std::log(r2);
        dq = 1.0 / r2;
      } else {
        q = std::pow(r2, -hs);
        dq = p.s * q / r2;
      }
      field_sum += a.mass * q;
      if (grad) {
        const double c = 2.0 / n * a.mass * dq;
        (*grad)[i][0] -= c * x[i][0];
        (*grad)[i][1] -= c * x[i][1];
        (*grad)[i][2] -= c * dz;
      }
    }
  }
  return E + 2.0 / n * field_sum;
}

}  // namespace detail

/// Projected gradient descent with step control for n points on S^2 under the
/// discrete weighted energy. Deterministic for a given seed.
inline ParticleSystem minimize_particles(int n, const Params& p, const AxisMeasure& f, std::uint64_t seed, int iters) {
  if (p.d != 2) throw domain_error("minimize_particles: only d = 2 is supported");
  if (n < 50) throw domain_error("minimize_particles: at least 50 particles are required");
  if (!p.is_log() && !(p.s > 0.0 && p.s < 2.0)) throw domain_error("minimize_particles: s must lie in (0, 2)");
  ParticleSystem sys;
  sys.params = p;
  sys.field = f;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  sys.points.resize(n);
  for (auto& x : sys.points) {
    double nr = 0.0;
    do {
      x = {g(rng), g(rng), g(rng)};
      nr = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    } while (nr < 1e-12);
    for (auto& c : x) c /= nr;
  }
  std::vector<std::array<double, 3>> grad, trial_grad, trial(n);
  double E = detail::particle_energy(sys.points, p, f, &grad);
  sys.energy_history.push_back(E);
  double step = 0.1 / n;
  constexpr int max_fail = 60;
  int fails = 0;
  for (int it = 0; it < iters; ++it) {
    ++sys.iterations;
    for (int i = 0; i < n; ++i) {
      const auto& x = sys.points[i];
      auto gi = grad[i];
      const double radial = gi[0] * x[0] + gi[1] * x[1] + gi[2] * x[2];
      double y[3];
      for (int k = 0; k < 3; ++k) y[k] = x[k] - step * 0.5 * n * (gi[k] - radial * x[k]);
      const double nr = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
      trial[i] = {y[0] / nr, y[1] / nr, y[2] / nr};
    }
    const double Et = detail::particle_energy(trial, p, f, &trial_grad);
    if (Et < E) {
      sys.points.swap(trial);
      grad.swap(trial_grad);
      E = Et;
      sys.energy_history.push_back(E);
      ++sys.accepted;
      step *= 1.25;
      fails = 0;
    } else {
      step *= 0.5;
      if (++fails >= max_fail) {
        sys.stalled = true;
        break;
      }
    }
  }
  sys.step = step;
  return sys;
}

inline ParticleSystem minimize_particles(int n, const Params& p, const PointCharge& c, std::uint64_t seed, int iters) {
  return minimize_particles(n, p, as_axis(c), seed, iters);
}

/// Estimate of the top of the support from particle heights. The fraction of particles
/// above height u is fitted by A g^γ + B g^{γ+1}, g = T - u, over the top 30%, where
/// γ = 1 + s/2 (Riesz, density vanishing like g^{s/2} at the edge) or 1 (log); T is
/// chosen by a scan minimizing the least-squares residual. The outermost particle ring
/// sits roughly half a lattice spacing inside the edge, so the raw maximum is biased low.
inline double empirical_support_height(const ParticleSystem& sys) {
  if (sys.points.empty()) throw domain_error("empirical_support_height: no particles");
  std::vector<double> h;
  h.reserve(sys.points.size());
  for (const auto& x : sys.points) h.push_back(x[2]);
  std::sort(h.rbegin(), h.rend());
  const std::size_t n = h.size();
  const std::size_t k = std::max<std::size_t>(4, static_cast<std::size_t>(0.3 * n));
  if (k > n || h[0] - h[k - 1] < 1e-12) return h[0];
  const double gamma = sys.params.is_log() ? 1.0 : 1.0 + 0.5 * sys.params.s;
  auto residual = [&](double T) {
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0, yy = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double g = T - h[i];
      const double a = std::pow(g, gamma), b = a * g, y = (i + 0.5) / n;
      s11 += a * a;
      s12 += a * b;
      s22 += b * b;
      r1 += a * y;
      r2 += b * y;
      yy += y * y;
    }
    const double det = s11 * s22 - s12 * s12;
    if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
    const double ca = (r1 * s22 - r2 * s12) / det, cb = (r2 * s11 - r1 * s12) / det;
    return yy - ca * r1 - cb * r2;
  };
  const double hi = std::min(1.0, h[0] + 0.4);
  double best = h[0], best_r = std::numeric_limits<double>::infinity();
  auto scan = [&](double lo, double up, double step) {
    for (double T = lo; T <= up + 1e-15; T += step) {
      const double r = residual(T);
      if (r < best_r) {
        best_r = r;
        best = T;
      }
    }
  };
  scan(std::min(h[0] + 1e-4, hi), hi, 1e-3);
  scan(std::max(h[0] + 1e-6, best - 1e-3), std::min(hi, best + 1e-3), 1e-5);
  return std::clamp(best, -1.0, 1.0);
}

/// Bin count for particle histograms on [-1, t]: bins three ring spacings wide, where
/// the spacing is that of a hexagonal lattice of n points spread over the cap area.
/// Finer bins resolve the ring layering rather than the density.
inline int default_histogram_bins(int n, double t) {
  const double area = 2.0 * std::numbers::pi * (t + 1.0);
  const double spacing = std::sqrt(2.0 * area / (std::sqrt(3.0) * n));
  const double ring = 0.5 * std::sqrt(3.0) * spacing;
  return std::max(4, static_cast<int>(std::lround((t + 1.0) / (3.0 * ring))));
}

/// Spearman rank correlation (average ranks for ties).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw domain_error("spearman: need two samples of equal size >= 2");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j);
      i = j + 1;
    }
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

struct HistogramComparison {
  std::vector<double> edges;
  std::vector<double> counts;    ///< fraction of particles per bin
  std::vector<double> expected;  ///< μ-mass per bin
  double rank_correlation = 0.0;
};

/// Bins particle heights on [-1, t] and compares with the mass of the measure per bin (d = 2).
inline HistogramComparison compare_histogram(const ParticleSystem& sys, const CapMeasure& m, int bins) {
  if (m.params.d != 2) throw domain_error("compare_histogram: d = 2 only");
  if (bins < 2) throw domain_error("compare_histogram: at least two bins");
  HistogramComparison h;
  const double t = m.t;
  for (int i = 0; i <= bins; ++i) h.edges.push_back(-1.0 + (t + 1.0) * i / bins);
  h.counts.assign(bins, 0.0);
  for (const auto& x : sys.points) {
    const int b = static_cast<int>(std::floor((x[2] + 1.0) / (t + 1.0) * bins));
    if (b >= 0 && b < bins) h.counts[b] += 1.0 / sys.points.size();
  }
  for (int b = 0; b < bins; ++b) {
    const double lo = h.edges[b], hi = h.edges[b + 1];
    const double top_gap = (t + 1.0) * (bins - b - 1) / bins;
    // on S^2, dσ = du/2
    const double mass = quadrature::tanh_sinh(
        [&](double, double, double db) {
          const double gap = top_gap + db;
          return m.density_gap(t - gap, gap);
        },
        lo, hi, 1e-10, 1e-14);
    h.expected.push_back(0.5 * mass);
  }
  h.rank_correlation = spearman(h.counts, h.expected);
  return h;
}

// ---------------------------------------------------------------- Monte Carlo energy

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// W_s(S^d) = E|x - y|^{-s} for independent uniform x, y. Only v = (1 - <x,y>)/2 matters;
/// under uniform sampling v ~ Beta(d/2, d/2). Samples come from an equal mixture of that law
/// and Beta(d/2 - κ/2, d/2), which has a heavier left tail, and are importance weighted so the
/// estimator has finite variance for all 0 < s < d.
inline MonteCarloEstimate monte_carlo_sphere_energy(int d, double s, long samples, std::uint64_t seed) {
  if (d < 1 || !(s > 0.0 && s < d)) throw domain_error("monte_carlo_sphere_energy: requires 0 < s < d");
  if (samples < 2) throw domain_error("monte_carlo_sphere_energy: need at least two samples");
  const double hd = 0.5 * d;
  const double base = std::max(0.0, 2.0 * s - d);
  const double kappa = base + 0.25 * (d - base);
  const double a = hd - 0.5 * kappa;
  auto log_beta_pdf = [](double v, double al, double be) {
    return (al - 1.0) * std::log(v) + (be - 1.0) * std::log1p(-v) - specfun::log_beta(al, be);
  };
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g_uni(hd, 1.0), g_heavy(a, 1.0), g_b(hd, 1.0);
  std::bernoulli_distribution coin(0.5);
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    double v;
    do {
      const double x = coin(rng) ? g_uni(rng) : g_heavy(rng);
      const double y = g_b(rng);
      v = x / (x + y);
    } while (!(v > 0.0 && v < 1.0));
    const double lp = log_beta_pdf(v, hd, hd);
    const double lq = log_beta_pdf(v, a, hd);
    const double w = 1.0 / (0.5 + 0.5 * std::exp(lq - lp));
    const double val = std::pow(4.0 * v, -0.5 * s) * w;
    sum += val;
    sum2 += val * val;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace spheq::oracle
