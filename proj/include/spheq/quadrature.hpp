#pragma once

// Gauss-Jacobi rules, a tanh-sinh integrator for endpoint singularities and
// graded composite rules on a cap interval [-1, t].

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace spheq::quadrature {

/// Nodes and weights of a rule on [-1, 1]. one_minus and one_plus hold 1-x and
/// 1+x with full relative precision.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> one_minus;
  std::vector<double> one_plus;
};

namespace detail {

// P_n^{(a,b)} and P_{n-1}^{(a,b)} at x = 1 - y, evaluated in terms of y.
inline std::pair<double, double> jacobi_pair_y(int n, double a, double b, double y) {
  double p0 = 1.0;
  if (n == 0) return {p0, 0.0};
  double p1 = (a + 1.0) - 0.5 * (a + b + 2.0) * y;
  for (int k = 2; k <= n; ++k) {
    const double c = 2.0 * k + a + b;
    const double A = 2.0 * k * (k + a + b) * (c - 2.0);
    const double B = (c - 1.0) * ((c * (c - 2.0) + a * a - b * b) - c * (c - 2.0) * y);
    const double C = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
    const double p2 = (B * p1 - C * p0) / A;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

// Value and y-derivative of P_n^{(a,b)}(1-y) / ((a+1)_n / n!) from the terminating
// series 2F1(-n, n+a+b+1; a+1; y/2). Well conditioned when n^2 y is small, where
// the recurrence loses relative accuracy for a close to -1.
inline std::pair<double, double> jacobi_series_y(int n, double a, double b, double y) {
  double term = 1.0, val = 1.0, der = 0.0;
  for (int k = 0; k < n; ++k) {
    const double f = (k - n) * (n + a + b + 1.0 + k) / ((a + 1.0 + k) * (k + 1.0)) * 0.5;
    der += term * f * (k + 1.0);  // d/dy of term_{k+1} y^{k+1} is (k+1) term_{k+1} y^k
    term *= f * y;
    val += term;
    if (std::abs(term) < 1e-18 * std::abs(val) && std::abs(term) * (k + 2.0) < 1e-18 * std::abs(der) * y) break;
  }
  return {val, der};
}

// Newton polish of a node near +1 in the variable y = 1 - x; returns {y, weight}.
// ratio = 2^{a+b+1} Γ(n+a+1)Γ(n+b+1)/(Γ(n+a+b+1) n!).
inline std::pair<double, double> polish_upper(int n, double a, double b, double y, double ratio) {
  const bool series = (double(n) * n * y < 8.0);
  if (series) {
    // scale (a+1)_n/n! of the series normalisation
    double scale = 1.0;
    for (int k = 0; k < n; ++k) scale *= (a + 1.0 + k) / (k + 1.0);
    for (int it = 0; it < 6; ++it) {
      auto [v, dv] = jacobi_series_y(n, a, b, y);
      const double yn = y - v / dv;
      if (!(yn > 0.0 && yn < 2.0)) break;
      const double step = std::abs(yn - y);
      y = yn;
      if (step <= 1e-17 * y) break;
    }
    auto [v, dv] = jacobi_series_y(n, a, b, y);
    const double dp = scale * dv;  // |dP/dx| = |dP/dy|
    return {y, ratio / (y * (2.0 - y) * dp * dp)};
  }
  for (int it = 0; it < 4; ++it) {
    auto [pn, pm] = jacobi_pair_y(n, a, b, y);
    const double c = 2.0 * n + a + b;
    const double dp = (n * ((a - b) - c * (1.0 - y)) * pn + 2.0 * (n + a) * (n + b) * pm) / (c * y * (2.0 - y));
    const double yn = y + pn / dp;
    if (!(yn > 0.0 && yn < 2.0)) break;
    const double step = std::abs(yn - y);
    y = yn;
    if (step <= 1e-17 * y) break;
  }
  auto [pn, pm] = jacobi_pair_y(n, a, b, y);
  const double c = 2.0 * n + a + b;
  const double dp = (n * ((a - b) - c * (1.0 - y)) * pn + 2.0 * (n + a) * (n + b) * pm) / (c * y * (2.0 - y));
  return {y, ratio / (y * (2.0 - y) * dp * dp)};
}

// Golub-Welsch eigenvalues, then Newton polish from the nearer endpoint.
inline Rule compute_gauss_jacobi(int n, double a, double b) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  r.one_minus.resize(n);
  r.one_plus.resize(n);
  if (n == 1) {
    r.nodes[0] = (b - a) / (a + b + 2.0);
    r.one_minus[0] = 2.0 * (a + 1.0) / (a + b + 2.0);
    r.one_plus[0] = 2.0 * (b + 1.0) / (a + b + 2.0);
    r.weights[0] = std::exp((a + b + 1.0) * std::numbers::ln2 + specfun::log_beta(a + 1.0, b + 1.0));
    return r;
  }
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag[k] = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    if (k == 1)
      sub[0] = std::sqrt(4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b)));
    else
      sub[k - 1] = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  // 2^{a+b+1} Γ(n+a+1)Γ(n+b+1)/(Γ(n+a+b+1) n!) as a product of O(1) factors
  double ratio = std::exp((a + b + 1.0) * std::numbers::ln2 + specfun::log_gamma(a + 2.0) +
                          specfun::log_gamma(b + 2.0) - specfun::log_gamma(a + b + 2.0));
  for (int k = 1; k < n; ++k) ratio *= (k + a + 1.0) * (k + b + 1.0) / ((k + a + b + 1.0) * (k + 1.0));
  for (int i = 0; i < n; ++i) {
    // nodes stored in descending order, node 0 nearest +1
    const double x0 = ev[n - 1 - i];
    if (x0 >= 0.0) {
      auto [y, w] = polish_upper(n, a, b, 1.0 - x0, ratio);
      r.one_minus[i] = y;
      r.one_plus[i] = 2.0 - y;
      r.nodes[i] = 1.0 - y;
      r.weights[i] = w;
    } else {
      // P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)
      auto [y, w] = polish_upper(n, b, a, 1.0 + x0, ratio);
      r.one_plus[i] = y;
      r.one_minus[i] = 2.0 - y;
      r.nodes[i] = y - 1.0;
      r.weights[i] = w;
    }
  }
  return r;
}

}  // namespace detail

/// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1].
/// Rules are cached; the returned pointer stays valid for the program lifetime.
inline std::shared_ptr<const Rule> gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw domain_error("gauss_jacobi: order must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw domain_error("gauss_jacobi: exponents must exceed -1");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const Rule>> cache;
  const auto key = std::make_tuple(n, alpha, beta);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const Rule>(detail::compute_gauss_jacobi(n, alpha, beta));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, rule).first->second;
}

/// Tanh-sinh integration of f over [a, b]. The integrand is called as
/// f(x, x - a, b - x) so that endpoint singularities can be evaluated from the
/// exact distances.
template <class F>
double tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0, int max_level = 9) {
  if (!(b > a)) {
    if (a == b) return 0.0;
    throw domain_error("tanh_sinh: empty or reversed interval");
  }
  const double half = 0.5 * (b - a);
  const double center = a + half;
  constexpr double tau_max = 6.2;
  auto pair_sum = [&](double tau) {
    const double u = 0.5 * std::numbers::pi * std::sinh(tau);
    const double cu = std::cosh(u);
    const double w = 0.5 * std::numbers::pi * std::cosh(tau) / (cu * cu);
    const double comp = std::exp(-u) / cu;  // 1 - tanh(u)
    const double dist = half * comp;
    if (!(dist > 0.0) || w == 0.0) return 0.0;
    const double far = b - a - dist;
    const double left = f(a + dist, dist, far);
    const double right = f(b - dist, far, dist);
    return w * (left + right);
  };
  double h = 1.0;
  double sum = 0.5 * std::numbers::pi * f(center, half, half);
  for (double tau = h; tau <= tau_max; tau += h) sum += pair_sum(tau);
  double prev = sum * h;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double tau = h; tau <= tau_max; tau += 2.0 * h) sum += pair_sum(tau);
    const double cur = sum * h;
    const double err = std::abs(cur - prev);
    if (!std::isfinite(cur)) throw convergence_error("tanh_sinh: non-finite integrand value");
    if (level >= 3 && (err <= rel_tol * std::abs(cur) || err <= abs_tol)) return cur * half;
    prev = cur;
  }
  throw convergence_error("tanh_sinh: tolerance not reached");
}

/// Composite rule on [-1, t]. The integral approximated is
///   Σ_i w_i g(u_i) ≈ ∫_{-1}^{t} g(u) (1+u)^left (t-u)^right (1-u)^far du.
/// dist_to_t holds t - u_i computed without cancellation.
struct RadialQuadrature {
  double t = 1.0;
  std::vector<double> nodes;
  std::vector<double> dist_to_t;
  std::vector<double> weights;
};

/// Exponents describing a radial weight; edge_scale is the smallest length scale
/// at which an integrand may vary near the right end.
struct RadialWeight {
  double left = 0.0;
  double right = 0.0;
  double far = 0.0;
  double edge_scale = 1.0;
};

inline RadialQuadrature radial_rule(double t, RadialWeight w, int order) {
  if (!(t > -1.0 && t <= 1.0)) throw domain_error("radial_rule: cap height must lie in (-1, 1]");
  if (!(w.left > -1.0)) throw domain_error("radial_rule: left exponent must exceed -1");
  const bool full = (t == 1.0);
  double right = w.right;
  double far = w.far;
  if (full) {
    right += far;
    far = 0.0;
  }
  if (!(right > -1.0)) throw domain_error("radial_rule: right exponent must exceed -1");
  RadialQuadrature q;
  q.t = t;
  const double len = 1.0 + t;
  // breakpoints measured as distances from t, decreasing
  std::vector<double> cuts{len, 0.5 * len};
  const double delta = full ? 0.0 : 1.0 - t;
  const double grade = std::min(full ? w.edge_scale : std::min(delta, w.edge_scale), 0.5 * len);
  if (grade < 0.25 * len) {
    for (double g = 0.25 * len; g > grade; g *= 0.5) cuts.push_back(g);
    cuts.push_back(grade);
  }
  cuts.push_back(0.0);
  const auto left_rule = gauss_jacobi(order, 0.0, w.left);
  const auto right_rule = gauss_jacobi(order, right, 0.0);
  const auto plain = gauss_jacobi(order, 0.0, 0.0);
  const std::size_t panels = cuts.size() - 1;
  q.nodes.reserve(panels * order);
  q.dist_to_t.reserve(panels * order);
  q.weights.reserve(panels * order);
  for (std::size_t p = 0; p < panels; ++p) {
    const double hi = cuts[p];      // distance of the left end from t
    const double lo = cuts[p + 1];  // distance of the right end from t
    const double plen = hi - lo;
    const bool first = (p == 0);
    const bool last = (p + 1 == panels);
    const Rule& rule = first ? *left_rule : (last ? *right_rule : *plain);
    for (int i = 0; i < order; ++i) {
      // distance from t: lo + plen (1-x)/2
      const double dist = lo + 0.5 * plen * rule.one_minus[i];
      const double u = first ? -1.0 + 0.5 * plen * rule.one_plus[i] : t - dist;
      const double one_plus_u = first ? 0.5 * plen * rule.one_plus[i] : len - dist;
      double wt = rule.weights[i] * 0.5 * plen;
      if (first)
        wt *= std::pow(0.5 * plen, w.left);
      else if (w.left != 0.0)
        wt *= std::pow(one_plus_u, w.left);
      if (last)
        wt *= std::pow(0.5 * plen, right);
      else if (right != 0.0)
        wt *= std::pow(dist, right);
      if (far != 0.0) wt *= std::pow(delta + dist, far);
      q.nodes.push_back(u);
      q.dist_to_t.push_back(dist);
      q.weights.push_back(wt);
    }
  }
  return q;
}

/// Integrates g(u, t-u) against a radial weight, doubling the per-panel order
/// from `start` until two successive results agree.
template <class G>
double integrate_radial(G&& g, double t, RadialWeight w, double rel_tol = 1e-13, double abs_tol = 0.0,
                        int start = 16, int max_order = 1024) {
  auto eval = [&](int order) {
    const auto q = radial_rule(t, w, order);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * g(q.nodes[i], q.dist_to_t[i]);
    return s;
  };
  double prev = eval(start);
  for (int order = 2 * start; order <= max_order; order *= 2) {
    const double cur = eval(order);
    const double err = std::abs(cur - prev);
    if (!std::isfinite(cur)) throw convergence_error("integrate_radial: non-finite integrand value");
    if (err <= rel_tol * std::abs(cur) || err <= abs_tol) return cur;
    prev = cur;
  }
  throw convergence_error("integrate_radial: tolerance not reached at maximal order");
}

}  // namespace spheq::quadrature
