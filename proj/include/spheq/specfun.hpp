#pragma once

// Special functions on the real line: log-gamma, digamma, Gauss
// hypergeometric 2F1 (plain and regularized) and the regularized incomplete
// beta function.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace spheq::specfun {

struct HypArgs {
  double a, b, c, z;
};

struct BetaArgs {
  double x, alpha, beta;
};

namespace detail {

inline constexpr int kMaxSeriesTerms = 100000;
inline constexpr double kSeriesTol = 1e-16;

inline bool is_nonpositive_integer(double x) {
  return x <= 0.0 && x == std::nearbyint(x);
}

}  // namespace detail

/// log Γ(x) for x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("log_gamma: argument must be positive and finite");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

/// 1/Γ(x); zero at the poles of Γ.
inline double rgamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  if (x > 0.0 && x > 170.0) return std::exp(-log_gamma(x));
  if (x < -170.0) {
    // reflection: 1/Γ(x) = Γ(1-x) sin(πx)/π
    const double s = std::sin(std::numbers::pi * x);
    return s * std::exp(log_gamma(1.0 - x)) / std::numbers::pi;
  }
  return 1.0 / std::tgamma(x);
}

namespace detail {

// ψ for any real argument that is not a pole.
inline double digamma_any(double x) {
  if (is_nonpositive_integer(x)) throw domain_error("digamma: pole at non-positive integer");
  double shift = 0.0;
  if (x <= 0.0) {
    // ψ(x) = ψ(1-x) - π cot(πx)
    shift = -std::numbers::pi / std::tan(std::numbers::pi * x);
    x = 1.0 - x;
  }
  double r = 0.0;
  while (x < 10.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  const double f = 1.0 / (x * x);
  const double tail =
      f * (-1.0 / 12 + f * (1.0 / 120 + f * (-1.0 / 252 + f * (1.0 / 240 + f * (-1.0 / 132 + f * (691.0 / 32760 + f * (-1.0 / 12)))))));
  return shift + r + std::log(x) - 0.5 / x + tail;
}

}  // namespace detail

/// ψ(x) = Γ'(x)/Γ(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw domain_error("digamma: argument must be positive and finite");
  return detail::digamma_any(x);
}

/// Rising factorial (a)_n.
inline double pochhammer(double a, int n) {
  if (n < 0) throw domain_error("pochhammer: negative order");
  double p = 1.0;
  for (int k = 0; k < n; ++k) p *= a + k;
  return p;
}

namespace detail {

// Σ (a)_n (b)_n / ((c)_n n!) z^n, c not a non-positive integer.
inline double hyp2f1_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= kSeriesTol * std::abs(sum) && std::abs(ratio) < 1.0) {
      if (++small >= 2) return sum;
    } else {
      small = 0;
    }
  }
  throw convergence_error("hyp2f1: power series did not converge");
}

// Regularized terminating or convergent series Σ (a)_n (b)_n / (Γ(c+n) n!) z^n.
inline double hyp2f1_reg_series(double a, double b, double c, double z) {
  if (!is_nonpositive_integer(c)) return rgamma(c) * hyp2f1_series(a, b, c, z);
  const int n = static_cast<int>(-c);
  double lead = std::pow(z, n + 1);
  for (int k = 0; k <= n; ++k) lead *= (a + k) * (b + k) / (k + 1.0);
  if (lead == 0.0) return 0.0;
  return lead * rgamma(n + 2.0) * hyp2f1_series(a + n + 1, b + n + 1, n + 2.0, z);
}

// Taylor continuation of the hypergeometric ODE from z = 1/2 to z, used when
// c-a-b is close to but not exactly an integer.
inline double hyp2f1_reg_ode(double a, double b, double c, double z) {
  double z0 = 0.5;
  double f = hyp2f1_reg_series(a, b, c, z0);
  double fp = a * b * hyp2f1_reg_series(a + 1, b + 1, c + 1, z0);
  const double q1 = -(a + b + 1.0);
  for (int step = 0; step < 4000 && z0 < z; ++step) {
    const bool last = z - z0 <= 0.5 * (1.0 - z0);
    const double h = last ? z - z0 : 0.5 * (1.0 - z0);
    const double p0 = z0 * (1.0 - z0);
    const double p1 = 1.0 - 2.0 * z0;
    const double q0 = c - (a + b + 1.0) * z0;
    double y0 = f, y1 = fp;
    double val = y0 + y1 * h;
    double der = y1;
    double hk = h;
    for (int k = 0; k < 600; ++k) {
      const double y2 = -((p1 * k * (k + 1.0) + q0 * (k + 1.0)) * y1 + (-k * (k - 1.0) + q1 * k - a * b) * y0) /
                        (p0 * (k + 2.0) * (k + 1.0));
      const double dadd = (k + 2.0) * y2 * hk;
      hk *= h;
      const double add = y2 * hk;
      val += add;
      der += dadd;
      y0 = y1;
      y1 = y2;
      if (k > 4 && std::abs(add) <= 1e-17 * std::abs(val) && std::abs(dadd) <= 1e-17 * std::abs(der)) break;
    }
    f = val;
    fp = der;
    if (last) return f;
    z0 += h;
  }
  throw convergence_error("hyp2f1: analytic continuation did not reach the argument");
}

// Regularized 2F1 for 0.7 < z < 1 via the connection to 1-z.
inline double hyp2f1_reg_near_one(double a, double b, double c, double z, double omz) {
  const double m = c - a - b;
  const double mi = std::nearbyint(m);
  const double frac = std::abs(m - mi);
  if (frac > 1e-13 * std::max(1.0, std::abs(m))) {
    if (frac < 1e-5) return hyp2f1_reg_ode(a, b, c, z);
    const double t1 = std::tgamma(m) * rgamma(c - a) * rgamma(c - b);
    const double t2 = std::tgamma(-m) * rgamma(a) * rgamma(b);
    double r = 0.0;
    if (t1 != 0.0) r += t1 * hyp2f1_series(a, b, 1.0 - m, omz);
    if (t2 != 0.0) r += t2 * std::pow(omz, m) * hyp2f1_series(c - a, c - b, m + 1.0, omz);
    return r;
  }
  const double lg = std::log(omz);
  if (mi >= 0.0) {
    const int mm = static_cast<int>(mi);
    double s1 = 0.0;
    if (mm > 0) {
      double term = 1.0, sum = 1.0;
      for (int n = 0; n < mm - 1; ++n) {
        term *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - mm + n)) * omz;
        sum += term;
      }
      s1 = std::tgamma(static_cast<double>(mm)) * rgamma(a + mm) * rgamma(b + mm) * sum;
    }
    const double coef = ((mm % 2) ? -1.0 : 1.0) * std::pow(omz, mm) * rgamma(a) * rgamma(b);
    if (coef == 0.0) return s1;
    double pa = digamma_any(a + mm), pb = digamma_any(b + mm);
    double p1 = -std::numbers::egamma;             // ψ(n+1)
    double pm = detail::digamma_any(mm + 1.0);     // ψ(n+m+1)
    double term = 1.0 / std::tgamma(mm + 1.0);     // (a+m)_n (b+m)_n / (n! (n+m)!)
    double sum = 0.0;
    int small = 0;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
      const double add = term * (lg - p1 - pm + pa + pb);
      sum += add;
      if (std::abs(add) <= kSeriesTol * std::abs(sum) && n > 2) {
        if (++small >= 2) break;
      } else {
        small = 0;
      }
      term *= (a + mm + n) * (b + mm + n) / ((n + 1.0) * (n + mm + 1.0)) * omz;
      pa += 1.0 / (a + mm + n);
      pb += 1.0 / (b + mm + n);
      p1 += 1.0 / (n + 1.0);
      pm += 1.0 / (n + mm + 1.0);
      if (n + 1 == kMaxSeriesTerms) throw convergence_error("hyp2f1: logarithmic series did not converge");
    }
    return s1 - coef * sum;
  }
  const int k = static_cast<int>(-mi);
  double s1 = 0.0;
  {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < k - 1; ++n) {
      term *= (a - k + n) * (b - k + n) / ((n + 1.0) * (1.0 - k + n)) * omz;
      sum += term;
    }
    s1 = std::tgamma(static_cast<double>(k)) * rgamma(a) * rgamma(b) * std::pow(omz, -k) * sum;
  }
  const double coef = ((k % 2) ? -1.0 : 1.0) * rgamma(a - k) * rgamma(b - k);
  if (coef == 0.0) return s1;
  double pa = digamma_any(a), pb = digamma_any(b);
  double p1 = -std::numbers::egamma;
  double pm = digamma_any(k + 1.0);
  double term = 1.0 / std::tgamma(k + 1.0);
  double sum = 0.0;
  int small = 0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const double add = term * (lg - p1 - pm + pa + pb);
    sum += add;
    if (std::abs(add) <= kSeriesTol * std::abs(sum) && n > 2) {
      if (++small >= 2) break;
    } else {
      small = 0;
    }
    term *= (a + n) * (b + n) / ((n + 1.0) * (n + k + 1.0)) * omz;
    pa += 1.0 / (a + n);
    pb += 1.0 / (b + n);
    p1 += 1.0 / (n + 1.0);
    pm += 1.0 / (n + k + 1.0);
    if (n + 1 == kMaxSeriesTerms) throw convergence_error("hyp2f1: logarithmic series did not converge");
  }
  return s1 - coef * sum;
}

inline double hyp2f1_reg_impl(double a, double b, double c, double z, double omz) {
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    // terminating series, valid for every z
    const int n = static_cast<int>(-(is_nonpositive_integer(a) ? (is_nonpositive_integer(b) ? std::max(a, b) : a) : b));
    double sum = 0.0, term = 1.0;
    for (int k = 0; k <= n; ++k) {
      sum += term * rgamma(c + k);
      term *= (a + k) * (b + k) / (k + 1.0) * z;
    }
    return sum;
  }
  if (is_nonpositive_integer(c)) {
    const int n = static_cast<int>(-c);
    double lead = std::pow(z, n + 1);
    for (int k = 0; k <= n; ++k) lead *= (a + k) * (b + k) / (k + 1.0);
    if (lead == 0.0) return 0.0;
    return lead * hyp2f1_reg_impl(a + n + 1, b + n + 1, n + 2.0, z, omz);
  }
  if (z == 0.0) return rgamma(c);
  if (z < -0.7) {
    // Pfaff: z -> z/(z-1)
    return std::pow(omz, -a) * hyp2f1_reg_impl(a, c - b, c, z / (z - 1.0), 1.0 / omz);
  }
  if (z <= 0.7) return rgamma(c) * hyp2f1_series(a, b, c, z);
  return hyp2f1_reg_near_one(a, b, c, z, omz);
}

inline void check_hyp_z(double z, double omz) {
  if (!std::isfinite(z) || !(z <= 1.0) || !(z > -1.0) || !(omz > 0.0))  // z may round to 1 when omz is tiny
    throw domain_error("hyp2f1: argument must satisfy |z| < 1");
}

}  // namespace detail

/// 2F1(a,b;c;z)/Γ(c), finite for every real c. Requires |z| < 1.
inline double hyp2f1_regularized(double a, double b, double c, double z) {
  detail::check_hyp_z(z, 1.0 - z);
  return detail::hyp2f1_reg_impl(a, b, c, z, 1.0 - z);
}

/// Same as hyp2f1_regularized with 1-z supplied separately for arguments close to 1.
inline double hyp2f1_regularized(double a, double b, double c, double z, double one_minus_z) {
  detail::check_hyp_z(z, one_minus_z);
  return detail::hyp2f1_reg_impl(a, b, c, z, one_minus_z);
}

inline double hyp2f1_regularized(const HypArgs& h) { return hyp2f1_regularized(h.a, h.b, h.c, h.z); }

/// Gauss hypergeometric function 2F1(a,b;c;z) for real parameters and |z| < 1.
/// Throws domain_error when c is a non-positive integer; use hyp2f1_regularized there.
inline double hyp2f1(double a, double b, double c, double z, double one_minus_z) {
  detail::check_hyp_z(z, one_minus_z);
  if (detail::is_nonpositive_integer(c))
    throw domain_error("hyp2f1: c is a non-positive integer, use hyp2f1_regularized");
  if (detail::is_nonpositive_integer(a) || detail::is_nonpositive_integer(b) || std::abs(z) <= 0.7)
    return detail::hyp2f1_series(a, b, c, z);
  const double reg = detail::hyp2f1_reg_impl(a, b, c, z, one_minus_z);
  if (c < 170.0) return std::tgamma(c) * reg;
  return std::exp(log_gamma(c)) * reg;
}

inline double hyp2f1(double a, double b, double c, double z) { return hyp2f1(a, b, c, z, 1.0 - z); }

inline double hyp2f1(const HypArgs& h) { return hyp2f1(h.a, h.b, h.c, h.z); }

/// log B(a,b).
inline double log_beta(double a, double b) { return log_gamma(a) + log_gamma(b) - log_gamma(a + b); }

namespace detail {

// Continued fraction for I_x(a,b); accurate for x below a/(a+b).
inline double beta_cf(double x, double omx, double a, double b) {
  constexpr double tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      const double front = std::exp(a * std::log(x) + b * std::log(omx) - log_beta(a, b)) / a;
      return front * h;
    }
  }
  throw convergence_error("beta_inc_reg: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I(x; a, b) for x in [0,1], a, b > 0.
inline double beta_inc_reg(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw domain_error("beta_inc_reg: parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw domain_error("beta_inc_reg: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x < a / (a + b)) return detail::beta_cf(x, 1.0 - x, a, b);
  return 1.0 - detail::beta_cf(1.0 - x, x, b, a);
}

inline double beta_inc_reg(const BetaArgs& p) { return beta_inc_reg(p.x, p.alpha, p.beta); }

}  // namespace spheq::specfun
