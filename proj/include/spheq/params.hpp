#pragma once

// Problem parameters and external-field descriptions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace spheq {

enum class KernelKind { riesz, log };

/// Dimension d of S^d and the interaction kernel: Riesz |x-y|^{-s} or log(1/|x-y|).
struct Params {
  int d = 2;
  KernelKind kernel = KernelKind::riesz;
  double s = 1.0;

  static Params riesz(int d, double s) {
    Params p{d, KernelKind::riesz, s};
    p.validate();
    return p;
  }
  static Params log(int d = 2) {
    Params p{d, KernelKind::log, 0.0};
    p.validate();
    return p;
  }

  bool is_log() const { return kernel == KernelKind::log; }
  /// s = d-2 with d >= 3 (Newtonian case).
  bool is_exceptional() const { return !is_log() && d >= 3 && std::abs(s - (d - 2)) <= 1e-12; }
  /// d-2 < s < d.
  bool is_riesz_interior() const { return !is_log() && s > d - 2 + 1e-12 && s < d; }

  void validate() const {
    if (d < 2) throw domain_error("Params: dimension must be at least 2");
    if (is_log()) {
      if (d != 2) throw domain_error("Params: the logarithmic kernel is supported on S^2 only");
      return;
    }
    if (!(s > 0.0 && s < d)) throw domain_error("Params: Riesz exponent must satisfy 0 < s < d");
  }
};

/// Positive charge q at distance R > 1 from the origin on the polar axis.
struct PointCharge {
  double q = 1.0;
  double R = 2.0;
};

/// Builds a point charge, mapping R < 1 to 1/R with charge q R^{-s}. The map leaves the
/// Riesz field on the sphere unchanged. R < 1 is rejected for the log kernel, where
/// the inversion would shift the field by a constant.
inline PointCharge make_charge(double q, double R, const Params& p) {
  if (!(q > 0.0) || !std::isfinite(q)) throw domain_error("PointCharge: charge must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw domain_error("PointCharge: distance must be positive");
  if (R == 1.0) throw domain_error("PointCharge: charge may not lie on the sphere");
  if (R > 1.0) return {q, R};
  if (p.is_log()) throw domain_error("PointCharge: R < 1 is not supported for the log kernel");
  return {q * std::pow(R, -p.s), 1.0 / R};
}

/// One atom of a positive measure on the polar axis outside the sphere.
struct AxisAtom {
  double R = 2.0;
  double mass = 1.0;
};

/// Discrete positive measure on the axis, atoms at distances R_i > 1.
struct AxisMeasure {
  std::vector<AxisAtom> atoms;

  double total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.mass;
    return m;
  }
  double min_R() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) r = std::min(r, a.R);
    return r;
  }
};

inline AxisMeasure as_axis(const PointCharge& c) { return AxisMeasure{{AxisAtom{c.R, c.q}}}; }

/// Validates atoms and maps any R < 1 to 1/R with mass m R^{-s}.
inline AxisMeasure make_axis(std::vector<AxisAtom> atoms, const Params& p) {
  if (atoms.empty()) throw domain_error("AxisMeasure: at least one atom is required");
  for (auto& a : atoms) {
    const auto c = make_charge(a.mass, a.R, p);
    a = AxisAtom{c.R, c.q};
  }
  return AxisMeasure{std::move(atoms)};
}

}  // namespace spheq
