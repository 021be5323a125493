#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "yaf/errors.hpp"

namespace yaf {

/**
 * Dimension-derived constants of the conformal flow.
 *
 * For an n-dimensional background (n >= 3) the conformal factor exponent is
 * p = (n+2)/(n-2) and the conformal Laplacian coefficient is a = (n-2)/(4(n-1)),
 * so that L f = lap f - a R f transforms covariantly under conformal changes.
 * Both are always recomputed from n; they are never stored independently.
 */
struct Constants {
  int n = 3;     ///< spatial dimension, n >= 3
  double p = 5;  ///< conformal exponent (n+2)/(n-2)
  double a = 0.125;  ///< conformal Laplacian coefficient (n-2)/(4(n-1))

  static Constants for_dimension(int n) {
    if (n < 3) {
      throw InvalidArgumentError("Constants: dimension must be >= 3, got " + std::to_string(n));
    }
    Constants c;
    c.n = n;
    c.p = static_cast<double>(n + 2) / static_cast<double>(n - 2);
    c.a = static_cast<double>(n - 2) / (4.0 * static_cast<double>(n - 1));
    return c;
  }

  /// Surface measure of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
  double unit_sphere_area() const {
    const double nd = static_cast<double>(n);
    return 2.0 * std::pow(std::numbers::pi, nd / 2.0) / std::tgamma(nd / 2.0);
  }

  /// Rate constant (n-2)/((n-1)(n+2)) entering the sup/inf comparison bracket.
  double bracket_rate() const {
    return static_cast<double>(n - 2) /
           (static_cast<double>(n - 1) * static_cast<double>(n + 2));
  }
};

/**
 * Ratio between the rescaled-time parametrisation of the flow (where the
 * conformal density u^p evolves linearly through the conformal Laplacian) and
 * geometric time (where the metric evolves by minus its scalar curvature).
 *
 * Writing g = v^{4/(n-2)} delta with flat background, geometric time gives
 *   dv/dt = (n-1) v^{1-p} lap v,
 * while the density form gives
 *   d(v^p)/ds = lap v,  i.e.  dv/ds = (1/p) v^{1-p} lap v.
 * Hence s = c t with c = (n-1) p = (n-1)(n+2)/(n-2).  The dual-route
 * derivation (curvature route versus density route) is replayed numerically
 * in the test suite.
 */
inline double time_rescale_factor(const Constants& c) {
  return static_cast<double>(c.n - 1) * c.p;
}

/// Sentinel used where a quantity is unbounded (e.g. existence time for S = 0).
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace yaf
