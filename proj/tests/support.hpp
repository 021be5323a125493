#pragma once

// Shared helpers for the unit suites: error norms, convergence-order fits,
// and deterministic smooth random fields.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "yaf/grid.hpp"

namespace yaf::testing {

inline double sup_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Least-squares slope of log(err) against log(h): the observed order.
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double d = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / d;
}

/// Smooth deterministic pseudo-random field in [lo, hi]: a short Fourier sum
/// over the grid extent, normalised and affinely mapped into the band.
inline std::vector<double> smooth_random_field(const RadialGrid& g, double lo, double hi,
                                               std::uint64_t seed, int modes = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<double> ac(static_cast<std::size_t>(modes)), bc(static_cast<std::size_t>(modes));
  double scale = 0.0;
  for (int k = 0; k < modes; ++k) {
    ac[static_cast<std::size_t>(k)] = amp(rng);
    bc[static_cast<std::size_t>(k)] = amp(rng);
    scale += std::abs(ac[static_cast<std::size_t>(k)]) + std::abs(bc[static_cast<std::size_t>(k)]);
  }
  if (scale == 0.0) scale = 1.0;
  const double span = g.r_outer() - g.r_inner();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = (g.node(i) - g.r_inner()) / span;
    double s = 0.0;
    for (int k = 0; k < modes; ++k) {
      s += ac[static_cast<std::size_t>(k)] * std::cos((k + 1) * 3.141592653589793 * xi) +
           bc[static_cast<std::size_t>(k)] * std::sin((k + 1) * 3.141592653589793 * xi);
    }
    const double unit = 0.5 * (s / scale + 1.0);  // in [0, 1]
    f[i] = lo + (hi - lo) * unit;
  }
  return f;
}

}  // namespace yaf::testing
