#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/grid.hpp"
#include "yaf/operators.hpp"

namespace yaf {

/**
 * Weighted sup norm with decay weight beta over the asymptotic region,
 *
 *   sum_{j<=k}  sup_{r >= r_asym}  r^{-beta+j} |d^j f/dr^j|,
 *
 * with derivatives approximated by the second-order stencils of operators.hpp.
 * Only k in {0, 1, 2} is supported; beta < 0 means decay of order |beta|.
 * By default the region starts at max(1, r_inner) so that negative powers of
 * r stay bounded.
 */
inline double weighted_sup_norm(const RadialGrid& g, const std::vector<double>& f, double beta,
                                int k, double r_asym = -1.0) {
  require_size(f.size(), g.size(), "weighted_sup_norm");
  if (k < 0 || k > 2) {
    throw InvalidArgumentError("weighted_sup_norm: derivative order k = " + std::to_string(k) +
                               " outside {0, 1, 2}");
  }
  if (r_asym < 0.0) r_asym = std::max(1.0, g.r_inner());
  if (r_asym > g.r_outer()) {
    throw InvalidArgumentError("weighted_sup_norm: region start r_asym = " +
                               std::to_string(r_asym) + " beyond r_outer");
  }
  std::vector<const std::vector<double>*> levels;
  std::vector<std::vector<double>> storage;
  storage.reserve(2);
  levels.push_back(&f);
  if (k >= 1) {
    storage.push_back(radial_derivative(g, f));
    levels.push_back(&storage.back());
  }
  if (k >= 2) {
    storage.push_back(radial_second_derivative(g, f));
    levels.push_back(&storage.back());
  }
  double total = 0.0;
  for (int j = 0; j <= k; ++j) {
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.node(i);
      if (r < r_asym) continue;
      sup = std::max(sup, std::pow(r, -beta + j) * std::abs((*levels[static_cast<std::size_t>(j)])[i]));
    }
    total += sup;
  }
  return total;
}

/** Result of a weighted integral norm; records the truncated region used. */
struct WeightedNormResult {
  double value = 0.0;
  double r_lo = 0.0;   ///< lower end of the sampled region
  double r_hi = 0.0;   ///< truncation radius (outer end of the grid or region)
  double q = 2.0;
  double beta = 0.0;
};

/**
 * Weighted integral norm
 *
 *   ( Int_{r_lo}^{r_hi} |f|^q r^{-beta q - n} dvol )^{1/q},
 *   dvol = omega_{n-1} r^{n-1} dr,
 *
 * computed with the trapezoid rule against the radial volume element.  The
 * grid truncates the integral at r_hi = r_outer; the result records that
 * radius.  q >= 1 is required (the expression is not a norm otherwise).
 */
inline WeightedNormResult weighted_lq_norm(const RadialGrid& g, const std::vector<double>& f,
                                           double beta, double q, const Constants& c,
                                           double r_lo = -1.0) {
  require_size(f.size(), g.size(), "weighted_lq_norm");
  if (q < 1.0) {
    throw InvalidArgumentError("weighted_lq_norm: q = " + std::to_string(q) +
                               " < 1 does not define a norm");
  }
  if (g.dim() != c.n) {
    throw InvalidArgumentError("weighted_lq_norm: grid dimension does not match constants");
  }
  if (r_lo < 0.0) r_lo = g.r_inner();
  const double omega = c.unit_sphere_area();
  auto integrand = [&](std::size_t i) {
    const double r = g.node(i);
    if (r < r_lo) return 0.0;
    if (r == 0.0) {
      // r^{-beta q - n} * r^{n-1} = r^{-beta q - 1}: finite at 0 only for
      // beta q < -1; the trapezoid weight of the origin node is r/2 -> 0, and
      // we define the origin contribution through the limit when it exists.
      return (-beta * q - 1.0 > 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::pow(std::abs(f[i]), q) * std::pow(r, -beta * q - 1.0) * omega;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (g.node(i + 1) <= r_lo) continue;
    sum += 0.5 * (integrand(i) + integrand(i + 1)) * g.spacing(i);
  }
  WeightedNormResult out;
  out.value = std::pow(sum, 1.0 / q);
  out.r_lo = std::max(r_lo, g.r_inner());
  out.r_hi = g.r_outer();
  out.q = q;
  out.beta = beta;
  return out;
}

/** Least-squares power-law fit |f| ~ amplitude * r^{-tau} over a tail region. */
struct DecayFit {
  double tau_hat = 0.0;    ///< fitted decay order; +infinity when f == 0 on the region
  double amplitude = 0.0;  ///< fitted prefactor
  double residual = 0.0;   ///< rms residual of log|f| about the fit
  std::size_t samples = 0; ///< nodes actually used
};

/**
 * Fit the decay order of f on [r_fit_min, r_outer] by least squares on
 * log |f| versus log r.  Needs at least eight nodes in the region; nodes where
 * f vanishes to the double floor are excluded (an identically zero tail
 * returns the +infinity sentinel with zero residual).
 */
inline DecayFit decay_order_fit(const RadialGrid& g, const std::vector<double>& f,
                                double r_fit_min) {
  require_size(f.size(), g.size(), "decay_order_fit");
  std::size_t in_region = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.node(i) >= r_fit_min && g.node(i) > 0.0) ++in_region;
  }
  if (in_region < 8) {
    throw InvalidArgumentError("decay_order_fit: region [" + std::to_string(r_fit_min) +
                               ", r_outer] holds " + std::to_string(in_region) +
                               " nodes; need at least 8");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r < r_fit_min || r <= 0.0) continue;
    const double a = std::abs(f[i]);
    if (a < 1e-280) continue;  // treat as an exact zero
    const double x = std::log(r);
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  DecayFit fit;
  fit.samples = m;
  if (m == 0) {
    fit.tau_hat = kInfinity;
    fit.amplitude = 0.0;
    fit.residual = 0.0;
    return fit;
  }
  if (m < 2) {
    throw InvalidArgumentError("decay_order_fit: only one non-zero sample in the region");
  }
  const double md = static_cast<double>(m);
  const double denom = md * sxx - sx * sx;
  const double slope = (md * sxy - sx * sy) / denom;
  const double inter = (sy - slope * sx) / md;
  fit.tau_hat = -slope;
  fit.amplitude = std::exp(inter);
  double ss = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r < r_fit_min || r <= 0.0) continue;
    const double a = std::abs(f[i]);
    if (a < 1e-280) continue;
    const double resid = std::log(a) - (inter + slope * std::log(r));
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / md);
  return fit;
}

}  // namespace yaf
