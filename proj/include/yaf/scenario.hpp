#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/field.hpp"
#include "yaf/grid.hpp"
#include "yaf/operators.hpp"

namespace yaf {

enum class ScenarioKind { flat, schwarzschild, bump, power_tail, custom };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::flat: return "flat";
    case ScenarioKind::schwarzschild: return "schwarzschild";
    case ScenarioKind::bump: return "bump";
    case ScenarioKind::power_tail: return "power_tail";
    case ScenarioKind::custom: return "custom";
  }
  return "?";
}

/** Parameters selecting one of the built-in initial-data families. */
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::flat;
  int n = 3;
  double mass = 1.0;       ///< schwarzschild: ADM mass of the harmonic tail
  double amplitude = 0.1;  ///< bump: curvature amplitude; power_tail: tail coefficient
  double width = 1.0;      ///< bump: support half-width
  double center = 0.0;     ///< bump: support centre
  double tau = 1.0;        ///< power_tail: decay order of v - 1
  std::vector<std::pair<double, double>> profile;  ///< custom: (r, v) table
};

/** Fully materialised initial data with its derived diagnostics. */
struct Scenario {
  ScenarioSpec spec;
  Constants consts = Constants::for_dimension(3);
  ConformalField v0;
  double sup_r0 = 0.0;        ///< measured sup |R(g0)| over evolving nodes
  bool r0_nonnegative = true; ///< measured min R(g0) >= -tolerance
  double analytic_mass = 0.0; ///< exact ADM mass when the family provides one
  bool mass_known = false;
};

/** Compactly supported curvature profile of the bump family:
 *  rho(r) = amplitude (1 - s^2)^3 for |s| < 1, s = (r - center)/width. */
inline double bump_density(double r, double amplitude, double width, double center) {
  const double s = (r - center) / width;
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return amplitude * q * q * q;
}

namespace detail {

// 8-point Gauss-Legendre rule on [-1, 1]; exact through degree 15, which
// covers the degree-(6 + n - 1) integrands of the bump construction exactly
// for every dimension used here.
inline constexpr double kGL8X[8] = {-0.9602898564975363, -0.7966664774136267,
                                    -0.5255324099163290, -0.1834346424956498,
                                    0.1834346424956498,  0.5255324099163290,
                                    0.7966664774136267,  0.9602898564975363};
inline constexpr double kGL8W[8] = {0.1012285362903763, 0.2223810344533745,
                                    0.3137066458778873, 0.3626837833783620,
                                    0.3626837833783620, 0.3137066458778873,
                                    0.2223810344533745, 0.1012285362903763};

template <class Fn>
double gl8(const Fn& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += kGL8W[k] * f(mid + half * kGL8X[k]);
  return s * half;
}

}  // namespace detail

/**
 * Initial data of the bump family: a compactly supported, nonnegative
 * curvature source rho of the given amplitude is prescribed and the conformal
 * factor solves the discrete Poisson problem
 *
 *   lap_h v0 = -a rho,   v0(r_outer) = 1 + c_tail r_outer^{2-n},
 *
 * so that the discrete initial curvature R = rho v0^{-p} is nonnegative to
 * rounding -- exactly the hypothesis the sign-preservation and bracket
 * guarantees need, with no spatial-truncation leakage at the support edge.
 * The tail constant c_tail = Q_inf/(n-2), Q_inf = a Int rho s^{n-1} ds, is
 * the harmonic tail the continuum solution carries; the analytic ADM mass of
 * the family is (n-1) c_tail.
 */
inline ConformalField bump_initial_data(RadialGrid::Ptr grid, const Constants& c,
                                        double amplitude, double width, double center,
                                        double* analytic_mass = nullptr) {
  const RadialGrid& g = *grid;
  if (!g.origin_regular()) {
    throw InvalidArgumentError("bump scenario: requires an origin-regular grid (r_inner = 0)");
  }
  if (!(amplitude > 0.0) || !(width > 0.0) || center < 0.0) {
    throw InvalidArgumentError("bump scenario: needs amplitude > 0, width > 0, center >= 0");
  }
  if (center + width >= g.r_outer()) {
    throw InvalidArgumentError("bump scenario: support [" + std::to_string(center - width) +
                               ", " + std::to_string(center + width) +
                               "] must end inside r_outer");
  }
  const double nd = static_cast<double>(c.n);
  auto moment = [&](double r) { return bump_density(r, amplitude, width, center) * std::pow(r, nd - 1.0); };
  const double lo = std::max(0.0, center - width);
  const double hi = center + width;
  // Q_inf = a * Int_0^inf rho s^{n-1} ds over the support, split for exactness
  double q_inf = 0.0;
  const int pieces = 64;
  for (int k = 0; k < pieces; ++k) {
    const double a0 = lo + (hi - lo) * k / pieces;
    const double b0 = lo + (hi - lo) * (k + 1) / pieces;
    q_inf += detail::gl8(moment, a0, b0);
  }
  q_inf *= c.a;
  const double c_tail = q_inf / (nd - 2.0);
  if (analytic_mass) *analytic_mass = (nd - 1.0) * c_tail;

  const std::size_t n = g.size();
  Tridiagonal sys = laplacian_matrix(g);
  std::vector<double> rhs(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    rhs[i] = -c.a * bump_density(g.node(i), amplitude, width, center);
  }
  // Dirichlet row at the outer boundary: the harmonic tail value
  sys.diag[n - 1] = 1.0;
  rhs[n - 1] = 1.0 + c_tail * std::pow(g.r_outer(), 2.0 - nd);
  std::vector<double> v = solve_tridiagonal(sys, rhs);
  return ConformalField(std::move(grid), std::move(v));
}

/** Continuum bump profile by quadrature (test oracle for the discrete solve):
 *  v(r) = 1 + Int_r^inf Q(s) s^{1-n} ds,  Q(s) = a Int_0^s rho u^{n-1} du. */
inline double bump_profile_quadrature(double r, const Constants& c, double amplitude,
                                      double width, double center) {
  const double nd = static_cast<double>(c.n);
  const double lo = std::max(0.0, center - width);
  const double hi = center + width;
  auto moment = [&](double u) {
    return bump_density(u, amplitude, width, center) * std::pow(u, nd - 1.0);
  };
  auto q_of = [&](double s) {
    if (s <= lo) return 0.0;
    const double top = std::min(s, hi);
    double q = 0.0;
    const int pieces = 64;
    for (int k = 0; k < pieces; ++k) {
      const double a0 = lo + (top - lo) * k / pieces;
      const double b0 = lo + (top - lo) * (k + 1) / pieces;
      q += detail::gl8(moment, a0, b0);
    }
    return c.a * q;
  };
  const double q_inf = q_of(hi);
  // tail beyond the support: Q = Q_inf, integral in closed form
  double acc = (r >= hi) ? q_inf * std::pow(std::max(r, hi), 2.0 - nd) / (nd - 2.0)
                         : q_inf * std::pow(hi, 2.0 - nd) / (nd - 2.0);
  if (r < hi) {
    auto integrand = [&](double s) { return q_of(s) * std::pow(s, 1.0 - nd); };
    const double from = std::max(r, 1e-12);
    const int pieces = 256;
    for (int k = 0; k < pieces; ++k) {
      const double a0 = from + (hi - from) * k / pieces;
      const double b0 = from + (hi - from) * (k + 1) / pieces;
      acc += detail::gl8(integrand, a0, b0);
    }
  }
  return 1.0 + acc;
}

/**
 * Materialise a scenario on a grid: build v0, measure sup |R(g0)| and the
 * curvature sign over the evolving rows, and attach the family's analytic
 * mass when it has one.
 */
inline Scenario make_scenario(const ScenarioSpec& spec, RadialGrid::Ptr grid) {
  const Constants c = Constants::for_dimension(spec.n);
  const RadialGrid& g = *grid;
  if (g.dim() != spec.n) {
    throw InvalidArgumentError("make_scenario: grid dimension does not match scenario n");
  }
  const double nd = static_cast<double>(spec.n);

  double analytic_mass = 0.0;
  bool mass_known = false;
  ConformalField v0 = [&]() -> ConformalField {
    switch (spec.kind) {
      case ScenarioKind::flat:
        mass_known = true;
        analytic_mass = 0.0;
        return ConformalField::constant(grid, 1.0);
      case ScenarioKind::schwarzschild: {
        if (g.origin_regular()) {
          throw InvalidArgumentError(
              "schwarzschild scenario: the harmonic tail is singular at the origin; "
              "use a grid with r_inner > 0");
        }
        if (!(spec.mass > 0.0)) {
          throw InvalidArgumentError("schwarzschild scenario: mass must be positive");
        }
        mass_known = true;
        analytic_mass = spec.mass;
        const double coef = spec.mass / (nd - 1.0);
        return ConformalField::from_function(
            grid, [&](double r) { return 1.0 + coef * std::pow(r, 2.0 - nd); });
      }
      case ScenarioKind::bump: {
        mass_known = true;
        return bump_initial_data(grid, c, spec.amplitude, spec.width, spec.center,
                                 &analytic_mass);
      }
      case ScenarioKind::power_tail: {
        if (g.origin_regular()) {
          throw InvalidArgumentError(
              "power_tail scenario: r^{-tau} is singular at the origin; use r_inner > 0");
        }
        if (!(spec.tau > 0.0)) {
          throw InvalidArgumentError("power_tail scenario: tau must be positive");
        }
        if (spec.amplitude == 0.0) {
          throw InvalidArgumentError("power_tail scenario: amplitude must be non-zero");
        }
        if (spec.tau == nd - 2.0) {
          mass_known = true;
          analytic_mass = (nd - 1.0) * spec.amplitude;
        }
        return ConformalField::from_function(grid, [&](double r) {
          return 1.0 + spec.amplitude * std::pow(r, -spec.tau);
        });
      }
      case ScenarioKind::custom: {
        if (spec.profile.size() < 2) {
          throw InvalidArgumentError("custom scenario: profile table needs at least 2 rows");
        }
        for (std::size_t k = 0; k + 1 < spec.profile.size(); ++k) {
          if (!(spec.profile[k].first < spec.profile[k + 1].first)) {
            throw InvalidArgumentError("custom scenario: profile radii must be increasing");
          }
        }
        if (spec.profile.front().first > g.r_inner() ||
            spec.profile.back().first < g.r_outer()) {
          throw InvalidArgumentError("custom scenario: profile table must cover [r_inner, r_outer]");
        }
        std::vector<double> vals(g.size());
        std::size_t seg = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double r = g.node(i);
          while (seg + 2 < spec.profile.size() && spec.profile[seg + 1].first < r) ++seg;
          const auto& [ra, va] = spec.profile[seg];
          const auto& [rb, vb] = spec.profile[seg + 1];
          const double t = (r - ra) / (rb - ra);
          vals[i] = va + t * (vb - va);
        }
        return ConformalField(grid, std::move(vals));
      }
    }
    throw InvalidArgumentError("make_scenario: unknown scenario kind");
  }();

  Scenario out{spec, c, std::move(v0), 0.0, true, analytic_mass, mass_known};
  const std::vector<double> r0 = scalar_curvature(out.v0, c);
  const std::size_t first = g.origin_regular() ? 0 : 1;
  double sup = 0.0, mn = 0.0;
  for (std::size_t i = first; i + 1 < g.size(); ++i) {
    sup = std::max(sup, std::abs(r0[i]));
    mn = std::min(mn, r0[i]);
  }
  out.sup_r0 = sup;
  out.r0_nonnegative = mn >= -1e-10 * std::max(1.0, sup);
  return out;
}

}  // namespace yaf
