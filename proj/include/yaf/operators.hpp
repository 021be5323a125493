#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/field.hpp"
#include "yaf/grid.hpp"

namespace yaf {

/** Tridiagonal operator; lower[0] and upper[size-1] are unused. */
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
  std::size_t size() const noexcept { return diag.size(); }

  std::vector<double> apply(const std::vector<double>& x) const {
    require_size(x.size(), size(), "Tridiagonal::apply");
    std::vector<double> y(size());
    for (std::size_t i = 0; i < size(); ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += lower[i] * x[i - 1];
      if (i + 1 < size()) s += upper[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }
};

/** Thomas algorithm; throws on a (numerically) singular pivot. */
inline std::vector<double> solve_tridiagonal(const Tridiagonal& m, std::vector<double> rhs) {
  const std::size_t n = m.size();
  require_size(rhs.size(), n, "solve_tridiagonal");
  std::vector<double> c(n, 0.0);
  double pivot = m.diag[0];
  if (pivot == 0.0) throw Error("solve_tridiagonal: zero pivot at row 0");
  c[0] = m.upper[0] / pivot;
  rhs[0] /= pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i] * c[i - 1];
    if (pivot == 0.0) {
      throw Error("solve_tridiagonal: zero pivot at row " + std::to_string(i));
    }
    c[i] = m.upper[i] / pivot;
    rhs[i] = (rhs[i] - m.lower[i] * rhs[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] -= c[i] * rhs[i + 1];
  }
  return rhs;
}

namespace detail {

/// Finite-difference weights for the m-th derivative at z from arbitrary nodes
/// (Fornberg's recursion).  Exact for polynomials of degree < #nodes.
inline std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int nd = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(nd + 1),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) / c2;
        }
        c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) / c3;
      }
      c[static_cast<std::size_t>(j)][0] *= c4 / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

/// d/dr and d2/dr2 of the interpolating cubic (quadratic when only 3 nodes
/// exist) at an endpoint, using the `width` nodes nearest to it.
inline std::array<double, 2> endpoint_derivatives(const RadialGrid& g,
                                                  const std::vector<double>& f,
                                                  bool at_start) {
  const std::size_t n = g.size();
  const std::size_t width = std::min<std::size_t>(4, n);
  std::vector<double> xs(width);
  std::vector<double> fs(width);
  for (std::size_t k = 0; k < width; ++k) {
    const std::size_t idx = at_start ? k : n - width + k;
    xs[k] = g.node(idx);
    fs[k] = f[idx];
  }
  const double z = at_start ? xs.front() : xs.back();
  const auto w1 = fd_weights(z, xs, 1);
  const auto w2 = fd_weights(z, xs, 2);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t k = 0; k < width; ++k) {
    d1 += w1[k] * fs[k];
    d2 += w2[k] * fs[k];
  }
  return {d1, d2};
}

}  // namespace detail

/**
 * Flux coefficients of the radial Laplacian in divergence form.
 *
 * The operator r^{1-n} d/dr ( r^{n-1} df/dr ) is discretised with one flux per
 * interface,
 *
 *   F_{i+1/2} = (f_{i+1} - f_i) / I_i,   I_i = Int_{r_i}^{r_{i+1}} s^{1-n} ds,
 *
 * and the cell measure W_i = Int s^{n-1} ds over [r_{i-1/2}, r_{i+1/2}].
 * Because the interface weight integrates s^{1-n} exactly, every discrete
 * harmonic c1 + c2 r^{2-n} is annihilated to rounding, while smooth fields see
 * a second-order consistent scheme (the weight's mean point deviates from the
 * midpoint only by O(h^2/r), which stays O(h^2) wherever h << r).
 *
 * On an origin-regular grid that premise fails near r = 0 -- and regular
 * fields carry no harmonic part there -- so such grids use the plain midpoint
 * flux r_{i+1/2}^{n-1} (f_{i+1} - f_i)/h_i instead, which is exact on r^2 and
 * second-order for smooth even fields all the way to the origin.  The flux
 * through r = 0 vanishes and the origin row reduces to the regularised form
 * 2 n (f_1 - f_0)/h_0^2.
 */
struct FluxLaplacian {
  std::vector<double> interface_coef;  ///< one per interface i+1/2, i = 0..N-2
  std::vector<double> cell_measure;    ///< one per node; used only for evolving rows
};

inline FluxLaplacian flux_laplacian_coefficients(const RadialGrid& g) {
  const std::size_t n = g.size();
  const double dim = static_cast<double>(g.dim());
  FluxLaplacian fl;
  fl.interface_coef.resize(n - 1);
  fl.cell_measure.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double rl = g.node(i);
    const double rr = g.node(i + 1);
    if (g.origin_regular()) {
      const double rm = 0.5 * (rl + rr);
      fl.interface_coef[i] = std::pow(rm, dim - 1.0) / (rr - rl);
    } else {
      const double integral =
          (std::pow(rl, 2.0 - dim) - std::pow(rr, 2.0 - dim)) / (dim - 2.0);
      fl.interface_coef[i] = 1.0 / integral;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = (i == 0) ? (g.origin_regular() ? 0.0 : g.node(0))
                               : 0.5 * (g.node(i - 1) + g.node(i));
    const double hi = (i + 1 == n) ? g.node(n - 1) : 0.5 * (g.node(i) + g.node(i + 1));
    fl.cell_measure[i] = (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
  }
  return fl;
}

/**
 * Matrix of the flux-form radial Laplacian.  Rows of nodes that carry
 * Dirichlet data (the outer node, and the inner node when r_inner > 0) are
 * zero; the caller decides how boundary values enter.  The origin node of an
 * origin-regular grid is an evolving row.
 */
inline Tridiagonal laplacian_matrix(const RadialGrid& g) {
  const std::size_t n = g.size();
  const FluxLaplacian fl = flux_laplacian_coefficients(g);
  Tridiagonal m(n);
  const std::size_t first = g.origin_regular() ? 0 : 1;
  for (std::size_t i = first; i + 1 < n; ++i) {
    const double w = fl.cell_measure[i];
    const double cu = fl.interface_coef[i] / w;
    const double cl = (i == 0) ? 0.0 : fl.interface_coef[i - 1] / w;
    m.upper[i] = cu;
    m.lower[i] = cl;
    m.diag[i] = -(cu + cl);
  }
  return m;
}

/**
 * Radial Laplacian lap f = f'' + (n-1)/r f' of a sampled field.
 *
 * Interior nodes use the conservative flux form (see laplacian_matrix);
 * endpoint values are extrapolated with one-sided second-order stencils so
 * that diagnostics remain defined there, but they depend on boundary data and
 * must not be used for time stepping.
 */
inline std::vector<double> radial_laplacian(const RadialGrid& g, const std::vector<double>& f) {
  const std::size_t n = g.size();
  require_size(f.size(), n, "radial_laplacian");
  const Tridiagonal m = laplacian_matrix(g);
  std::vector<double> lap = m.apply(f);
  const double dim = static_cast<double>(g.dim());
  if (!g.origin_regular()) {
    const auto d = detail::endpoint_derivatives(g, f, /*at_start=*/true);
    lap[0] = d[1] + (dim - 1.0) / g.node(0) * d[0];
  }
  {
    const auto d = detail::endpoint_derivatives(g, f, /*at_start=*/false);
    lap[n - 1] = d[1] + (dim - 1.0) / g.node(n - 1) * d[0];
  }
  return lap;
}

inline std::vector<double> radial_laplacian(const ConformalField& f) {
  return radial_laplacian(*f.grid(), f.values());
}

/**
 * First radial derivative, second-order: centred three-point stencils in the
 * interior, one-sided at the ends.  At an origin-regular node the field is
 * even in r, so f'(0) = 0 exactly.
 */
inline std::vector<double> radial_derivative(const RadialGrid& g, const std::vector<double>& f) {
  const std::size_t n = g.size();
  require_size(f.size(), n, "radial_derivative");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.node(i) - g.node(i - 1);
    const double hp = g.node(i + 1) - g.node(i);
    d[i] = (-hp / (hm * (hm + hp))) * f[i - 1] + ((hp - hm) / (hm * hp)) * f[i] +
           (hm / (hp * (hm + hp))) * f[i + 1];
  }
  if (g.origin_regular()) {
    d[0] = 0.0;
  } else {
    d[0] = detail::endpoint_derivatives(g, f, true)[0];
  }
  d[n - 1] = detail::endpoint_derivatives(g, f, false)[0];
  return d;
}

/** Second radial derivative by local polynomial fit (diagnostics / norms). */
inline std::vector<double> radial_second_derivative(const RadialGrid& g,
                                                    const std::vector<double>& f) {
  const std::size_t n = g.size();
  require_size(f.size(), n, "radial_second_derivative");
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.node(i) - g.node(i - 1);
    const double hp = g.node(i + 1) - g.node(i);
    d[i] = 2.0 * (f[i - 1] / (hm * (hm + hp)) - f[i] / (hm * hp) + f[i + 1] / (hp * (hm + hp)));
  }
  if (g.origin_regular()) {
    // Even extension across r = 0: the quadratic through (0, f0), (±h, f1).
    const double h = g.spacing(0);
    d[0] = 2.0 * (f[1] - f[0]) / (h * h);
  } else {
    d[0] = detail::endpoint_derivatives(g, f, true)[1];
  }
  d[n - 1] = detail::endpoint_derivatives(g, f, false)[1];
  return d;
}

/** Matrix form of radial_derivative on interior nodes (end rows zero). */
inline Tridiagonal derivative_matrix(const RadialGrid& g) {
  const std::size_t n = g.size();
  Tridiagonal m(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.node(i) - g.node(i - 1);
    const double hp = g.node(i + 1) - g.node(i);
    m.lower[i] = -hp / (hm * (hm + hp));
    m.diag[i] = (hp - hm) / (hm * hp);
    m.upper[i] = hm / (hp * (hm + hp));
  }
  return m;
}

/**
 * Conformal Laplacian L f = lap f - a R0 f for a background of scalar
 * curvature R0 sampled on the same grid.
 */
inline std::vector<double> conformal_laplacian(const RadialGrid& g, const std::vector<double>& f,
                                               const std::vector<double>& r0,
                                               const Constants& c) {
  require_size(f.size(), g.size(), "conformal_laplacian");
  require_size(r0.size(), g.size(), "conformal_laplacian (R0)");
  if (g.dim() != c.n) {
    throw InvalidArgumentError("conformal_laplacian: grid dimension " + std::to_string(g.dim()) +
                               " does not match constants for n = " + std::to_string(c.n));
  }
  std::vector<double> out = radial_laplacian(g, f);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] -= c.a * r0[i] * f[i];
  }
  return out;
}

/**
 * Scalar curvature of g = v^{4/(n-2)} delta over a flat background:
 *
 *   R(g) = -(1/a) v^{-p} lap v.
 *
 * Endpoint values inherit the one-sided extrapolation of radial_laplacian.
 */
inline std::vector<double> scalar_curvature(const ConformalField& v, const Constants& c) {
  if (v.grid()->dim() != c.n) {
    throw InvalidArgumentError("scalar_curvature: grid dimension " +
                               std::to_string(v.grid()->dim()) +
                               " does not match constants for n = " + std::to_string(c.n));
  }
  std::vector<double> lap = radial_laplacian(*v.grid(), v.values());
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = -(1.0 / c.a) * std::pow(v[i], -c.p) * lap[i];
  }
  return r;
}

/**
 * Value and first derivative of the local quadratic through the three nodes
 * nearest to r; used to evaluate sampled fields between nodes.
 */
struct LocalFit {
  double value = 0.0;
  double derivative = 0.0;
};

inline LocalFit interpolate_quadratic(const RadialGrid& g, const std::vector<double>& f,
                                      double r) {
  require_size(f.size(), g.size(), "interpolate_quadratic");
  if (r < g.r_inner() || r > g.r_outer()) {
    throw InvalidArgumentError("interpolate_quadratic: r = " + std::to_string(r) +
                               " outside [" + std::to_string(g.r_inner()) + ", " +
                               std::to_string(g.r_outer()) + "]");
  }
  std::size_t i = g.index_below(r);
  if (i == 0) i = 1;
  if (i + 1 >= g.size()) i = g.size() - 2;
  const double x0 = g.node(i - 1), x1 = g.node(i), x2 = g.node(i + 1);
  const double f0 = f[i - 1], f1 = f[i], f2 = f[i + 1];
  const double l0 = (r - x1) * (r - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (r - x0) * (r - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (r - x0) * (r - x1) / ((x2 - x0) * (x2 - x1));
  const double d0 = ((r - x1) + (r - x2)) / ((x0 - x1) * (x0 - x2));
  const double d1 = ((r - x0) + (r - x2)) / ((x1 - x0) * (x1 - x2));
  const double d2 = ((r - x0) + (r - x1)) / ((x2 - x0) * (x2 - x1));
  return {f0 * l0 + f1 * l1 + f2 * l2, f0 * d0 + f1 * d1 + f2 * d2};
}

}  // namespace yaf
