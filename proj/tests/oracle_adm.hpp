#pragma once

// Brute-force Cartesian evaluation of the ADM flux integral, used as the
// independent oracle for the radial shortcut in yaf/mass.hpp.
//
// The metric g_ij(x) = psi(|x|) delta_ij, psi = v^{4/(n-2)}, is sampled as a
// full matrix function of Cartesian coordinates; every partial derivative in
// the surface integrand (d_j g_ij - d_i g_jj) dS^i is taken by fourth-order
// central differences, with no use of the radial symmetry beyond evaluating
// v(|y|).  The sphere average is taken over pseudo-random directions from a
// fixed seed, and the 1/(4 omega_{n-1}) normalisation cancels against the
// surface measure, leaving  m ~ r^{n-1}/(4K) * sum_k integrand(x_k).

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace yaf::testing {

inline double cartesian_adm_mass(int n, const std::function<double(double)>& v, double radius,
                                 int samples = 64, double rel_step = 2e-3,
                                 std::uint64_t seed = 20240811u) {
  const double conf_expo = 4.0 / (static_cast<double>(n) - 2.0);
  auto psi = [&](const std::vector<double>& y) {
    double rr = 0.0;
    for (double c : y) rr += c * c;
    return std::pow(v(std::sqrt(rr)), conf_expo);
  };
  auto metric = [&](const std::vector<double>& y, int i, int j) {
    return (i == j) ? psi(y) : 0.0;
  };
  // fourth-order central difference of y -> metric(y, i, j) along axis k
  const double h = rel_step * radius;
  auto d_metric = [&](std::vector<double> y, int i, int j, int k) {
    auto at = [&](double offset) {
      y[static_cast<std::size_t>(k)] += offset;
      const double val = metric(y, i, j);
      y[static_cast<std::size_t>(k)] -= offset;
      return val;
    };
    return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> dir(static_cast<std::size_t>(n));
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& c : dir) {
        c = gauss(rng);
        norm += c * c;
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-8);
    std::vector<double> x(dir);
    for (int i = 0; i < n; ++i) {
      dir[static_cast<std::size_t>(i)] /= norm;
      x[static_cast<std::size_t>(i)] = radius * dir[static_cast<std::size_t>(i)];
    }
    double integrand = 0.0;
    for (int i = 0; i < n; ++i) {
      double div_term = 0.0;   // sum_j d_j g_ij
      double trace_term = 0.0; // d_i sum_j g_jj
      for (int j = 0; j < n; ++j) {
        div_term += d_metric(x, i, j, j);
        trace_term += d_metric(x, j, j, i);
      }
      integrand += dir[static_cast<std::size_t>(i)] * (div_term - trace_term);
    }
    acc += integrand;
  }
  return std::pow(radius, n - 1.0) / (4.0 * static_cast<double>(samples)) * acc;
}

}  // namespace yaf::testing
