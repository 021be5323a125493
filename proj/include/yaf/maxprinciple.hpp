#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/flow.hpp"
#include "yaf/grid.hpp"
#include "yaf/operators.hpp"

namespace yaf {

// ---------------------------------------------------------------------------
// Constant calculators of the generalized maximum principle
//
// A solution of m(x) v_t <= div(a grad v) + b . grad v + c v with v(.,0) <= 0
// stays nonpositive provided the coefficients are uniformly bounded,
//   m0 <= m <= m1,  alpha1' <= a <= alpha1,  |b| <= alpha2,  |c| <= alpha3,
// the metric obeys the volume growth bound vol(B_rho) <= exp(k(1+rho^2)), and
// the time-dependence of the metric is controlled by alpha4, alpha5.  The
// proof runs a weighted L^2 estimate over a short window eta and covers [0,T]
// by induction; the calculators below reproduce its explicit constants.
// ---------------------------------------------------------------------------

/// Weight exponent scale: theta = 1/(4 alpha1).
inline double theta_constant(double alpha1) {
  if (!(alpha1 > 0.0)) {
    throw InvalidArgumentError("theta_constant: alpha1 must be positive");
  }
  return 1.0 / (4.0 * alpha1);
}

/**
 * Largest admissible induction window:
 * eta < min(T, 1/(64 K0), 1/(32 alpha4), 1/(4 alpha5)), the last term dropped
 * when alpha5 = 0.  The returned value carries a 0.99 safety factor so the
 * strict inequality holds.
 */
inline double admissible_eta(double T, double K0, double alpha4, double alpha5) {
  if (!(T > 0.0)) throw InvalidArgumentError("admissible_eta: T must be positive");
  if (!(K0 > 0.0)) throw InvalidArgumentError("admissible_eta: K0 must be positive");
  if (!(alpha4 > 0.0)) throw InvalidArgumentError("admissible_eta: alpha4 must be positive");
  if (alpha5 < 0.0) throw InvalidArgumentError("admissible_eta: alpha5 must be nonnegative");
  double bound = std::min(T, std::min(1.0 / (64.0 * K0), 1.0 / (32.0 * alpha4)));
  if (alpha5 > 0.0) bound = std::min(bound, 1.0 / (4.0 * alpha5));
  return 0.99 * bound;
}

/// Smallest beta with m0 beta >= 2 n alpha5 + 4 alpha3 + 4 alpha2^2 / alpha1'.
inline double beta_lower_bound(int n, double m0, double alpha5, double alpha3, double alpha2,
                               double alpha1_prime) {
  if (!(m0 > 0.0)) throw InvalidArgumentError("beta_lower_bound: m0 must be positive");
  if (!(alpha1_prime > 0.0)) {
    throw InvalidArgumentError("beta_lower_bound: alpha1_prime must be positive");
  }
  const double nd = static_cast<double>(n);
  return (2.0 * nd * alpha5 + 4.0 * alpha3 + 4.0 * alpha2 * alpha2 / alpha1_prime) / m0;
}

/// Gaussian-type weight h(d, t) = -theta d^2 / (4 (2 eta - t)), defined for
/// 0 <= t < 2 eta; always <= 0, and h(0, t) = 0.
inline double h_weight(double d, double t, double theta, double eta) {
  if (!(theta > 0.0) || !(eta > 0.0)) {
    throw InvalidArgumentError("h_weight: theta and eta must be positive");
  }
  if (t < 0.0 || !(t < 2.0 * eta)) {
    throw InvalidArgumentError("h_weight: t must lie in [0, 2 eta)");
  }
  return -theta * d * d / (4.0 * (2.0 * eta - t));
}

/// Number of eta-length stages covering [0, T]: ceil(T / eta); 0 when T = 0.
inline std::size_t induction_cover(double T, double eta) {
  if (T < 0.0) throw InvalidArgumentError("induction_cover: T must be nonnegative");
  if (!(eta > 0.0)) throw InvalidArgumentError("induction_cover: eta must be positive");
  if (T == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(T / eta));
}

// ---------------------------------------------------------------------------
// Coefficient data for the discrete verifier
// ---------------------------------------------------------------------------

/** Uniform bounds the coefficient fields must respect. */
struct ParabolicBounds {
  double m0 = 1.0;            ///< lower bound of m(x)
  double m1 = 1.0;            ///< upper bound of m(x)
  double alpha1_prime = 1.0;  ///< lower bound of a
  double alpha1 = 1.0;        ///< upper bound of a
  double alpha2 = 0.0;        ///< bound of |b|
  double alpha3 = 0.0;        ///< bound of |c|
  double alpha4 = 1.0;        ///< metric time-regularity constant
  double alpha5 = 0.0;        ///< metric time-derivative constant
  double k = 1.0;             ///< volume growth constant
  double K0 = 1.0;            ///< curvature-scale constant of the eta window
};

inline void validate_bounds(const ParabolicBounds& b) {
  std::vector<std::string> bad;
  if (!(b.m0 > 0.0)) bad.push_back("m0 must be positive");
  if (!(b.m1 >= b.m0)) bad.push_back("m1 must be >= m0");
  if (!(b.alpha1_prime > 0.0)) bad.push_back("alpha1_prime must be positive");
  if (!(b.alpha1 >= b.alpha1_prime)) bad.push_back("alpha1 must be >= alpha1_prime");
  if (b.alpha2 < 0.0) bad.push_back("alpha2 must be nonnegative");
  if (b.alpha3 < 0.0) bad.push_back("alpha3 must be nonnegative");
  if (!(b.alpha4 > 0.0)) bad.push_back("alpha4 must be positive");
  if (b.alpha5 < 0.0) bad.push_back("alpha5 must be nonnegative");
  if (!(b.k > 0.0)) bad.push_back("k must be positive");
  if (!(b.K0 > 0.0)) bad.push_back("K0 must be positive");
  if (!bad.empty()) throw ConfigError(bad);
}

/// Scalar coefficient sampled over space-time.
using CoefficientFn = std::function<double(double r, double t)>;

/**
 * The data of one parabolic inequality on a radial grid.  m is the static
 * weight m(x) (evaluated at t = 0 by the verifier); a, b, c may depend on
 * time.  b is the signed radial component of the vector field.
 */
struct ParabolicCoefficients {
  RadialGrid::Ptr grid;
  CoefficientFn m;
  CoefficientFn a;
  CoefficientFn b;
  CoefficientFn c;
  ParabolicBounds bounds;
};

/**
 * Sample every coefficient at all grid nodes (and `a` at the flux interfaces)
 * across `time_samples` equispaced times in [0, T] and check the declared
 * bounds.  Throws HypothesisError naming the first violated bound.
 */
inline void scan_coefficients(const ParabolicCoefficients& pc, double T,
                              std::size_t time_samples = 5) {
  if (!pc.grid) throw InvalidArgumentError("scan_coefficients: null grid");
  if (!pc.m || !pc.a || !pc.b || !pc.c) {
    throw InvalidArgumentError("scan_coefficients: all four coefficient functions are required");
  }
  validate_bounds(pc.bounds);
  const RadialGrid& g = *pc.grid;
  const std::size_t nt = std::max<std::size_t>(2, time_samples);
  auto fail = [](const std::string& which, double value, double r, double t) {
    throw HypothesisError("coefficient bound violated: " + which + " (value " +
                          std::to_string(value) + " at r = " + std::to_string(r) +
                          ", t = " + std::to_string(t) + ")");
  };
  for (std::size_t kt = 0; kt < nt; ++kt) {
    const double t = T * static_cast<double>(kt) / static_cast<double>(nt - 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.node(i);
      const double mv = pc.m(r, 0.0);
      if (mv < pc.bounds.m0) fail("m >= m0", mv, r, 0.0);
      if (mv > pc.bounds.m1) fail("m <= m1", mv, r, 0.0);
      const double av = pc.a(r, t);
      if (av < pc.bounds.alpha1_prime) fail("a >= alpha1_prime", av, r, t);
      if (av > pc.bounds.alpha1) fail("a <= alpha1", av, r, t);
      const double bv = pc.b(r, t);
      if (std::abs(bv) > pc.bounds.alpha2) fail("|b| <= alpha2", bv, r, t);
      const double cv = pc.c(r, t);
      if (std::abs(cv) > pc.bounds.alpha3) fail("|c| <= alpha3", cv, r, t);
    }
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      const double rm = 0.5 * (g.node(i) + g.node(i + 1));
      const double av = pc.a(rm, t);
      if (av < pc.bounds.alpha1_prime) fail("a >= alpha1_prime", av, rm, t);
      if (av > pc.bounds.alpha1) fail("a <= alpha1", av, rm, t);
    }
  }
}

// ---------------------------------------------------------------------------
// Discrete nonpositivity verifier
// ---------------------------------------------------------------------------

struct NodeTimePoint {
  std::size_t node = 0;
  double r = 0.0;
  double t = 0.0;
};

struct MaxPrincipleReport {
  double max_violation = 0.0;  ///< max over nodes and times of v
  std::optional<NodeTimePoint> violating_node_time;  ///< set when above tolerance
  double eta_used = 0.0;       ///< admissible_eta of the declared bounds
  std::size_t steps_used = 0;  ///< induction_cover(T, eta_used)
  bool passed = false;         ///< max_violation <= tolerance
  double tolerance = 1e-10;
};

/**
 * Evolve the equality case m(x) v_t = div(a grad v) + b . grad v + c v --
 * the extremal instance of the inequality; subsolutions stay below it by the
 * discrete comparison principle -- with implicit Euler on the radial grid and
 * report the largest value v ever attains.
 *
 * The diffusion term is discretised in flux form with the interface
 * coefficient scaled by a at the interface; the advection term is upwinded so
 * the implicit matrix keeps nonpositive off-diagonal entries; with the time
 * step capped below m0/alpha3 the matrix is strictly diagonally dominant and
 * inverse-positive, so nonpositivity is preserved structurally and the check
 * measures roundoff, not scheme artefacts.  The domain ends carry v = 0
 * (compact-truncation surrogate of the noncompact setting: the growth
 * condition controls what the truncation discards); at a regular origin the
 * row evolves and radial regularity makes the advection term vanish there.
 *
 * eta_used and steps_used are the window and stage count the induction proof
 * would use -- certificates derived from the declared bounds, not inputs to
 * the discrete march.
 */
inline MaxPrincipleReport verify_nonpositivity(const ParabolicCoefficients& pc,
                                               const std::vector<double>& v0, double T,
                                               double dt, double tolerance = 1e-10) {
  if (!pc.grid) throw InvalidArgumentError("verify_nonpositivity: null grid");
  const RadialGrid& g = *pc.grid;
  if (v0.size() != g.size()) {
    throw InvalidArgumentError("verify_nonpositivity: v0 size does not match the grid");
  }
  if (!(T > 0.0) || !(dt > 0.0)) {
    throw InvalidArgumentError("verify_nonpositivity: T and dt must be positive");
  }
  for (std::size_t i = 0; i < v0.size(); ++i) {
    if (!(v0[i] <= 0.0)) {
      throw HypothesisError("verify_nonpositivity: initial data must be nonpositive; v0 = " +
                            std::to_string(v0[i]) + " at node " + std::to_string(i));
    }
  }
  scan_coefficients(pc, T);

  MaxPrincipleReport rep;
  rep.tolerance = tolerance;
  rep.eta_used = admissible_eta(T, pc.bounds.K0, pc.bounds.alpha4, pc.bounds.alpha5);
  rep.steps_used = induction_cover(T, rep.eta_used);

  // c > 0 erodes the diagonal m/dt - c; keep a strict margin
  double dt_eff = dt;
  if (pc.bounds.alpha3 > 0.0) dt_eff = std::min(dt_eff, 0.9 * pc.bounds.m0 / pc.bounds.alpha3);

  const std::size_t n = g.size();
  const FluxLaplacian fl = flux_laplacian_coefficients(g);
  const std::size_t first = g.origin_regular() ? 0 : 1;

  std::vector<double> m_node(n);
  for (std::size_t i = 0; i < n; ++i) m_node[i] = pc.m(g.node(i), 0.0);

  std::vector<double> v = v0;
  rep.max_violation = v[0];
  NodeTimePoint worst{0, g.node(0), 0.0};
  auto track = [&](const std::vector<double>& field, double t) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (field[i] > rep.max_violation) {
        rep.max_violation = field[i];
        worst = {i, g.node(i), t};
      }
    }
  };
  track(v, 0.0);

  const double tiny = 1e-12 * std::max(1.0, T);
  double t = 0.0;
  while (t < T - tiny) {
    const double dtk = std::min(dt_eff, T - t);
    const double tn = t + dtk;
    Tridiagonal A(n);
    std::vector<double> rhs(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < first || i + 1 == n) {
        A.diag[i] = 1.0;  // truncation surrogate: v = 0 on the domain ends
        continue;
      }
      const double w = fl.cell_measure[i];
      const double cu = pc.a(0.5 * (g.node(i) + g.node(i + 1)), tn) * fl.interface_coef[i] / w;
      const double cl =
          (i == 0) ? 0.0
                   : pc.a(0.5 * (g.node(i - 1) + g.node(i)), tn) * fl.interface_coef[i - 1] / w;
      double up = cu;
      double lo = cl;
      double di = -(cu + cl) + pc.c(g.node(i), tn);
      if (i > 0) {  // a regular origin has no advection: radial fields vanish there
        const double bi = pc.b(g.node(i), tn);
        if (bi > 0.0) {
          const double hp = g.node(i + 1) - g.node(i);
          up += bi / hp;
          di -= bi / hp;
        } else if (bi < 0.0) {
          const double hm = g.node(i) - g.node(i - 1);
          lo += -bi / hm;
          di -= -bi / hm;
        }
      }
      A.diag[i] = m_node[i] / dtk - di;
      A.lower[i] = -lo;
      A.upper[i] = -up;
      rhs[i] = m_node[i] / dtk * v[i];
    }
    v = solve_tridiagonal(A, std::move(rhs));
    track(v, tn);
    t = tn;
  }

  rep.passed = rep.max_violation <= tolerance;
  if (!rep.passed) rep.violating_node_time = worst;
  return rep;
}

// ---------------------------------------------------------------------------
// Volume growth hypothesis
// ---------------------------------------------------------------------------

struct VolumeGrowthReport {
  bool passed = false;
  double min_log_margin = 0.0;  ///< min over samples of k(1+rho^2) - log(vol)
  double worst_radius = 0.0;    ///< coordinate radius of the tightest sample
  double worst_time = 0.0;
  double k = 0.0;
};

/**
 * Check vol(B_rho) <= exp(k (1 + rho^2)) on every snapshot of a trajectory.
 * Geodesic radius and ball volume are accumulated from the inner edge of the
 * grid by the trapezoid rule in the metric g = w delta, w = v^{4/(n-2)}:
 *   rho(r) = Int sqrt(w) ds,   vol(r) = omega_{n-1} Int w^{n/2} s^{n-1} ds.
 * On an origin-regular grid these are genuine metric balls; on an excised
 * grid the annulus volume underestimates the ball volume, so a reported
 * failure is conclusive while a pass is conservative.
 */
inline VolumeGrowthReport volume_growth_check(const FlowTrajectory& traj, double k) {
  if (traj.snapshots.empty()) {
    throw InvalidArgumentError("volume_growth_check: empty trajectory");
  }
  if (!(k > 0.0)) throw InvalidArgumentError("volume_growth_check: k must be positive");

  VolumeGrowthReport rep;
  rep.k = k;
  rep.min_log_margin = kInfinity;
  for (const FlowState& s : traj.snapshots) {
    const RadialGrid& g = *s.v.grid();
    const double nd = static_cast<double>(g.dim());
    const double omega = Constants::for_dimension(g.dim()).unit_sphere_area();
    std::vector<double> w(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      w[i] = std::pow(s.v[i], 4.0 / (nd - 2.0));
    }
    double rho = 0.0;
    double vol = 0.0;
    auto shell = [&](std::size_t i) {
      return omega * std::pow(w[i], 0.5 * nd) * std::pow(g.node(i), nd - 1.0);
    };
    for (std::size_t i = 1; i < g.size(); ++i) {
      const double h = g.node(i) - g.node(i - 1);
      rho += 0.5 * h * (std::sqrt(w[i - 1]) + std::sqrt(w[i]));
      vol += 0.5 * h * (shell(i - 1) + shell(i));
      if (!(vol > 0.0)) continue;
      const double margin = k * (1.0 + rho * rho) - std::log(vol);
      if (margin < rep.min_log_margin) {
        rep.min_log_margin = margin;
        rep.worst_radius = g.node(i);
        rep.worst_time = s.time;
      }
    }
  }
  rep.passed = rep.min_log_margin >= 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Randomized verification
// ---------------------------------------------------------------------------

/** Aggregate of many randomized verify_nonpositivity runs. */
struct RandomizedStudy {
  std::size_t instances = 0;
  double max_violation = 0.0;      ///< worst positive part over every instance
  std::size_t worst_instance = 0;  ///< index that produced max_violation
  double eta_used = 0.0;
  std::size_t steps_used = 0;
  double tolerance = 1e-10;
  bool passed = false;  ///< every instance stayed within tolerance
};

/**
 * Draw `instances` coefficient quadruples strictly inside the declared
 * bounds -- each of m, a, b, c an offset plus a trig wave in r with a slow
 * phase drift in t, amplitudes capped at 90% of the admissible envelope --
 * together with a nonpositive initial profile vanishing at both domain ends,
 * and run verify_nonpositivity on each.  The draw is deterministic in
 * `seed`, so a reported failure is reproducible.
 */
inline RandomizedStudy randomized_nonpositivity_study(RadialGrid::Ptr grid,
                                                      const ParabolicBounds& bounds,
                                                      std::size_t instances, std::uint64_t seed,
                                                      double T, double dt,
                                                      double tolerance = 1e-10) {
  if (!grid) {
    throw InvalidArgumentError("randomized_nonpositivity_study: null grid");
  }
  if (instances == 0) {
    throw InvalidArgumentError("randomized_nonpositivity_study: need at least one instance");
  }
  validate_bounds(bounds);

  const double r0 = grid->r_inner(), r1 = grid->r_outer();
  const double mid_m = 0.5 * (bounds.m0 + bounds.m1);
  const double rad_m = 0.45 * (bounds.m1 - bounds.m0);
  const double mid_a = 0.5 * (bounds.alpha1_prime + bounds.alpha1);
  const double rad_a = 0.45 * (bounds.alpha1 - bounds.alpha1_prime);
  const double amp_b = 0.9 * bounds.alpha2;
  const double amp_c = 0.9 * bounds.alpha3;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.3, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> amp(0.5, 1.5);

  RandomizedStudy study;
  study.instances = instances;
  study.tolerance = tolerance;
  study.passed = true;
  for (std::size_t k = 0; k < instances; ++k) {
    const double wm = freq(rng), pm = phase(rng);
    const double wa = freq(rng), pa = phase(rng);
    const double wb = freq(rng), pb = phase(rng);
    const double wc = freq(rng), pc_phase = phase(rng);
    const double a0 = amp(rng), wave = freq(rng);

    ParabolicCoefficients pc;
    pc.grid = grid;
    pc.bounds = bounds;
    pc.m = [=](double r, double t) { return mid_m + rad_m * std::sin(wm * r + pm + 0.2 * t); };
    pc.a = [=](double r, double t) { return mid_a + rad_a * std::sin(wa * r + pa + 0.2 * t); };
    pc.b = [=](double r, double t) { return amp_b * std::cos(wb * r + pb + 0.2 * t); };
    pc.c = [=](double r, double t) {
      return amp_c * std::sin(wc * r + pc_phase + 0.2 * t);
    };

    std::vector<double> v0(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double x = (grid->node(i) - r0) / (r1 - r0);
      v0[i] = -a0 * (1.0 + 0.4 * std::sin(wave * grid->node(i))) *
              std::sin(std::numbers::pi * x);
    }
    v0.front() = 0.0;
    v0.back() = 0.0;

    const MaxPrincipleReport rep = verify_nonpositivity(pc, v0, T, dt, tolerance);
    if (k == 0) {
      study.eta_used = rep.eta_used;
      study.steps_used = rep.steps_used;
    }
    if (rep.max_violation > study.max_violation) {
      study.max_violation = rep.max_violation;
      study.worst_instance = k;
    }
    study.passed = study.passed && rep.passed;
  }
  return study;
}

}  // namespace yaf
