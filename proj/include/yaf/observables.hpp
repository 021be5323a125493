#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/field.hpp"
#include "yaf/flow.hpp"
#include "yaf/grid.hpp"
#include "yaf/mass.hpp"
#include "yaf/norms.hpp"
#include "yaf/operators.hpp"

namespace yaf {

/** A named scalar time series extracted from a trajectory. */
struct ObservableSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::pair<std::string, std::string>> metadata;

  void append(double t, double v) {
    if (!times.empty() && !(t > times.back())) {
      throw InvalidArgumentError("ObservableSeries '" + name +
                                 "': times must be strictly increasing");
    }
    times.push_back(t);
    values.push_back(v);
  }
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  double front() const { return values.front(); }
  double back() const { return values.back(); }
};

// ---------------------------------------------------------------------------
// ADM mass drift
// ---------------------------------------------------------------------------

/**
 * Mass conservation holds as an exact statement only in n = 3, 4, 5 (and the
 * discrete drift vanishes under refinement, it is not machine zero); outside
 * that range the series is still informative but carries no conservation
 * claim, which `conservation_applicable` records.
 */
struct MassDriftReport {
  ObservableSeries series;  ///< ADM mass against the geometric clock
  double initial_mass = 0.0;
  double max_drift = 0.0;  ///< max_t |m(t) - m(0)|
  bool conservation_applicable = true;
  std::string note;
};

inline MassDriftReport mass_drift(const FlowTrajectory& traj, const Constants& c,
                                  const std::vector<double>& radii) {
  if (traj.snapshots.empty()) {
    throw InvalidArgumentError("mass_drift: empty trajectory");
  }
  MassDriftReport rep;
  rep.series.name = "adm_mass";
  rep.conservation_applicable = (c.n >= 3 && c.n <= 5);
  if (!rep.conservation_applicable) {
    rep.note = "mass conservation is only asserted for n = 3, 4, 5; series reported "
               "without a conservation verdict";
  }
  for (const auto& s : traj.snapshots) {
    const AdmMassResult m = adm_mass(s.v, c, radii);
    rep.series.append(to_geometric_time(s.time, s.form, c), m.extrapolated);
  }
  rep.initial_mass = rep.series.front();
  for (double m : rep.series.values) {
    rep.max_drift = std::max(rep.max_drift, std::abs(m - rep.initial_mass));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Decay preservation
// ---------------------------------------------------------------------------

/**
 * Sup over the asymptotic region of r^{tau0} |v - 1| per snapshot.  Decay of
 * the initial order is preserved along the flow; the artifact-level check is
 * that the series never exceeds `allowed_factor` times its initial value.
 */
struct DecayReport {
  ObservableSeries series;
  double initial_value = 0.0;
  double sup_value = 0.0;
  double allowed_factor = 10.0;
  bool passed = true;
};

inline DecayReport decay_preservation(const FlowTrajectory& traj, double tau0,
                                      double allowed_factor = 10.0, double r_asym = -1.0) {
  if (traj.snapshots.empty()) {
    throw InvalidArgumentError("decay_preservation: empty trajectory");
  }
  if (!(tau0 > 0.0)) {
    throw InvalidArgumentError("decay_preservation: tau0 must be positive");
  }
  DecayReport rep;
  rep.allowed_factor = allowed_factor;
  rep.series.name = "weighted_tail_norm";
  rep.series.metadata.emplace_back("tau0", std::to_string(tau0));
  for (const auto& s : traj.snapshots) {
    const RadialGrid& g = *s.v.grid();
    std::vector<double> dev(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) dev[i] = s.v[i] - 1.0;
    rep.series.append(s.time, weighted_sup_norm(g, dev, -tau0, 0, r_asym));
  }
  rep.initial_value = rep.series.front();
  for (double v : rep.series.values) rep.sup_value = std::max(rep.sup_value, v);
  rep.passed = rep.sup_value <= allowed_factor * rep.initial_value + 1e-12;
  return rep;
}

// ---------------------------------------------------------------------------
// Convergence to a scalar-flat metric
// ---------------------------------------------------------------------------

/**
 * Convergence diagnostics on a compact region: the sup of |R(g(t))| over
 * r <= compact_radius must relax below `threshold` times its initial value
 * and be nonincreasing past its transient, R must stay nonnegative (within
 * sign_tol) since that is the regime the convergence statement covers, and v
 * must be nodewise nonincreasing (within mono_tol).
 *
 * The hypothesis R(g0) >= 0 is checked on the initial snapshot over all
 * evolving rows; a violation raises HypothesisError -- this monitor has
 * nothing to say about sign-indefinite initial curvature.
 */
struct ConvergenceReport {
  ObservableSeries curvature_series;     ///< sup_{r<=compact_radius} |R|
  ObservableSeries monotonicity_series;  ///< worst nodewise increase vs previous snapshot
  double initial_sup_r = 0.0;
  double final_sup_r = 0.0;
  double min_r_seen = 0.0;    ///< most negative R over the compact region and time
  double max_increase = 0.0;  ///< worst v increase between consecutive snapshots
  std::size_t transient_end = 0;  ///< index of the curvature-series maximum
  bool r_nonnegative = true;
  bool r_nonincreasing_after_transient = true;
  bool r_below_threshold = true;
  bool v_nonincreasing = true;
  bool passed = true;
  double threshold = 0.05;
};

inline ConvergenceReport convergence_monitor(const FlowTrajectory& traj, double compact_radius,
                                             const Constants& c, double threshold = 0.05,
                                             double sign_tol = 1e-8, double mono_tol = 1e-10,
                                             double abs_floor = 1e-10) {
  if (traj.snapshots.empty()) {
    throw InvalidArgumentError("convergence_monitor: empty trajectory");
  }
  const RadialGrid& g = *traj.initial().v.grid();
  const std::size_t first = g.origin_regular() ? 0 : 1;

  // hypothesis gate: R(g0) >= 0 on the evolving rows
  {
    const std::vector<double> r0 = scalar_curvature(traj.initial().v, c);
    double mn = 0.0;
    for (std::size_t i = first; i + 1 < g.size(); ++i) mn = std::min(mn, r0[i]);
    if (mn < -sign_tol) {
      throw HypothesisError("convergence_monitor: initial scalar curvature is not nonnegative "
                            "(min R(g0) = " +
                            std::to_string(mn) + "); the convergence statement does not apply");
    }
  }

  ConvergenceReport rep;
  rep.threshold = threshold;
  rep.curvature_series.name = "sup_curvature_compact";
  rep.monotonicity_series.name = "max_v_increase";

  const FlowState* prev = nullptr;
  for (const auto& s : traj.snapshots) {
    const std::vector<double> curv = scalar_curvature(s.v, c);
    double sup = 0.0;
    for (std::size_t i = first; i + 1 < g.size(); ++i) {
      if (g.node(i) > compact_radius) break;
      sup = std::max(sup, std::abs(curv[i]));
      rep.min_r_seen = std::min(rep.min_r_seen, curv[i]);
    }
    rep.curvature_series.append(s.time, sup);
    if (prev) {
      double inc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        inc = std::max(inc, s.v[i] - prev->v[i]);
      }
      rep.monotonicity_series.append(s.time, inc);
      rep.max_increase = std::max(rep.max_increase, inc);
    }
    prev = &s;
  }

  rep.initial_sup_r = rep.curvature_series.front();
  rep.final_sup_r = rep.curvature_series.back();
  std::size_t arg = 0;
  for (std::size_t k = 0; k < rep.curvature_series.size(); ++k) {
    if (rep.curvature_series.values[k] > rep.curvature_series.values[arg]) arg = k;
  }
  rep.transient_end = arg;
  const double wiggle = 1e-9 * std::max(1.0, rep.curvature_series.values[arg]);
  for (std::size_t k = arg; k + 1 < rep.curvature_series.size(); ++k) {
    if (rep.curvature_series.values[k + 1] > rep.curvature_series.values[k] + wiggle) {
      rep.r_nonincreasing_after_transient = false;
      break;
    }
  }
  rep.r_nonnegative = rep.min_r_seen >= -sign_tol;
  // curvature below abs_floor counts as converged outright (flat data's series
  // is rounding noise, and a relative test against ~0 would be meaningless)
  rep.r_below_threshold =
      rep.final_sup_r <= std::max(threshold * rep.initial_sup_r, abs_floor);
  rep.v_nonincreasing = rep.max_increase <= mono_tol;
  rep.passed = rep.r_nonnegative && rep.r_nonincreasing_after_transient &&
               rep.r_below_threshold && rep.v_nonincreasing;
  return rep;
}

// ---------------------------------------------------------------------------
// Subsolution check
// ---------------------------------------------------------------------------

/**
 * Verifies that w0 > 0 is a subsolution of the conformal Laplacian against
 * background curvature R0, i.e. L w0 = lap w0 - a R0 w0 >= -tol on every
 * evolving row, and reports the largest admissible scaling delta with
 * delta w0 < 1 (the static lower barrier is delta w0).
 */
struct SubsolutionReport {
  double min_lw0 = 0.0;    ///< minimum of L w0 over evolving rows
  bool nonnegative = true; ///< min_lw0 >= -tol
  double delta_upper = 0.0;  ///< sup of admissible delta: 1 / max w0
  double tol = 1e-10;
};

inline SubsolutionReport subsolution_check(const ConformalField& w0,
                                           const std::vector<double>& r0, const Constants& c,
                                           double tol = 1e-10) {
  const RadialGrid& g = *w0.grid();
  require_size(r0.size(), g.size(), "subsolution_check (R0)");
  const std::vector<double> lw = conformal_laplacian(g, w0.values(), r0, c);
  const std::size_t first = g.origin_regular() ? 0 : 1;
  SubsolutionReport rep;
  rep.tol = tol;
  rep.min_lw0 = kInfinity;
  for (std::size_t i = first; i + 1 < g.size(); ++i) {
    rep.min_lw0 = std::min(rep.min_lw0, lw[i]);
  }
  if (!std::isfinite(rep.min_lw0)) rep.min_lw0 = 0.0;  // no evolving rows
  rep.nonnegative = rep.min_lw0 >= -tol;
  rep.delta_upper = 1.0 / w0.max_value();
  return rep;
}

}  // namespace yaf
