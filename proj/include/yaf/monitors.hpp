#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "yaf/constants.hpp"
#include "yaf/errors.hpp"
#include "yaf/field.hpp"
#include "yaf/flow.hpp"
#include "yaf/mass.hpp"
#include "yaf/norms.hpp"
#include "yaf/operators.hpp"

namespace yaf {

/**
 * Live monitors attached to evolve().  Each observes every retained snapshot,
 * emits events (info for the series sample, violation when its bound is
 * broken), and keeps a verdict for the run summary.  None of them is fatal:
 * a broken bound is recorded and the evolution continues, so a single run
 * yields the complete violation history.
 */

namespace detail {

inline MonitorEvent make_event(double t, const std::string& monitor, const std::string& series,
                               double value, EventSeverity sev, std::string detail = {}) {
  MonitorEvent e;
  e.time = t;
  e.monitor = monitor;
  e.series = series;
  e.value = value;
  e.severity = sev;
  e.detail = std::move(detail);
  return e;
}

}  // namespace detail

/**
 * Checks every snapshot of u = v/v0 against the analytic comparison bracket
 * driven by sup |R(g0)|.  Times are converted to the rescaled clock, where
 * the bracket is stated.
 */
class BracketMonitor final : public FlowMonitor {
 public:
  BracketMonitor(ConformalField v0, double sup_r0, const Constants& c, double tol = 1e-6)
      : v0_(std::move(v0)), sup_r0_(sup_r0), c_(c), tol_(tol) {
    if (sup_r0 < 0.0) {
      throw InvalidArgumentError("BracketMonitor: sup_r0 must be >= 0");
    }
  }

  std::string name() const override { return "bracket"; }

  std::vector<MonitorEvent> observe(const FlowState& s) override {
    require_same_grid(*v0_.grid(), *s.v.grid(), "BracketMonitor");
    double u_min = kInfinity, u_max = 0.0;
    for (std::size_t i = 0; i < s.v.size(); ++i) {
      const double u = s.v[i] / v0_[i];
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
    }
    const double ts = to_rescaled_time(s.time, s.form, c_);
    const BracketReport rep = bracket_report(ts, u_min, u_max, sup_r0_, c_, tol_);
    std::vector<MonitorEvent> events;
    events.push_back(detail::make_event(s.time, name(), "u_min", u_min,
                                        EventSeverity::info));
    events.push_back(detail::make_event(s.time, name(), "u_max", u_max,
                                        EventSeverity::info));
    if (!rep.satisfied) {
      ++violations_;
      std::ostringstream os;
      os << "u in [" << u_min << ", " << u_max << "] outside bracket [" << rep.lower << ", "
         << rep.upper << "] at rescaled time " << ts;
      worst_detail_ = os.str();
      events.push_back(detail::make_event(s.time, name(), "bracket_violation",
                                          std::max(rep.lower - u_min, u_max - rep.upper),
                                          EventSeverity::violation, worst_detail_));
    }
    return events;
  }

  bool passed() const override { return violations_ == 0; }
  std::string verdict_detail() const override {
    return passed() ? "all snapshots inside the comparison bracket" : worst_detail_;
  }

 private:
  ConformalField v0_;
  double sup_r0_;
  Constants c_;
  double tol_;
  int violations_ = 0;
  std::string worst_detail_;
};

/** ADM mass per snapshot; flags drift beyond `max_drift` from the first value. */
class MassMonitor final : public FlowMonitor {
 public:
  MassMonitor(const Constants& c, std::vector<double> radii, double max_drift = kInfinity)
      : c_(c), radii_(std::move(radii)), max_drift_(max_drift) {}

  std::string name() const override { return "mass"; }

  std::vector<MonitorEvent> observe(const FlowState& s) override {
    const AdmMassResult m = adm_mass(s.v, c_, radii_);
    if (!initial_) initial_ = m.extrapolated;
    const double drift = std::abs(m.extrapolated - *initial_);
    worst_drift_ = std::max(worst_drift_, drift);
    std::vector<MonitorEvent> events;
    events.push_back(
        detail::make_event(s.time, name(), "adm_mass", m.extrapolated, EventSeverity::info));
    if (drift > max_drift_) {
      ++violations_;
      events.push_back(detail::make_event(s.time, name(), "mass_drift", drift,
                                          EventSeverity::violation,
                                          "ADM mass drifted beyond the configured bound"));
    }
    return events;
  }

  bool passed() const override { return violations_ == 0; }
  std::string verdict_detail() const override {
    std::ostringstream os;
    os << "max |m(t) - m(0)| = " << worst_drift_;
    return os.str();
  }
  double max_drift_seen() const { return worst_drift_; }

 private:
  Constants c_;
  std::vector<double> radii_;
  double max_drift_;
  std::optional<double> initial_;
  double worst_drift_ = 0.0;
  int violations_ = 0;
};

/**
 * Weighted tail norm sup r^{tau0} |v - 1| per snapshot; flags any value
 * exceeding `factor` times the initial one (decay-preservation bound).
 */
class TailNormMonitor final : public FlowMonitor {
 public:
  explicit TailNormMonitor(double tau0, double factor = 10.0, double r_asym = -1.0)
      : tau0_(tau0), factor_(factor), r_asym_(r_asym) {
    if (!(tau0 > 0.0)) {
      throw InvalidArgumentError("TailNormMonitor: tau0 must be positive");
    }
  }

  std::string name() const override { return "tail_norm"; }

  std::vector<MonitorEvent> observe(const FlowState& s) override {
    const RadialGrid& g = *s.v.grid();
    std::vector<double> dev(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) dev[i] = s.v[i] - 1.0;
    const double norm = weighted_sup_norm(g, dev, -tau0_, 0, r_asym_);
    if (!initial_) initial_ = norm;
    std::vector<MonitorEvent> events;
    events.push_back(
        detail::make_event(s.time, name(), "weighted_tail_norm", norm, EventSeverity::info));
    if (norm > factor_ * *initial_ + 1e-12) {
      ++violations_;
      events.push_back(detail::make_event(s.time, name(), "tail_growth", norm,
                                          EventSeverity::violation,
                                          "weighted tail norm exceeded its allowed factor"));
    }
    return events;
  }

  bool passed() const override { return violations_ == 0; }

 private:
  double tau0_;
  double factor_;
  double r_asym_;
  std::optional<double> initial_;
  int violations_ = 0;
};

/**
 * Tracks min R(g(t)) over the evolving rows.  The first snapshot is the
 * hypothesis gate: initial curvature that is not nonnegative raises
 * HypothesisError, because everything this monitor asserts afterwards
 * presupposes R(g0) >= 0.  Later sign violations are recorded as events.
 */
class CurvatureSignMonitor final : public FlowMonitor {
 public:
  explicit CurvatureSignMonitor(const Constants& c, double tol = 1e-8) : c_(c), tol_(tol) {}

  std::string name() const override { return "curvature_sign"; }

  std::vector<MonitorEvent> observe(const FlowState& s) override {
    const RadialGrid& g = *s.v.grid();
    const std::vector<double> curv = scalar_curvature(s.v, c_);
    const std::size_t first = g.origin_regular() ? 0 : 1;
    double mn = 0.0;
    for (std::size_t i = first; i + 1 < g.size(); ++i) mn = std::min(mn, curv[i]);
    if (!seen_initial_) {
      seen_initial_ = true;
      if (mn < -tol_) {
        throw HypothesisError(
            "curvature_sign monitor: initial scalar curvature is not nonnegative (min R(g0) = " +
            std::to_string(mn) + ")");
      }
    }
    worst_ = std::min(worst_, mn);
    std::vector<MonitorEvent> events;
    events.push_back(
        detail::make_event(s.time, name(), "min_curvature", mn, EventSeverity::info));
    if (mn < -tol_) {
      ++violations_;
      events.push_back(detail::make_event(s.time, name(), "sign_violation", mn,
                                          EventSeverity::violation,
                                          "scalar curvature dropped below zero"));
    }
    return events;
  }

  bool passed() const override { return violations_ == 0; }
  std::string verdict_detail() const override {
    std::ostringstream os;
    os << "min R over the run = " << worst_;
    return os.str();
  }

 private:
  Constants c_;
  double tol_;
  bool seen_initial_ = false;
  double worst_ = 0.0;
  int violations_ = 0;
};

/** Nodewise monotone decrease of v between consecutive retained snapshots. */
class MonotonicityMonitor final : public FlowMonitor {
 public:
  explicit MonotonicityMonitor(double tol = 1e-10) : tol_(tol) {}

  std::string name() const override { return "monotonicity"; }

  std::vector<MonitorEvent> observe(const FlowState& s) override {
    std::vector<MonitorEvent> events;
    if (prev_) {
      double inc = 0.0;
      for (std::size_t i = 0; i < s.v.size(); ++i) {
        inc = std::max(inc, s.v[i] - (*prev_)[i]);
      }
      worst_ = std::max(worst_, inc);
      events.push_back(
          detail::make_event(s.time, name(), "max_increase", inc, EventSeverity::info));
      if (inc > tol_) {
        ++violations_;
        events.push_back(detail::make_event(s.time, name(), "monotonicity_violation", inc,
                                            EventSeverity::violation,
                                            "v increased nodewise beyond tolerance"));
      }
    }
    prev_ = s.v.values();
    return events;
  }

  bool passed() const override { return violations_ == 0; }
  std::string verdict_detail() const override {
    std::ostringstream os;
    os << "max nodewise increase = " << worst_;
    return os.str();
  }

 private:
  double tol_;
  std::optional<std::vector<double>> prev_;
  double worst_ = 0.0;
  int violations_ = 0;
};

/**
 * Records min v per snapshot and flags values at or below the floor.  The
 * stepper already refuses to produce non-positive factors; this monitor
 * guards the stronger uniform lower bound a fine solution must keep.
 */
class PositivityMonitor final : public FlowMonitor {
 public:
  explicit PositivityMonitor(double floor = 0.0) : floor_(floor) {}

  std::string name() const override { return "positivity"; }

  std::vector<MonitorEvent> observe(const FlowState& s) override {
    const double mn = s.v.min_value();
    worst_ = std::min(worst_, mn);
    std::vector<MonitorEvent> events;
    events.push_back(detail::make_event(s.time, name(), "min_v", mn, EventSeverity::info));
    if (mn <= floor_) {
      ++violations_;
      events.push_back(detail::make_event(s.time, name(), "positivity_violation", mn,
                                          EventSeverity::violation,
                                          "conformal factor at or below the configured floor"));
    }
    return events;
  }

  bool passed() const override { return violations_ == 0; }

 private:
  double floor_;
  double worst_ = kInfinity;
  int violations_ = 0;
};

}  // namespace yaf
