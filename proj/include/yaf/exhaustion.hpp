#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yaf/errors.hpp"
#include "yaf/flow.hpp"
#include "yaf/grid.hpp"
#include "yaf/scenario.hpp"

namespace yaf {

/**
 * The existence construction as an algorithm: the flow is solved on an
 * increasing family of balls (annuli when r_inner > 0) with Dirichlet data
 * pinned at the initial profile on each outer sphere, and successive
 * solutions are compared on a fixed compact set.  The measured differences
 * e_m quantify how fast the truncated problems converge to the full-space
 * flow.
 *
 * All domains share the target spacing `dr`, and every domain radius must be
 * an integer multiple of it (measured from r_inner), so that grids of nested
 * domains coincide node-for-node on the compact set and e_m is a pure sup
 * over shared nodes, free of interpolation error.
 */
struct ExhaustionPlan {
  std::vector<double> domain_radii;  ///< outer radii of the nested domains
  double compact_radius = 10.0;      ///< fixed comparison set r <= compact_radius
  double r_inner = 0.0;              ///< shared inner boundary of every domain
  double dr = 0.25;                  ///< target spacing; radii must be multiples
  ScenarioSpec scenario;
};

inline void validate_plan(const ExhaustionPlan& plan) {
  if (plan.domain_radii.empty()) {
    throw InvalidArgumentError("exhaustion: at least one domain radius is required");
  }
  for (std::size_t m = 0; m + 1 < plan.domain_radii.size(); ++m) {
    if (!(plan.domain_radii[m] < plan.domain_radii[m + 1])) {
      throw InvalidArgumentError("exhaustion: domain radii must be strictly increasing");
    }
  }
  if (!(plan.compact_radius > plan.r_inner) ||
      !(plan.compact_radius < plan.domain_radii.front())) {
    throw InvalidArgumentError(
        "exhaustion: compact_radius must lie strictly between r_inner and the smallest domain");
  }
  if (!(plan.dr > 0.0)) {
    throw InvalidArgumentError("exhaustion: dr must be positive");
  }
  for (double R : plan.domain_radii) {
    const double steps = (R - plan.r_inner) / plan.dr;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
      throw InvalidArgumentError("exhaustion: domain radius " + std::to_string(R) +
                                 " is not an integer multiple of dr = " +
                                 std::to_string(plan.dr) + " from r_inner");
    }
  }
}

inline RadialGrid::Ptr domain_grid(const ExhaustionPlan& plan, std::size_t m) {
  const double R = plan.domain_radii.at(m);
  const auto count =
      static_cast<std::size_t>(std::llround((R - plan.r_inner) / plan.dr)) + 1;
  return RadialGrid::uniform(plan.scenario.n, plan.r_inner, R, count);
}

/** One truncated problem: its materialised data and its trajectory. */
struct DomainSolve {
  std::size_t index;
  double radius;
  Scenario scenario;
  FlowTrajectory trajectory;
};

/**
 * Solve the flow on domain m with the outer sphere pinned at the initial
 * profile (u = 1 in the normalised variable).  Solver errors are rethrown
 * tagged with the domain that produced them.
 */
inline DomainSolve solve_on_domain(const ExhaustionPlan& plan, std::size_t m, double t_end,
                                   const SolverConfig& cfg, TimeForm form = TimeForm::rescaled,
                                   std::size_t snapshot_stride = 1) {
  validate_plan(plan);
  if (m >= plan.domain_radii.size()) {
    throw InvalidArgumentError("exhaustion: domain index " + std::to_string(m) +
                               " out of range");
  }
  try {
    Scenario sc = make_scenario(plan.scenario, domain_grid(plan, m));
    SolverConfig domain_cfg = cfg;
    domain_cfg.boundary.inner = plan.r_inner > 0.0 ? InnerBoundaryKind::dirichlet
                                                   : InnerBoundaryKind::origin_regular;
    // absent explicit values, the stepper pins the boundary at the initial
    // profile's own endpoint values, which is exactly the construction
    FlowTrajectory traj =
        evolve(FlowState{sc.v0, 0.0, form}, domain_cfg, t_end, {}, snapshot_stride);
    if (traj.aborted) {
      throw StepError("solve aborted: " + traj.abort_reason, t_end, 0.0);
    }
    return DomainSolve{m, plan.domain_radii[m], std::move(sc), std::move(traj)};
  } catch (const Error& e) {
    throw Error("exhaustion domain m = " + std::to_string(m) +
                " (R = " + std::to_string(plan.domain_radii[m]) + "): " + e.what());
  }
}

/** One row of the convergence table: e_m compares domains m and m+1. */
struct ExhaustionRow {
  std::size_t m = 0;
  double radius = 0.0;  ///< radius of domain m (the smaller of the pair)
  double e_m = 0.0;     ///< sup over compact set and snapshot times of |v_m - v_{m+1}|
  std::optional<double> rate;  ///< log(e_{m-1}/e_m) / log(R_{m+1}/R_m); absent on row 0
};

/// Differences at or below this level are rounding noise; no rate is fit to them.
inline constexpr double kExhaustionRateFloor = 1e-14;

struct ExhaustionStudy {
  std::vector<DomainSolve> solves;
  std::vector<ExhaustionRow> table;
  std::vector<double> comparison_times;
  bool strictly_decreasing = false;
};

/**
 * Run every domain (concurrently -- the solves are independent) and build the
 * e_m table.  Snapshots are compared at `snapshot_count` equispaced times in
 * (0, t_end]; all domains march with the same dt, so snapshot times coincide
 * exactly across domains.
 */
inline ExhaustionStudy exhaustion_study(const ExhaustionPlan& plan, double t_end,
                                        const SolverConfig& cfg,
                                        TimeForm form = TimeForm::rescaled,
                                        std::size_t snapshot_count = 8) {
  validate_plan(plan);
  if (plan.domain_radii.size() < 3) {
    throw InvalidArgumentError("exhaustion: the study needs at least 3 domain radii");
  }
  if (!(t_end > 0.0) || snapshot_count == 0) {
    throw InvalidArgumentError("exhaustion: t_end and snapshot_count must be positive");
  }
  const auto total_steps =
      static_cast<std::size_t>(std::ceil(t_end / cfg.dt - 1e-12));
  const std::size_t stride = std::max<std::size_t>(1, total_steps / snapshot_count);

  ExhaustionStudy study;
  std::vector<std::future<DomainSolve>> futures;
  futures.reserve(plan.domain_radii.size());
  for (std::size_t m = 0; m < plan.domain_radii.size(); ++m) {
    futures.push_back(std::async(std::launch::async, [&plan, m, t_end, &cfg, form, stride]() {
      return solve_on_domain(plan, m, t_end, cfg, form, stride);
    }));
  }
  for (auto& f : futures) study.solves.push_back(f.get());

  for (const auto& s : study.solves.front().trajectory.snapshots) {
    study.comparison_times.push_back(s.time);
  }

  for (std::size_t m = 0; m + 1 < study.solves.size(); ++m) {
    const DomainSolve& lo = study.solves[m];
    const DomainSolve& hi = study.solves[m + 1];
    if (lo.trajectory.snapshots.size() != hi.trajectory.snapshots.size()) {
      throw Error("exhaustion: snapshot counts differ between domains " + std::to_string(m) +
                  " and " + std::to_string(m + 1));
    }
    const RadialGrid& glo = *lo.scenario.v0.grid();
    const RadialGrid& ghi = *hi.scenario.v0.grid();
    double e = 0.0;
    for (std::size_t k = 0; k < lo.trajectory.snapshots.size(); ++k) {
      const FlowState& a = lo.trajectory.snapshots[k];
      const FlowState& b = hi.trajectory.snapshots[k];
      if (std::abs(a.time - b.time) > 1e-9 * std::max(1.0, t_end)) {
        throw Error("exhaustion: snapshot times diverged between domains");
      }
      for (std::size_t j = 0; j < glo.size(); ++j) {
        const double r = glo.node(j);
        if (r > plan.compact_radius) break;
        if (std::abs(r - ghi.node(j)) > 1e-9 * std::max(1.0, r)) {
          throw GridMismatchError("exhaustion: node misalignment between nested domains at j = " +
                                  std::to_string(j));
        }
        e = std::max(e, std::abs(a.v[j] - b.v[j]));
      }
    }
    ExhaustionRow row;
    row.m = m;
    row.radius = plan.domain_radii[m];
    row.e_m = e;
    study.table.push_back(row);
  }

  for (std::size_t m = 1; m < study.table.size(); ++m) {
    const double prev = study.table[m - 1].e_m;
    const double cur = study.table[m].e_m;
    if (prev > kExhaustionRateFloor && cur > kExhaustionRateFloor) {
      study.table[m].rate = std::log(prev / cur) /
                            std::log(plan.domain_radii[m + 1] / plan.domain_radii[m]);
    }
  }
  study.strictly_decreasing = true;
  for (std::size_t m = 1; m < study.table.size(); ++m) {
    if (!(study.table[m].e_m < study.table[m - 1].e_m)) {
      study.strictly_decreasing = false;
      break;
    }
  }
  return study;
}

}  // namespace yaf
