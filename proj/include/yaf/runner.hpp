#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yaf/config.hpp"
#include "yaf/exhaustion.hpp"
#include "yaf/io.hpp"
#include "yaf/monitors.hpp"

namespace yaf {

/**
 * Run orchestration: a validated RunSpec in, a directory of artefacts out.
 *
 * Every run writes the same fixed inventory in the same order -- snapshots,
 * one CSV and one gnuplot file per monitor series, the event log, optionally
 * a checkpoint -- and finishes with an atomically renamed manifest.json that
 * lists all of it.  Nothing in the output path depends on wall-clock state
 * except the manifest's wall_time_seconds field, so identical configs on the
 * same build produce bit-identical CSV files.
 */

/// Solver configuration shared by single runs and exhaustion studies;
/// boundary treatment is resolved per grid by the caller.
inline SolverConfig base_solver_config(const SolverSection& s) {
  SolverConfig cfg;
  cfg.scheme = s.scheme;
  cfg.dt = s.dt;
  cfg.cfl_safety = s.cfl_safety;
  cfg.newton_tol = s.newton_tol;
  cfg.newton_max_iter = s.newton_max_iter;
  return cfg;
}

/// Instantiate the monitors a spec switches on, bound to the scenario's
/// measured diagnostics (the bracket needs sup |R(g0)| from the data).
inline std::vector<std::shared_ptr<FlowMonitor>> configured_monitors(const RunSpec& spec,
                                                                     const Scenario& sc) {
  std::vector<std::shared_ptr<FlowMonitor>> ms;
  const MonitorSection& m = spec.monitors;
  if (m.bracket) {
    ms.push_back(std::make_shared<BracketMonitor>(sc.v0, sc.sup_r0, sc.consts, m.bracket_tol));
  }
  if (m.mass) {
    ms.push_back(std::make_shared<MassMonitor>(sc.consts, m.mass_radii, m.mass_max_drift));
  }
  if (m.tail) {
    ms.push_back(std::make_shared<TailNormMonitor>(m.tail_tau0, m.tail_factor));
  }
  if (m.curvature_sign) {
    ms.push_back(std::make_shared<CurvatureSignMonitor>(sc.consts, m.curvature_sign_tol));
  }
  if (m.monotonicity) {
    ms.push_back(std::make_shared<MonotonicityMonitor>(m.monotonicity_tol));
  }
  if (m.positivity) {
    ms.push_back(std::make_shared<PositivityMonitor>(m.positivity_floor));
  }
  return ms;
}

/// Scalar series reassembled from the info events, one per series tag, in
/// first-appearance order (the deterministic order monitors emit them).
inline std::vector<ObservableSeries> series_from_events(
    const std::vector<MonitorEvent>& events) {
  std::vector<ObservableSeries> out;
  for (const MonitorEvent& e : events) {
    if (e.severity != EventSeverity::info) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ObservableSeries& s) { return s.name == e.series; });
    if (it == out.end()) {
      out.push_back(ObservableSeries{e.series, {}, {}, {}});
      it = out.end() - 1;
    }
    it->append(e.time, e.value);
  }
  return out;
}

struct RunResult {
  RunManifest manifest;
  FlowTrajectory trajectory;
  std::filesystem::path directory;
  bool ok = false;  ///< all monitors passed and the evolution was not aborted
};

/**
 * Execute one configured run: materialise the scenario, evolve with the
 * configured monitors, write all artefacts into the output directory
 * (`out_override` beats [output].directory), and return the manifest.
 * Configuration and solver failures propagate as exceptions; monitor
 * verdicts and clean aborts are reported through `ok` and the manifest.
 */
inline RunResult run_scenario(const RunSpec& spec,
                              const std::optional<std::filesystem::path>& out_override = {}) {
  const auto clock_start = std::chrono::steady_clock::now();

  MaterializedRun run = materialize(spec);
  log(LogLevel::info, "scenario " + std::string(to_string(spec.scenario.kind)) + " (n = " +
                          std::to_string(spec.scenario.n) + ") on " +
                          std::to_string(run.grid->size()) + " nodes, t_end = " +
                          format_double(run.t_end) + " (" + to_string(run.form) + ")");

  const auto monitors = configured_monitors(spec, run.scenario);
  FlowState initial{run.scenario.v0, 0.0, run.form};
  FlowTrajectory traj =
      evolve(std::move(initial), run.solver, run.t_end, monitors, run.snapshot_stride);
  if (traj.aborted) {
    log(LogLevel::error, "evolution aborted: " + traj.abort_reason);
  }

  const std::filesystem::path dir =
      out_override ? *out_override : std::filesystem::path(spec.output.directory);
  std::filesystem::create_directories(dir);

  RunResult result;
  result.directory = dir;
  RunManifest& man = result.manifest;
  man.config_hash = fnv1a_hex(render_config(spec));
  man.software_version = kVersion;
  man.scenario_kind = to_string(spec.scenario.kind);
  man.dim = spec.scenario.n;
  man.grid_kind = to_string(spec.grid.kind);
  man.r_inner = run.grid->r_inner();
  man.r_outer = run.grid->r_outer();
  man.node_count = run.grid->size();
  man.steps_taken = traj.steps_taken;
  man.aborted = traj.aborted;
  man.abort_reason = traj.abort_reason;

  if (spec.output.write_snapshots) {
    write_snapshots_csv(dir / "snapshots.csv", traj);
    man.outputs.push_back("snapshots.csv");
  }
  if (spec.output.write_series) {
    for (const ObservableSeries& s : series_from_events(traj.events)) {
      write_series_csv(dir / (s.name + ".csv"), s);
      write_series_dat(dir / (s.name + ".dat"), s);
      man.outputs.push_back(s.name + ".csv");
      man.outputs.push_back(s.name + ".dat");
    }
  }
  if (spec.output.write_events) {
    write_events_jsonl(dir / "events.jsonl", traj.events);
    man.outputs.push_back("events.jsonl");
  }
  if (spec.output.write_checkpoint) {
    save_checkpoint(traj, dir / "checkpoint.json");
    man.outputs.push_back("checkpoint.json");
  }

  bool all_passed = true;
  for (const auto& mon : monitors) {
    man.verdicts.push_back(MonitorVerdict{mon->name(), mon->passed(), mon->verdict_detail()});
    all_passed = all_passed && mon->passed();
    log(mon->passed() ? LogLevel::info : LogLevel::warn,
        "monitor " + mon->name() + ": " + (mon->passed() ? "passed" : "FAILED") +
            (mon->verdict_detail().empty() ? "" : " (" + mon->verdict_detail() + ")"));
  }
  result.ok = all_passed && !traj.aborted;
  man.ok = result.ok;
  man.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();

  write_manifest(dir, man);
  result.trajectory = std::move(traj);
  return result;
}

struct ExhaustionRunResult {
  ExhaustionStudy study;
  std::filesystem::path csv_path;
  bool ok = false;  ///< compact-set errors strictly decrease across domains
};

/**
 * Execute a domain-exhaustion study for a spec's scenario.  `radii_override`
 * (from the command line) beats [exhaustion].radii.  Each domain pins its own
 * truncated boundary data, so per-run Dirichlet overrides are ignored here.
 * Writes `exhaustion.csv` with one row per domain; the rate column is empty
 * on the first row and whenever an error sits at the rounding floor.
 */
inline ExhaustionRunResult run_exhaustion(const RunSpec& spec,
                                          const std::vector<double>& radii_override,
                                          const std::optional<std::filesystem::path>&
                                              out_override = {}) {
  ExhaustionPlan plan;
  plan.domain_radii = radii_override.empty() ? spec.exhaustion.radii : radii_override;
  plan.compact_radius = spec.exhaustion.compact_radius;
  plan.r_inner = spec.exhaustion.r_inner;
  plan.dr = spec.exhaustion.dr;
  plan.scenario = spec.scenario;

  const SolverConfig cfg = base_solver_config(spec.solver);
  ExhaustionRunResult result;
  result.study = exhaustion_study(plan, spec.solver.t_end, cfg, spec.solver.form,
                                  spec.exhaustion.snapshots);
  result.ok = result.study.strictly_decreasing;

  const std::filesystem::path dir =
      out_override ? *out_override : std::filesystem::path(spec.output.directory);
  std::filesystem::create_directories(dir);
  std::vector<std::vector<std::string>> rows;
  for (const ExhaustionRow& row : result.study.table) {
    rows.push_back({std::to_string(row.m), format_double(row.radius), format_double(row.e_m),
                    row.rate ? format_double(*row.rate) : std::string()});
  }
  result.csv_path = dir / "exhaustion.csv";
  write_csv_cells(result.csv_path, {"m", "radius", "e_m", "rate"}, rows);
  return result;
}

}  // namespace yaf
