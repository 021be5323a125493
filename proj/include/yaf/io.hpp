#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "yaf/errors.hpp"
#include "yaf/field.hpp"
#include "yaf/flow.hpp"
#include "yaf/grid.hpp"
#include "yaf/observables.hpp"
#include "yaf/version.hpp"

namespace yaf {

// ---------------------------------------------------------------------------
// Numeric text format
// ---------------------------------------------------------------------------

/**
 * Repository-wide textual form of a double: 17 significant digits, which is
 * enough to reproduce the exact bit pattern on read-back.  All CSV emitters
 * go through this, so identical data produces identical bytes.
 */
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// FNV-1a 64-bit hash as a fixed-width hex string; used to fingerprint
/// configurations in manifests.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Logging
// ---------------------------------------------------------------------------

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

inline const char* to_string(LogLevel l) {
  switch (l) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
  }
  return "?";
}

/// Threshold from the YAF_LOG environment variable (error|warn|info|debug);
/// unset or unrecognised values fall back to warn.  Read once per process.
inline LogLevel log_threshold() {
  static const LogLevel level = [] {
    const char* env = std::getenv("YAF_LOG");
    if (env == nullptr) return LogLevel::warn;
    const std::string_view v(env);
    if (v == "error") return LogLevel::error;
    if (v == "warn") return LogLevel::warn;
    if (v == "info") return LogLevel::info;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::warn;
  }();
  return level;
}

inline void log(LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) > static_cast<int>(log_threshold())) return;
  std::cerr << "[yaf][" << to_string(level) << "] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// CSV and gnuplot emitters
// ---------------------------------------------------------------------------

namespace detail {

/// Open for writing in binary mode so line endings are LF on every platform.
inline std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + file.string() + "' for writing");
  }
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) {
    throw IoError("failed while writing '" + file.string() + "'");
  }
}

}  // namespace detail

/** Comma-separated table: one header row, numeric cells at full precision. */
inline void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out = detail::open_out(file);
  for (std::size_t j = 0; j < header.size(); ++j) {
    out << (j ? "," : "") << header[j];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw InvalidArgumentError("write_csv: row width " + std::to_string(row.size()) +
                                 " does not match header width " +
                                 std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j ? "," : "") << format_double(row[j]);
    }
    out << "\n";
  }
  detail::finish(out, file);
}

/** CSV variant with preformatted cells, for columns with empty entries. */
inline void write_csv_cells(const std::filesystem::path& file,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = detail::open_out(file);
  for (std::size_t j = 0; j < header.size(); ++j) {
    out << (j ? "," : "") << header[j];
  }
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw InvalidArgumentError("write_csv_cells: row width does not match header");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j ? "," : "") << row[j];
    }
    out << "\n";
  }
  detail::finish(out, file);
}

/** Series as CSV: header `time,<name>`, one row per sample. */
inline void write_series_csv(const std::filesystem::path& file, const ObservableSeries& s) {
  std::vector<std::vector<double>> rows;
  rows.reserve(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    rows.push_back({s.times[k], s.values[k]});
  }
  write_csv(file, {"time", s.name}, rows);
}

/** Series as a gnuplot-ready two-column file: `time value`, comments with #. */
inline void write_series_dat(const std::filesystem::path& file, const ObservableSeries& s) {
  std::ofstream out = detail::open_out(file);
  out << "# " << s.name;
  for (const auto& [k, v] : s.metadata) out << "  " << k << "=" << v;
  out << "\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out << format_double(s.times[k]) << " " << format_double(s.values[k]) << "\n";
  }
  detail::finish(out, file);
}

/** Every retained snapshot in long form: columns time, r, v. */
inline void write_snapshots_csv(const std::filesystem::path& file, const FlowTrajectory& traj) {
  std::ofstream out = detail::open_out(file);
  out << "time,r,v\n";
  for (const FlowState& s : traj.snapshots) {
    const RadialGrid& g = *s.v.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << format_double(s.time) << "," << format_double(g.node(i)) << ","
          << format_double(s.v[i]) << "\n";
    }
  }
  detail::finish(out, file);
}

/** Monitor events as JSON lines, one object per event, in emission order. */
inline void write_events_jsonl(const std::filesystem::path& file,
                               const std::vector<MonitorEvent>& events) {
  std::ofstream out = detail::open_out(file);
  for (const MonitorEvent& e : events) {
    nlohmann::json j{{"time", e.time},       {"monitor", e.monitor},
                     {"series", e.series},   {"value", e.value},
                     {"severity", to_string(e.severity)}, {"detail", e.detail}};
    out << j.dump() << "\n";
  }
  detail::finish(out, file);
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

/**
 * Save a trajectory as a JSON checkpoint.  Doubles are serialised by the
 * shortest round-trip representation, so a load reproduces the exact values.
 * An empty trajectory is a valid (grid-less) checkpoint.
 */
inline void save_checkpoint(const FlowTrajectory& traj, const std::filesystem::path& file) {
  nlohmann::json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["software_version"] = kVersion;
  j["form"] = to_string(traj.form);
  j["steps_taken"] = traj.steps_taken;
  j["aborted"] = traj.aborted;
  j["abort_reason"] = traj.abort_reason;
  if (!traj.snapshots.empty()) {
    const RadialGrid& g = *traj.initial().v.grid();
    std::vector<double> nodes(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) nodes[i] = g.node(i);
    j["grid"] = {{"dim", g.dim()}, {"nodes", nodes}};
  }
  auto snaps = nlohmann::json::array();
  for (const FlowState& s : traj.snapshots) {
    snaps.push_back({{"time", s.time}, {"values", s.v.values()}});
  }
  j["snapshots"] = std::move(snaps);
  auto events = nlohmann::json::array();
  for (const MonitorEvent& e : traj.events) {
    events.push_back({{"time", e.time},
                      {"monitor", e.monitor},
                      {"series", e.series},
                      {"value", e.value},
                      {"severity", to_string(e.severity)},
                      {"detail", e.detail}});
  }
  j["events"] = std::move(events);

  std::ofstream out = detail::open_out(file);
  out << j.dump(2) << "\n";
  detail::finish(out, file);
}

namespace detail {

inline EventSeverity severity_from_string(const std::string& s) {
  if (s == "info") return EventSeverity::info;
  if (s == "violation") return EventSeverity::violation;
  if (s == "fatal") return EventSeverity::fatal;
  throw CheckpointError("unknown event severity '" + s + "'");
}

inline TimeForm form_from_string(const std::string& s) {
  if (s == "rescaled") return TimeForm::rescaled;
  if (s == "geometric") return TimeForm::geometric;
  throw CheckpointError("unknown time form '" + s + "'");
}

}  // namespace detail

/**
 * Load a checkpoint written by save_checkpoint.  Truncated or otherwise
 * malformed files and checkpoints from a different layout version raise
 * CheckpointError; I/O failures raise IoError.
 */
inline FlowTrajectory load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    throw IoError("cannot read checkpoint '" + file.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  const nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw CheckpointError("corrupt checkpoint '" + file.string() + "': not valid JSON");
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw CheckpointError("checkpoint '" + file.string() + "' has format version " +
                            std::to_string(version) + "; this build reads version " +
                            std::to_string(kCheckpointFormatVersion));
    }
    FlowTrajectory traj;
    traj.form = detail::form_from_string(j.at("form").get<std::string>());
    traj.steps_taken = j.at("steps_taken").get<std::size_t>();
    traj.aborted = j.at("aborted").get<bool>();
    traj.abort_reason = j.at("abort_reason").get<std::string>();
    RadialGrid::Ptr grid;
    if (j.contains("grid")) {
      grid = RadialGrid::from_nodes(j.at("grid").at("dim").get<int>(),
                                    j.at("grid").at("nodes").get<std::vector<double>>());
    }
    for (const auto& s : j.at("snapshots")) {
      if (!grid) {
        throw CheckpointError("checkpoint '" + file.string() +
                              "' has snapshots but no grid record");
      }
      traj.snapshots.push_back(FlowState{
          ConformalField(grid, s.at("values").get<std::vector<double>>()),
          s.at("time").get<double>(), traj.form});
    }
    for (const auto& e : j.at("events")) {
      MonitorEvent ev;
      ev.time = e.at("time").get<double>();
      ev.monitor = e.at("monitor").get<std::string>();
      ev.series = e.at("series").get<std::string>();
      ev.value = e.at("value").get<double>();
      ev.severity = detail::severity_from_string(e.at("severity").get<std::string>());
      ev.detail = e.at("detail").get<std::string>();
      traj.events.push_back(std::move(ev));
    }
    return traj;
  } catch (const CheckpointError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("corrupt checkpoint '" + file.string() + "': " + e.what());
  } catch (const Error& e) {
    throw CheckpointError("checkpoint '" + file.string() + "' rejected: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct MonitorVerdict {
  std::string name;
  bool passed = true;
  std::string detail;
};

/**
 * Summary record written at the end of a run.  The manifest is the authority
 * on what a run produced: it is written atomically (temp file + rename) as
 * the last artefact, and only after every file it lists exists on disk.
 */
struct RunManifest {
  std::string config_hash;       ///< fingerprint of the normalised configuration
  std::string software_version;  ///< kVersion of the writing build
  std::string scenario_kind;
  int dim = 3;
  std::string grid_kind;
  double r_inner = 0.0;
  double r_outer = 0.0;
  std::size_t node_count = 0;
  double wall_time_seconds = 0.0;
  std::size_t steps_taken = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<MonitorVerdict> verdicts;
  std::vector<std::string> outputs;  ///< file names relative to the run directory
  bool ok = false;                   ///< all monitors passed and the run was not aborted
};

inline nlohmann::json manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["config_hash"] = m.config_hash;
  j["software_version"] = m.software_version;
  j["scenario"] = {{"kind", m.scenario_kind}, {"dim", m.dim}};
  j["grid"] = {{"kind", m.grid_kind},
               {"r_inner", m.r_inner},
               {"r_outer", m.r_outer},
               {"count", m.node_count}};
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["steps_taken"] = m.steps_taken;
  j["aborted"] = m.aborted;
  j["abort_reason"] = m.abort_reason;
  auto verdicts = nlohmann::json::array();
  for (const MonitorVerdict& v : m.verdicts) {
    verdicts.push_back({{"monitor", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  }
  j["monitor_verdicts"] = std::move(verdicts);
  j["outputs"] = m.outputs;
  j["ok"] = m.ok;
  return j;
}

/**
 * Write `manifest.json` into `dir` atomically.  Refuses to write a manifest
 * that lists a file which does not exist: a reader must never see a manifest
 * pointing at missing outputs.
 */
inline std::filesystem::path write_manifest(const std::filesystem::path& dir,
                                            const RunManifest& m) {
  for (const std::string& name : m.outputs) {
    if (!std::filesystem::exists(dir / name)) {
      throw IoError("manifest lists output '" + name + "' which does not exist in '" +
                    dir.string() + "'");
    }
  }
  const std::filesystem::path final_path = dir / "manifest.json";
  const std::filesystem::path tmp_path = dir / "manifest.json.tmp";
  {
    std::ofstream out = detail::open_out(tmp_path);
    out << manifest_json(m).dump(2) << "\n";
    detail::finish(out, tmp_path);
  }
  std::filesystem::rename(tmp_path, final_path);
  return final_path;
}

}  // namespace yaf
