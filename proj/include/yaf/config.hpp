#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "yaf/errors.hpp"
#include "yaf/flow.hpp"
#include "yaf/grid.hpp"
#include "yaf/io.hpp"
#include "yaf/maxprinciple.hpp"
#include "yaf/minitoml.hpp"
#include "yaf/scenario.hpp"

namespace yaf {

/**
 * Configuration schema for runs.
 *
 * A run file is TOML with sections [scenario], [grid], [solver], [monitors],
 * [output] and (for domain-exhaustion studies) [exhaustion].  Every section
 * and every key is optional -- absent keys keep their defaults -- but present
 * keys must be known and well typed: unknown sections and keys are rejected
 * by name, and validation reports the complete list of problems in one
 * ConfigError rather than stopping at the first.
 *
 * parse_config / render_config round-trip losslessly: numbers are rendered
 * with 17 significant digits, so parse(render(spec)) reproduces spec exactly.
 */

struct GridSection {
  Stretch kind = Stretch::uniform;
  double r_inner = 0.0;
  double r_outer = 40.0;
  std::size_t count = 401;
};

struct SolverSection {
  TimeForm form = TimeForm::rescaled;
  Scheme scheme = Scheme::implicit_euler_newton;
  double dt = 1e-2;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  std::size_t snapshot_stride = 1;
  std::optional<double> inner_value;  ///< Dirichlet value at r_inner (excised grids)
  std::optional<double> outer_value;  ///< Dirichlet value at r_outer
};

struct MonitorSection {
  bool bracket = false;
  double bracket_tol = 1e-6;
  bool mass = false;
  std::vector<double> mass_radii;  ///< empty: filled with 0.5/0.7/0.9 of r_outer
  double mass_max_drift = kInfinity;
  bool tail = false;
  double tail_tau0 = 1.0;
  double tail_factor = 10.0;
  bool curvature_sign = false;
  double curvature_sign_tol = 1e-8;
  bool monotonicity = false;
  double monotonicity_tol = 1e-10;
  bool positivity = true;
  double positivity_floor = 0.0;
};

struct OutputSection {
  std::string directory = "out";
  bool write_snapshots = true;
  bool write_series = true;
  bool write_events = true;
  bool write_checkpoint = false;
};

struct ExhaustionSection {
  std::vector<double> radii;     ///< domain radii; the CLI flag overrides this
  double compact_radius = 10.0;
  double r_inner = 0.0;
  double dr = 0.25;
  std::size_t snapshots = 8;
};

struct RunSpec {
  ScenarioSpec scenario;
  GridSection grid;
  SolverSection solver;
  MonitorSection monitors;
  OutputSection output;
  ExhaustionSection exhaustion;
};

namespace detail {

/// Consumes the keys of one section, collecting type errors as it goes;
/// finish() reports every key that was never consumed as unknown.
class SectionReader {
 public:
  SectionReader(const minitoml::Section& sec, std::vector<std::string>& errs)
      : sec_(sec), errs_(errs) {}

  std::string path(std::string_view key) const {
    return "[" + sec_.name + "]." + std::string(key);
  }

  void number(std::string_view key, double& out) {
    if (const minitoml::Value* v = take(key)) {
      if (v->is_number()) {
        out = v->as_double();
      } else {
        type_error(key, *v, "a number");
      }
    }
  }

  void optional_number(std::string_view key, std::optional<double>& out) {
    if (const minitoml::Value* v = take(key)) {
      if (v->is_number()) {
        out = v->as_double();
      } else {
        type_error(key, *v, "a number");
      }
    }
  }

  void integer(std::string_view key, long long& out) {
    if (const minitoml::Value* v = take(key)) {
      if (v->kind == minitoml::Kind::integer) {
        out = v->integer;
      } else {
        type_error(key, *v, "an integer");
      }
    }
  }

  /// Integer constrained from below; used for counts, strides, iterations.
  void count(std::string_view key, std::size_t& out, long long min_value) {
    long long raw = static_cast<long long>(out);
    const long long before = raw;
    integer(key, raw);
    if (raw == before) return;
    if (raw < min_value) {
      errs_.push_back(path(key) + ": must be >= " + std::to_string(min_value) + " (got " +
                      std::to_string(raw) + ")");
      return;
    }
    out = static_cast<std::size_t>(raw);
  }

  void boolean(std::string_view key, bool& out) {
    if (const minitoml::Value* v = take(key)) {
      if (v->kind == minitoml::Kind::boolean) {
        out = v->boolean;
      } else {
        type_error(key, *v, "a boolean");
      }
    }
  }

  void string(std::string_view key, std::string& out) {
    if (const minitoml::Value* v = take(key)) {
      if (v->kind == minitoml::Kind::string) {
        out = v->str;
      } else {
        type_error(key, *v, "a string");
      }
    }
  }

  void number_array(std::string_view key, std::vector<double>& out) {
    if (const minitoml::Value* v = take(key)) {
      if (v->kind != minitoml::Kind::array) {
        type_error(key, *v, "an array of numbers");
        return;
      }
      std::vector<double> vals;
      for (const minitoml::Value& e : v->items) {
        if (!e.is_number()) {
          type_error(key, *v, "an array of numbers");
          return;
        }
        vals.push_back(e.as_double());
      }
      out = std::move(vals);
    }
  }

  /// Map a string key onto an enumerated value through `choices`.
  template <typename E>
  void choice(std::string_view key, E& out,
              const std::vector<std::pair<std::string_view, E>>& choices) {
    std::string s;
    const std::size_t errors_before = errs_.size();
    const bool present = sec_.find(key) != nullptr;
    string(key, s);
    if (!present || errs_.size() != errors_before) return;
    for (const auto& [name, value] : choices) {
      if (s == name) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& [name, value] : choices) {
      allowed += allowed.empty() ? "" : ", ";
      allowed += name;
    }
    errs_.push_back(path(key) + ": '" + s + "' is not one of {" + allowed + "}");
  }

  void finish() {
    for (const auto& [key, value] : sec_.entries) {
      if (consumed_.count(key) == 0) {
        errs_.push_back(path(key) + ": unknown key (line " + std::to_string(value.line) + ")");
      }
    }
  }

 private:
  const minitoml::Value* take(std::string_view key) {
    consumed_.insert(std::string(key));
    return sec_.find(key);
  }

  void type_error(std::string_view key, const minitoml::Value& v, const char* expected) {
    errs_.push_back(path(key) + ": expected " + expected + ", got " +
                    minitoml::to_string(v.kind) + " (line " + std::to_string(v.line) + ")");
  }

  const minitoml::Section& sec_;
  std::vector<std::string>& errs_;
  std::set<std::string> consumed_;
};

inline void require_positive(std::vector<std::string>& errs, const std::string& path, double x,
                             const char* what = "must be positive") {
  if (!(x > 0.0) || !std::isfinite(x)) {
    errs.push_back(path + ": " + what + " (got " + format_double(x) + ")");
  }
}

inline const std::vector<std::pair<std::string_view, ScenarioKind>>& scenario_kinds() {
  static const std::vector<std::pair<std::string_view, ScenarioKind>> table{
      {"flat", ScenarioKind::flat},
      {"schwarzschild", ScenarioKind::schwarzschild},
      {"bump", ScenarioKind::bump},
      {"power_tail", ScenarioKind::power_tail},
      {"custom", ScenarioKind::custom}};
  return table;
}

}  // namespace detail

/**
 * Map a parsed document onto a RunSpec.  Collects every schema, type, and
 * domain problem and throws a single ConfigError naming each offending key
 * path; returns a fully validated spec otherwise.
 */
inline RunSpec run_spec_from_document(const minitoml::Document& doc) {
  RunSpec spec;
  std::vector<std::string> errs;
  const std::set<std::string> known_sections{"scenario", "grid",   "solver",
                                             "monitors", "output", "exhaustion"};
  for (const auto& sec : doc.sections) {
    if (known_sections.count(sec.name) == 0) {
      errs.push_back("unknown section [" + sec.name + "] (line " + std::to_string(sec.line) +
                     ")");
    }
  }

  std::vector<double> profile_r, profile_v;
  if (const minitoml::Section* sec = doc.find("scenario")) {
    detail::SectionReader r(*sec, errs);
    r.choice("kind", spec.scenario.kind, detail::scenario_kinds());
    long long n = spec.scenario.n;
    r.integer("n", n);
    if (n < 3) {
      errs.push_back(r.path("n") + ": dimension must be >= 3 (got " + std::to_string(n) + ")");
    } else {
      spec.scenario.n = static_cast<int>(n);
    }
    r.number("mass", spec.scenario.mass);
    r.number("amplitude", spec.scenario.amplitude);
    r.number("width", spec.scenario.width);
    r.number("center", spec.scenario.center);
    r.number("tau", spec.scenario.tau);
    r.number_array("profile_r", profile_r);
    r.number_array("profile_v", profile_v);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("grid")) {
    detail::SectionReader r(*sec, errs);
    r.choice("kind", spec.grid.kind,
             {{"uniform", Stretch::uniform}, {"geometric", Stretch::geometric}});
    r.number("r_inner", spec.grid.r_inner);
    r.number("r_outer", spec.grid.r_outer);
    r.count("count", spec.grid.count, 3);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("solver")) {
    detail::SectionReader r(*sec, errs);
    r.choice("form", spec.solver.form,
             {{"rescaled", TimeForm::rescaled}, {"geometric", TimeForm::geometric}});
    r.choice("scheme", spec.solver.scheme,
             {{"explicit", Scheme::explicit_euler}, {"implicit", Scheme::implicit_euler_newton}});
    r.number("dt", spec.solver.dt);
    r.number("t_end", spec.solver.t_end);
    r.number("cfl_safety", spec.solver.cfl_safety);
    r.number("newton_tol", spec.solver.newton_tol);
    long long iters = spec.solver.newton_max_iter;
    r.integer("newton_max_iter", iters);
    if (iters < 1) {
      errs.push_back(r.path("newton_max_iter") + ": must be >= 1 (got " +
                     std::to_string(iters) + ")");
    } else {
      spec.solver.newton_max_iter = static_cast<int>(iters);
    }
    r.count("snapshot_stride", spec.solver.snapshot_stride, 1);
    r.optional_number("inner_value", spec.solver.inner_value);
    r.optional_number("outer_value", spec.solver.outer_value);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("monitors")) {
    detail::SectionReader r(*sec, errs);
    r.boolean("bracket", spec.monitors.bracket);
    r.number("bracket_tol", spec.monitors.bracket_tol);
    r.boolean("mass", spec.monitors.mass);
    r.number_array("mass_radii", spec.monitors.mass_radii);
    r.number("mass_max_drift", spec.monitors.mass_max_drift);
    r.boolean("tail", spec.monitors.tail);
    r.number("tail_tau0", spec.monitors.tail_tau0);
    r.number("tail_factor", spec.monitors.tail_factor);
    r.boolean("curvature_sign", spec.monitors.curvature_sign);
    r.number("curvature_sign_tol", spec.monitors.curvature_sign_tol);
    r.boolean("monotonicity", spec.monitors.monotonicity);
    r.number("monotonicity_tol", spec.monitors.monotonicity_tol);
    r.boolean("positivity", spec.monitors.positivity);
    r.number("positivity_floor", spec.monitors.positivity_floor);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("output")) {
    detail::SectionReader r(*sec, errs);
    r.string("directory", spec.output.directory);
    r.boolean("write_snapshots", spec.output.write_snapshots);
    r.boolean("write_series", spec.output.write_series);
    r.boolean("write_events", spec.output.write_events);
    r.boolean("write_checkpoint", spec.output.write_checkpoint);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("exhaustion")) {
    detail::SectionReader r(*sec, errs);
    r.number_array("radii", spec.exhaustion.radii);
    r.number("compact_radius", spec.exhaustion.compact_radius);
    r.number("r_inner", spec.exhaustion.r_inner);
    r.number("dr", spec.exhaustion.dr);
    r.count("snapshots", spec.exhaustion.snapshots, 1);
    r.finish();
  }

  // -- cross-field and domain validation ------------------------------------

  if (profile_r.size() != profile_v.size()) {
    errs.push_back("[scenario].profile_r/profile_v: lengths differ (" +
                   std::to_string(profile_r.size()) + " vs " + std::to_string(profile_v.size()) +
                   ")");
  } else {
    for (std::size_t i = 0; i + 1 < profile_r.size(); ++i) {
      if (!(profile_r[i] < profile_r[i + 1])) {
        errs.push_back("[scenario].profile_r: radii must be strictly increasing (profile_r[" +
                       std::to_string(i + 1) + "] = " + format_double(profile_r[i + 1]) + ")");
        break;
      }
    }
    for (std::size_t i = 0; i < profile_v.size(); ++i) {
      if (!(profile_v[i] > 0.0)) {
        errs.push_back("[scenario].profile_v: the conformal factor must be positive "
                       "(profile_v[" +
                       std::to_string(i) + "] = " + format_double(profile_v[i]) + ")");
      }
    }
    for (std::size_t i = 0; i < profile_r.size(); ++i) {
      spec.scenario.profile.emplace_back(profile_r[i], profile_v[i]);
    }
  }
  if (spec.scenario.kind == ScenarioKind::custom && spec.scenario.profile.empty()) {
    errs.push_back("[scenario].profile_r: a custom scenario needs a (profile_r, profile_v) "
                   "table");
  }
  if (spec.scenario.kind == ScenarioKind::schwarzschild) {
    detail::require_positive(errs, "[scenario].mass", spec.scenario.mass);
  }
  if (spec.scenario.kind == ScenarioKind::bump) {
    detail::require_positive(errs, "[scenario].width", spec.scenario.width);
    if (spec.scenario.center < 0.0) {
      errs.push_back("[scenario].center: must be >= 0 (got " +
                     format_double(spec.scenario.center) + ")");
    }
  }
  if (spec.scenario.kind == ScenarioKind::power_tail) {
    detail::require_positive(errs, "[scenario].tau", spec.scenario.tau);
  }

  if (!(spec.grid.r_inner >= 0.0)) {
    errs.push_back("[grid].r_inner: must be >= 0 (got " + format_double(spec.grid.r_inner) +
                   ")");
  }
  if (!(spec.grid.r_outer > spec.grid.r_inner)) {
    errs.push_back("[grid].r_outer: must exceed r_inner (got " +
                   format_double(spec.grid.r_outer) + " with r_inner = " +
                   format_double(spec.grid.r_inner) + ")");
  }
  if (spec.grid.kind == Stretch::geometric && !(spec.grid.r_inner > 0.0)) {
    errs.push_back("[grid].kind: a geometric stretch requires r_inner > 0");
  }
  if (spec.scenario.kind == ScenarioKind::schwarzschild && spec.grid.r_inner == 0.0) {
    errs.push_back("[grid].r_inner: schwarzschild initial data is singular at the origin "
                   "r = 0; excise the core with r_inner > 0");
  }

  detail::require_positive(errs, "[solver].dt", spec.solver.dt);
  if (!(spec.solver.t_end >= 0.0)) {
    errs.push_back("[solver].t_end: must be >= 0 (got " + format_double(spec.solver.t_end) +
                   ")");
  }
  if (!(spec.solver.cfl_safety > 0.0) || spec.solver.cfl_safety > 1.0) {
    errs.push_back("[solver].cfl_safety: must lie in (0, 1] (got " +
                   format_double(spec.solver.cfl_safety) + ")");
  }
  detail::require_positive(errs, "[solver].newton_tol", spec.solver.newton_tol);
  if (spec.solver.inner_value && spec.grid.r_inner == 0.0) {
    errs.push_back("[solver].inner_value: an origin-regular grid (r_inner = 0) has no inner "
                   "Dirichlet row to pin");
  }
  if (spec.solver.inner_value && !(*spec.solver.inner_value > 0.0)) {
    errs.push_back("[solver].inner_value: the conformal factor must be positive (got " +
                   format_double(*spec.solver.inner_value) + ")");
  }
  if (spec.solver.outer_value && !(*spec.solver.outer_value > 0.0)) {
    errs.push_back("[solver].outer_value: the conformal factor must be positive (got " +
                   format_double(*spec.solver.outer_value) + ")");
  }

  detail::require_positive(errs, "[monitors].bracket_tol", spec.monitors.bracket_tol);
  // +infinity is the documented sentinel for "record the series, never abort"
  if (!(spec.monitors.mass_max_drift > 0.0)) {
    errs.push_back("[monitors].mass_max_drift: must be positive (got " +
                   format_double(spec.monitors.mass_max_drift) + ")");
  }
  detail::require_positive(errs, "[monitors].tail_tau0", spec.monitors.tail_tau0);
  detail::require_positive(errs, "[monitors].tail_factor", spec.monitors.tail_factor);
  detail::require_positive(errs, "[monitors].curvature_sign_tol",
                           spec.monitors.curvature_sign_tol);
  detail::require_positive(errs, "[monitors].monotonicity_tol", spec.monitors.monotonicity_tol);
  if (spec.monitors.positivity_floor < 0.0) {
    errs.push_back("[monitors].positivity_floor: must be >= 0 (got " +
                   format_double(spec.monitors.positivity_floor) + ")");
  }
  for (double rad : spec.monitors.mass_radii) {
    if (!(rad > spec.grid.r_inner) || rad > spec.grid.r_outer) {
      errs.push_back("[monitors].mass_radii: probe radius " + format_double(rad) +
                     " lies outside (r_inner, r_outer]");
    }
  }
  if (spec.monitors.mass && spec.monitors.mass_radii.empty()) {
    // normalised default: probe at half, 0.7 and 0.9 of the outer radius
    spec.monitors.mass_radii = {0.5 * spec.grid.r_outer, 0.7 * spec.grid.r_outer,
                                0.9 * spec.grid.r_outer};
  }

  if (spec.output.directory.empty()) {
    errs.push_back("[output].directory: must not be empty");
  }

  for (std::size_t m = 0; m + 1 < spec.exhaustion.radii.size(); ++m) {
    if (!(spec.exhaustion.radii[m] < spec.exhaustion.radii[m + 1])) {
      errs.push_back("[exhaustion].radii: must be strictly increasing");
      break;
    }
  }
  detail::require_positive(errs, "[exhaustion].compact_radius", spec.exhaustion.compact_radius);
  detail::require_positive(errs, "[exhaustion].dr", spec.exhaustion.dr);
  if (spec.exhaustion.r_inner < 0.0) {
    errs.push_back("[exhaustion].r_inner: must be >= 0 (got " +
                   format_double(spec.exhaustion.r_inner) + ")");
  }

  if (!errs.empty()) {
    throw ConfigError(std::move(errs));
  }
  return spec;
}

/// Parse and validate a run configuration from TOML text.
inline RunSpec parse_config_text(std::string_view text) {
  return run_spec_from_document(minitoml::parse(text));
}

/// Parse and validate a run configuration file.
inline RunSpec parse_config(const std::string& path) {
  return run_spec_from_document(minitoml::parse_file(path));
}

namespace detail {

inline std::string toml_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string toml_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += (i ? ", " : "") + format_double(xs[i]);
  }
  out += "]";
  return out;
}

inline const char* toml_bool(bool b) { return b ? "true" : "false"; }

}  // namespace detail

/**
 * Canonical TOML rendering of a spec: every key in a fixed order, numbers at
 * full precision.  parse_config_text(render_config(spec)) == spec, and the
 * rendering is the normalised text that run manifests fingerprint.
 */
inline std::string render_config(const RunSpec& spec) {
  std::string out;
  out += "[scenario]\n";
  out += "kind = " + detail::toml_string(to_string(spec.scenario.kind)) + "\n";
  out += "n = " + std::to_string(spec.scenario.n) + "\n";
  out += "mass = " + format_double(spec.scenario.mass) + "\n";
  out += "amplitude = " + format_double(spec.scenario.amplitude) + "\n";
  out += "width = " + format_double(spec.scenario.width) + "\n";
  out += "center = " + format_double(spec.scenario.center) + "\n";
  out += "tau = " + format_double(spec.scenario.tau) + "\n";
  if (!spec.scenario.profile.empty()) {
    std::vector<double> pr, pv;
    for (const auto& [r, v] : spec.scenario.profile) {
      pr.push_back(r);
      pv.push_back(v);
    }
    out += "profile_r = " + detail::toml_array(pr) + "\n";
    out += "profile_v = " + detail::toml_array(pv) + "\n";
  }
  out += "\n[grid]\n";
  out += "kind = " + detail::toml_string(to_string(spec.grid.kind)) + "\n";
  out += "r_inner = " + format_double(spec.grid.r_inner) + "\n";
  out += "r_outer = " + format_double(spec.grid.r_outer) + "\n";
  out += "count = " + std::to_string(spec.grid.count) + "\n";
  out += "\n[solver]\n";
  out += "form = " + detail::toml_string(to_string(spec.solver.form)) + "\n";
  out += std::string("scheme = ") +
         (spec.solver.scheme == Scheme::explicit_euler ? "\"explicit\"" : "\"implicit\"") + "\n";
  out += "dt = " + format_double(spec.solver.dt) + "\n";
  out += "t_end = " + format_double(spec.solver.t_end) + "\n";
  out += "cfl_safety = " + format_double(spec.solver.cfl_safety) + "\n";
  out += "newton_tol = " + format_double(spec.solver.newton_tol) + "\n";
  out += "newton_max_iter = " + std::to_string(spec.solver.newton_max_iter) + "\n";
  out += "snapshot_stride = " + std::to_string(spec.solver.snapshot_stride) + "\n";
  if (spec.solver.inner_value) {
    out += "inner_value = " + format_double(*spec.solver.inner_value) + "\n";
  }
  if (spec.solver.outer_value) {
    out += "outer_value = " + format_double(*spec.solver.outer_value) + "\n";
  }
  out += "\n[monitors]\n";
  out += std::string("bracket = ") + detail::toml_bool(spec.monitors.bracket) + "\n";
  out += "bracket_tol = " + format_double(spec.monitors.bracket_tol) + "\n";
  out += std::string("mass = ") + detail::toml_bool(spec.monitors.mass) + "\n";
  out += "mass_radii = " + detail::toml_array(spec.monitors.mass_radii) + "\n";
  if (std::isfinite(spec.monitors.mass_max_drift)) {
    out += "mass_max_drift = " + format_double(spec.monitors.mass_max_drift) + "\n";
  }
  out += std::string("tail = ") + detail::toml_bool(spec.monitors.tail) + "\n";
  out += "tail_tau0 = " + format_double(spec.monitors.tail_tau0) + "\n";
  out += "tail_factor = " + format_double(spec.monitors.tail_factor) + "\n";
  out += std::string("curvature_sign = ") + detail::toml_bool(spec.monitors.curvature_sign) +
         "\n";
  out += "curvature_sign_tol = " + format_double(spec.monitors.curvature_sign_tol) + "\n";
  out += std::string("monotonicity = ") + detail::toml_bool(spec.monitors.monotonicity) + "\n";
  out += "monotonicity_tol = " + format_double(spec.monitors.monotonicity_tol) + "\n";
  out += std::string("positivity = ") + detail::toml_bool(spec.monitors.positivity) + "\n";
  out += "positivity_floor = " + format_double(spec.monitors.positivity_floor) + "\n";
  out += "\n[output]\n";
  out += "directory = " + detail::toml_string(spec.output.directory) + "\n";
  out += std::string("write_snapshots = ") + detail::toml_bool(spec.output.write_snapshots) +
         "\n";
  out += std::string("write_series = ") + detail::toml_bool(spec.output.write_series) + "\n";
  out += std::string("write_events = ") + detail::toml_bool(spec.output.write_events) + "\n";
  out += std::string("write_checkpoint = ") + detail::toml_bool(spec.output.write_checkpoint) +
         "\n";
  out += "\n[exhaustion]\n";
  out += "radii = " + detail::toml_array(spec.exhaustion.radii) + "\n";
  out += "compact_radius = " + format_double(spec.exhaustion.compact_radius) + "\n";
  out += "r_inner = " + format_double(spec.exhaustion.r_inner) + "\n";
  out += "dr = " + format_double(spec.exhaustion.dr) + "\n";
  out += "snapshots = " + std::to_string(spec.exhaustion.snapshots) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Materialisation
// ---------------------------------------------------------------------------

/// Build the radial grid a spec describes.
inline RadialGrid::Ptr build_grid(const RunSpec& spec) {
  if (spec.grid.kind == Stretch::geometric) {
    return RadialGrid::geometric(spec.scenario.n, spec.grid.r_inner, spec.grid.r_outer,
                                 spec.grid.count);
  }
  return RadialGrid::uniform(spec.scenario.n, spec.grid.r_inner, spec.grid.r_outer,
                             spec.grid.count);
}

struct MaterializedRun {
  RadialGrid::Ptr grid;
  Scenario scenario;
  SolverConfig solver;
  TimeForm form;
  double t_end;
  std::size_t snapshot_stride;
};

/**
 * Turn a validated spec into runnable pieces: the grid, the fully
 * materialised initial data, and the solver configuration with its boundary
 * treatment resolved (origin-regular at r_inner = 0, Dirichlet otherwise).
 */
inline MaterializedRun materialize(const RunSpec& spec) {
  RadialGrid::Ptr grid = build_grid(spec);
  Scenario scenario = make_scenario(spec.scenario, grid);
  SolverConfig solver;
  solver.scheme = spec.solver.scheme;
  solver.dt = spec.solver.dt;
  solver.cfl_safety = spec.solver.cfl_safety;
  solver.newton_tol = spec.solver.newton_tol;
  solver.newton_max_iter = spec.solver.newton_max_iter;
  solver.boundary.inner = grid->origin_regular() ? InnerBoundaryKind::origin_regular
                                                 : InnerBoundaryKind::dirichlet;
  solver.boundary.inner_value = spec.solver.inner_value;
  solver.boundary.outer_value = spec.solver.outer_value;
  return MaterializedRun{std::move(grid), std::move(scenario), std::move(solver),
                         spec.solver.form, spec.solver.t_end, spec.solver.snapshot_stride};
}

// ---------------------------------------------------------------------------
// Maximum-principle verification configs
// ---------------------------------------------------------------------------

/**
 * File form of a randomized nonpositivity verification: sections
 * [maxprinciple] (instances, seed, T, dt, tolerance), [grid] (dim, kind,
 * r_inner, r_outer, count), and [bounds] (the ten coefficient bounds).
 */
struct MaxPrincipleSpec {
  std::size_t instances = 20;
  std::uint64_t seed = 2025;
  double T = 0.5;
  double dt = 0.05;
  double tolerance = 1e-10;
  int dim = 3;
  Stretch grid_kind = Stretch::uniform;
  double r_inner = 0.0;
  double r_outer = 10.0;
  std::size_t count = 201;
  ParabolicBounds bounds;
};

inline MaxPrincipleSpec maxprinciple_spec_from_document(const minitoml::Document& doc) {
  MaxPrincipleSpec spec;
  std::vector<std::string> errs;
  const std::set<std::string> known_sections{"maxprinciple", "grid", "bounds"};
  for (const auto& sec : doc.sections) {
    if (known_sections.count(sec.name) == 0) {
      errs.push_back("unknown section [" + sec.name + "] (line " + std::to_string(sec.line) +
                     ")");
    }
  }

  if (const minitoml::Section* sec = doc.find("maxprinciple")) {
    detail::SectionReader r(*sec, errs);
    r.count("instances", spec.instances, 1);
    long long seed = static_cast<long long>(spec.seed);
    r.integer("seed", seed);
    if (seed < 0) {
      errs.push_back(r.path("seed") + ": must be >= 0 (got " + std::to_string(seed) + ")");
    } else {
      spec.seed = static_cast<std::uint64_t>(seed);
    }
    r.number("T", spec.T);
    r.number("dt", spec.dt);
    r.number("tolerance", spec.tolerance);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("grid")) {
    detail::SectionReader r(*sec, errs);
    long long dim = spec.dim;
    r.integer("dim", dim);
    if (dim < 3) {
      errs.push_back(r.path("dim") + ": dimension must be >= 3 (got " + std::to_string(dim) +
                     ")");
    } else {
      spec.dim = static_cast<int>(dim);
    }
    r.choice("kind", spec.grid_kind,
             {{"uniform", Stretch::uniform}, {"geometric", Stretch::geometric}});
    r.number("r_inner", spec.r_inner);
    r.number("r_outer", spec.r_outer);
    r.count("count", spec.count, 3);
    r.finish();
  }

  if (const minitoml::Section* sec = doc.find("bounds")) {
    detail::SectionReader r(*sec, errs);
    r.number("m0", spec.bounds.m0);
    r.number("m1", spec.bounds.m1);
    r.number("alpha1_prime", spec.bounds.alpha1_prime);
    r.number("alpha1", spec.bounds.alpha1);
    r.number("alpha2", spec.bounds.alpha2);
    r.number("alpha3", spec.bounds.alpha3);
    r.number("alpha4", spec.bounds.alpha4);
    r.number("alpha5", spec.bounds.alpha5);
    r.number("k", spec.bounds.k);
    r.number("K0", spec.bounds.K0);
    r.finish();
  }

  detail::require_positive(errs, "[maxprinciple].T", spec.T);
  detail::require_positive(errs, "[maxprinciple].dt", spec.dt);
  detail::require_positive(errs, "[maxprinciple].tolerance", spec.tolerance);
  if (!(spec.r_inner >= 0.0)) {
    errs.push_back("[grid].r_inner: must be >= 0 (got " + format_double(spec.r_inner) + ")");
  }
  if (!(spec.r_outer > spec.r_inner)) {
    errs.push_back("[grid].r_outer: must exceed r_inner");
  }
  if (spec.grid_kind == Stretch::geometric && !(spec.r_inner > 0.0)) {
    errs.push_back("[grid].kind: a geometric stretch requires r_inner > 0");
  }
  try {
    validate_bounds(spec.bounds);
  } catch (const ConfigError& e) {
    for (const std::string& m : e.messages()) {
      errs.push_back("[bounds] " + m);
    }
  }

  if (!errs.empty()) {
    throw ConfigError(std::move(errs));
  }
  return spec;
}

inline MaxPrincipleSpec parse_maxprinciple_config_text(std::string_view text) {
  return maxprinciple_spec_from_document(minitoml::parse(text));
}

inline MaxPrincipleSpec parse_maxprinciple_config(const std::string& path) {
  return maxprinciple_spec_from_document(minitoml::parse_file(path));
}

inline RadialGrid::Ptr build_grid(const MaxPrincipleSpec& spec) {
  if (spec.grid_kind == Stretch::geometric) {
    return RadialGrid::geometric(spec.dim, spec.r_inner, spec.r_outer, spec.count);
  }
  return RadialGrid::uniform(spec.dim, spec.r_inner, spec.r_outer, spec.count);
}

}  // namespace yaf
