#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "yaf/io.hpp"

using namespace yaf;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "yaf_io_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FlowTrajectory tiny_trajectory() {
  auto g = RadialGrid::uniform(3, 0.0, 10.0, 21);
  FlowState s{ConformalField::from_function(g, [](double r) { return 1.0 + 0.3 / (1.0 + r); }),
              0.0, TimeForm::rescaled};
  SolverConfig cfg;
  cfg.dt = 0.05;
  return evolve(std::move(s), cfg, 0.2);
}

}  // namespace

// Runs first: the threshold is cached on first use, so the environment has to
// be set before any other test logs anything.
TEST_CASE("log threshold comes from YAF_LOG") {
  setenv("YAF_LOG", "debug", 1);
  CHECK(log_threshold() == LogLevel::debug);
  CHECK(std::string(to_string(LogLevel::warn)) == "warn");
  log(LogLevel::debug, "io suite logger smoke line");
}

TEST_CASE("format_double reproduces any double exactly on read-back") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int k = 0; k < 500; ++k) {
    const double x = std::ldexp(mant(rng), expo(rng));
    CAPTURE(x);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("config fingerprints are stable and collision-averse on edits") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");  // FNV-1a offset basis
  CHECK(fnv1a_hex("dt = 0.01") == fnv1a_hex("dt = 0.01"));
  CHECK(fnv1a_hex("dt = 0.01") != fnv1a_hex("dt = 0.02"));
  CHECK(fnv1a_hex("x").size() == 16);
}

TEST_CASE("csv files have one header row, LF endings, and full-precision cells") {
  const fs::path file = test_dir() / "table.csv";
  write_csv(file, {"time", "value"}, {{0.0, 1.0 / 3.0}, {0.5, 0.1 + 0.2}});
  const std::string text = slurp(file);
  CHECK(text == "time,value\n0,0.33333333333333331\n0.5,0.30000000000000004\n");
  CHECK(text.find('\r') == std::string::npos);

  // identical data writes identical bytes
  const fs::path again = test_dir() / "table2.csv";
  write_csv(again, {"time", "value"}, {{0.0, 1.0 / 3.0}, {0.5, 0.1 + 0.2}});
  CHECK(slurp(again) == text);

  CHECK_THROWS_AS(write_csv(file, {"a", "b"}, {{1.0}}), InvalidArgumentError);
  CHECK_THROWS_AS(write_csv(test_dir() / "no_dir" / "x.csv", {"a"}, {}), IoError);

  const fs::path cells = test_dir() / "cells.csv";
  write_csv_cells(cells, {"m", "rate"}, {{"0", ""}, {"1", "1.5"}});
  CHECK(slurp(cells) == "m,rate\n0,\n1,1.5\n");
}

TEST_CASE("series emit as csv and as gnuplot two-column files") {
  ObservableSeries s;
  s.name = "adm_mass";
  s.metadata.emplace_back("radii", "3");
  s.append(0.0, 1.0);
  s.append(0.25, 0.5);
  const fs::path csv = test_dir() / "adm_mass.csv";
  const fs::path dat = test_dir() / "adm_mass.dat";
  write_series_csv(csv, s);
  write_series_dat(dat, s);
  CHECK(slurp(csv) == "time,adm_mass\n0,1\n0.25,0.5\n");
  CHECK(slurp(dat) == "# adm_mass  radii=3\n0 1\n0.25 0.5\n");
}

TEST_CASE("snapshot tables carry every retained state in long form") {
  const FlowTrajectory traj = tiny_trajectory();
  const fs::path file = test_dir() / "snapshots.csv";
  write_snapshots_csv(file, traj);
  const std::string text = slurp(file);
  CHECK(text.rfind("time,r,v\n", 0) == 0);
  // header + (snapshots x nodes) data lines
  const std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  CHECK(lines == 1 + traj.snapshots.size() * traj.initial().v.size());
  // first data row is the initial state at the origin
  std::istringstream in(text);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row == "0,0," + format_double(traj.initial().v[0]));
}

TEST_CASE("events serialise as one json object per line") {
  std::vector<MonitorEvent> events(2);
  events[0].time = 0.5;
  events[0].monitor = "mass";
  events[0].series = "adm_mass";
  events[0].value = 1.25;
  events[1].time = 0.75;
  events[1].monitor = "bracket";
  events[1].series = "bracket_violation";
  events[1].value = 2e-3;
  events[1].severity = EventSeverity::violation;
  events[1].detail = "u left the bracket";
  const fs::path file = test_dir() / "events.jsonl";
  write_events_jsonl(file, events);
  std::istringstream in(slurp(file));
  std::string line;
  REQUIRE(std::getline(in, line));
  nlohmann::json j0 = nlohmann::json::parse(line);
  CHECK(j0["monitor"] == "mass");
  CHECK(j0["severity"] == "info");
  CHECK(j0["value"] == 1.25);
  REQUIRE(std::getline(in, line));
  nlohmann::json j1 = nlohmann::json::parse(line);
  CHECK(j1["severity"] == "violation");
  CHECK(j1["detail"] == "u left the bracket");
  CHECK(!std::getline(in, line));
}

TEST_CASE("checkpoints round-trip every snapshot value exactly") {
  FlowTrajectory traj = tiny_trajectory();
  MonitorEvent e;
  e.time = 0.1;
  e.monitor = "positivity";
  e.series = "min_v";
  e.value = traj.final_state().v.min_value();
  e.severity = EventSeverity::info;
  e.detail = "roundtrip probe";
  traj.events.push_back(e);

  const fs::path file = test_dir() / "checkpoint.json";
  save_checkpoint(traj, file);
  const FlowTrajectory back = load_checkpoint(file);

  CHECK(back.form == traj.form);
  CHECK(back.steps_taken == traj.steps_taken);
  CHECK(back.aborted == traj.aborted);
  REQUIRE(back.snapshots.size() == traj.snapshots.size());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    CHECK(back.snapshots[k].time == traj.snapshots[k].time);
    REQUIRE(back.snapshots[k].v.size() == traj.snapshots[k].v.size());
    for (std::size_t i = 0; i < traj.snapshots[k].v.size(); ++i) {
      // shortest-round-trip serialisation: equality is exact, which implies
      // the 1e-15-relative reproduction the format promises
      CHECK(back.snapshots[k].v[i] == traj.snapshots[k].v[i]);
    }
  }
  const RadialGrid& g0 = *traj.initial().v.grid();
  const RadialGrid& g1 = *back.initial().v.grid();
  REQUIRE(g1.size() == g0.size());
  CHECK(g1.dim() == g0.dim());
  for (std::size_t i = 0; i < g0.size(); ++i) CHECK(g1.node(i) == g0.node(i));
  REQUIRE(back.events.size() == traj.events.size());
  CHECK(back.events.back().detail == "roundtrip probe");
  CHECK(back.events.back().severity == EventSeverity::info);
}

TEST_CASE("an empty trajectory is a valid checkpoint") {
  FlowTrajectory empty;
  empty.form = TimeForm::geometric;
  const fs::path file = test_dir() / "empty.json";
  save_checkpoint(empty, file);
  const FlowTrajectory back = load_checkpoint(file);
  CHECK(back.snapshots.empty());
  CHECK(back.events.empty());
  CHECK(back.form == TimeForm::geometric);
}

TEST_CASE("corrupt, truncated, and version-skewed checkpoints are refused") {
  const FlowTrajectory traj = tiny_trajectory();
  const fs::path good = test_dir() / "good.json";
  save_checkpoint(traj, good);

  // truncate to half: no longer valid JSON
  const std::string full = slurp(good);
  const fs::path truncated = test_dir() / "truncated.json";
  {
    std::ofstream out(truncated, std::ios::binary);
    out << full.substr(0, full.size() / 2);
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(truncated), doctest::Contains("not valid JSON"),
                       CheckpointError);

  // same layout, different declared version
  nlohmann::json j = nlohmann::json::parse(full);
  j["format_version"] = kCheckpointFormatVersion + 1;
  const fs::path skewed = test_dir() / "skewed.json";
  {
    std::ofstream out(skewed, std::ios::binary);
    out << j.dump();
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(skewed), doctest::Contains("format version"),
                       CheckpointError);

  // structurally valid JSON that is not a checkpoint
  nlohmann::json snapless = nlohmann::json::parse(full);
  snapless.erase("grid");
  const fs::path gridless = test_dir() / "gridless.json";
  {
    std::ofstream out(gridless, std::ios::binary);
    out << snapless.dump();
  }
  CHECK_THROWS_WITH_AS(load_checkpoint(gridless),
                       doctest::Contains("snapshots but no grid record"), CheckpointError);

  CHECK_THROWS_AS(load_checkpoint(test_dir() / "does_not_exist.json"), IoError);
}

TEST_CASE("manifests are written atomically and only over existing outputs") {
  const fs::path dir = test_dir() / "run0";
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "snapshots.csv", std::ios::binary);
    out << "time,r,v\n";
  }
  RunManifest m;
  m.config_hash = fnv1a_hex("demo");
  m.software_version = kVersion;
  m.scenario_kind = "flat";
  m.dim = 3;
  m.grid_kind = "uniform";
  m.r_outer = 40.0;
  m.node_count = 401;
  m.steps_taken = 10;
  m.verdicts.push_back({"positivity", true, ""});
  m.outputs = {"snapshots.csv"};
  m.ok = true;

  const fs::path written = write_manifest(dir, m);
  CHECK(written == dir / "manifest.json");
  CHECK(fs::exists(written));
  CHECK(!fs::exists(dir / "manifest.json.tmp"));  // temp name vanished in the rename
  const nlohmann::json j = nlohmann::json::parse(slurp(written));
  CHECK(j["ok"] == true);
  CHECK(j["software_version"] == std::string(kVersion));
  CHECK(j["grid"]["count"] == 401);
  CHECK(j["monitor_verdicts"][0]["monitor"] == "positivity");
  CHECK(j["outputs"][0] == "snapshots.csv");

  // a manifest must never point at files that are not there
  m.outputs.push_back("missing.csv");
  CHECK_THROWS_WITH_AS(write_manifest(dir, m),
                       doctest::Contains("lists output 'missing.csv' which does not exist"),
                       IoError);
}
