#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "yaf/config.hpp"

using namespace yaf;

TEST_CASE("a minimal flat scenario file yields defaults everywhere else") {
  const RunSpec spec = parse_config_text("[scenario]\nkind = \"flat\"\n");
  CHECK(spec.scenario.kind == ScenarioKind::flat);
  CHECK(spec.scenario.n == 3);
  CHECK(spec.grid.kind == Stretch::uniform);
  CHECK(spec.grid.r_inner == 0.0);
  CHECK(spec.grid.r_outer == 40.0);
  CHECK(spec.grid.count == 401);
  CHECK(spec.solver.form == TimeForm::rescaled);
  CHECK(spec.solver.scheme == Scheme::implicit_euler_newton);
  CHECK(spec.solver.dt == 1e-2);
  CHECK(spec.solver.t_end == 1.0);
  CHECK(!spec.solver.inner_value.has_value());
  CHECK(!spec.solver.outer_value.has_value());
  CHECK(spec.monitors.positivity);
  CHECK(!spec.monitors.bracket);
  CHECK(spec.output.directory == "out");
  CHECK(spec.output.write_snapshots);
  CHECK(!spec.output.write_checkpoint);
}

TEST_CASE("every field is addressable and survives materialisation") {
  const char* text =
      "[scenario]\n"
      "kind = \"schwarzschild\"\n"
      "n = 3\n"
      "mass = 2.0\n"
      "[grid]\n"
      "kind = \"geometric\"\n"
      "r_inner = 1.0\n"
      "r_outer = 100.0\n"
      "count = 301\n"
      "[solver]\n"
      "form = \"geometric\"\n"
      "scheme = \"explicit\"\n"
      "dt = 1e-4\n"
      "t_end = 0.25\n"
      "cfl_safety = 0.4\n"
      "newton_tol = 1e-12\n"
      "newton_max_iter = 30\n"
      "snapshot_stride = 5\n"
      "inner_value = 2.0\n"
      "outer_value = 1.01\n"
      "[monitors]\n"
      "mass = true\n"
      "mass_radii = [50.0, 70.0, 90.0]\n"
      "mass_max_drift = 1e-3\n"
      "positivity = true\n"
      "positivity_floor = 0.5\n"
      "[output]\n"
      "directory = \"runs/schw\"\n"
      "write_checkpoint = true\n";
  const RunSpec spec = parse_config_text(text);
  CHECK(spec.scenario.mass == 2.0);
  CHECK(spec.grid.kind == Stretch::geometric);
  CHECK(spec.solver.form == TimeForm::geometric);
  CHECK(spec.solver.scheme == Scheme::explicit_euler);
  CHECK(spec.solver.cfl_safety == 0.4);
  CHECK(spec.solver.newton_max_iter == 30);
  CHECK(spec.solver.snapshot_stride == 5);
  CHECK(*spec.solver.inner_value == 2.0);
  CHECK(*spec.solver.outer_value == 1.01);
  CHECK(spec.monitors.mass_radii == std::vector<double>{50.0, 70.0, 90.0});
  CHECK(spec.monitors.mass_max_drift == 1e-3);
  CHECK(spec.output.directory == "runs/schw");
  CHECK(spec.output.write_checkpoint);

  const MaterializedRun run = materialize(spec);
  CHECK(run.grid->size() == 301);
  CHECK(run.grid->r_inner() == 1.0);
  CHECK(run.scenario.mass_known);
  CHECK(run.scenario.analytic_mass == 2.0);
  CHECK(run.solver.boundary.inner == InnerBoundaryKind::dirichlet);
  CHECK(*run.solver.boundary.inner_value == 2.0);
  CHECK(run.form == TimeForm::geometric);
  CHECK(run.t_end == 0.25);
  CHECK(run.snapshot_stride == 5);
}

TEST_CASE("configs round-trip losslessly through render_config") {
  const char* text =
      "[scenario]\n"
      "kind = \"bump\"\n"
      "n = 4\n"
      "amplitude = 0.05\n"
      "width = 1.5\n"
      "center = 2.0\n"
      "[grid]\n"
      "r_outer = 35.5\n"
      "count = 512\n"
      "[solver]\n"
      "dt = 0.0001\n"
      "newton_tol = 3.3e-11\n"
      "[monitors]\n"
      "bracket = true\n"
      "mass = true\n"
      "[output]\n"
      "directory = \"out/b\\\\q\"\n";
  const RunSpec a = parse_config_text(text);
  const std::string rendered = render_config(a);
  const RunSpec b = parse_config_text(rendered);
  // the rendering is canonical: rendering the reparsed spec reproduces it byte
  // for byte, which is what run manifests fingerprint
  CHECK(render_config(b) == rendered);
  CHECK(b.scenario.amplitude == a.scenario.amplitude);
  CHECK(b.solver.newton_tol == a.solver.newton_tol);
  CHECK(b.monitors.mass_radii == a.monitors.mass_radii);  // normalised defaults survive
  CHECK(b.output.directory == a.output.directory);

  // full-precision doubles survive the text round trip bit for bit
  RunSpec awkward = a;
  awkward.solver.dt = 0.1 + 0.2;              // 0.30000000000000004
  awkward.scenario.amplitude = 1.0 / 3.0;
  awkward.monitors.mass_radii = {10.0 / 3.0, 17.76};
  const RunSpec back = parse_config_text(render_config(awkward));
  CHECK(back.solver.dt == awkward.solver.dt);
  CHECK(back.scenario.amplitude == awkward.scenario.amplitude);
  CHECK(back.monitors.mass_radii == awkward.monitors.mass_radii);
}

TEST_CASE("custom profiles are parsed pairwise and validated elementwise") {
  const char* good =
      "[scenario]\n"
      "kind = \"custom\"\n"
      "profile_r = [0.0, 1.0, 2.0, 40.0]\n"
      "profile_v = [1.5, 1.2, 1.1, 1.0]\n";
  const RunSpec spec = parse_config_text(good);
  REQUIRE(spec.scenario.profile.size() == 4);
  CHECK(spec.scenario.profile[1].first == 1.0);
  CHECK(spec.scenario.profile[1].second == 1.2);

  CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nkind = \"custom\"\n"
                                         "profile_r = [0.0, 1.0]\nprofile_v = [1.0]\n"),
                       doctest::Contains("lengths differ (2 vs 1)"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nkind = \"custom\"\n"
                                         "profile_r = [0.0, 2.0, 1.0]\n"
                                         "profile_v = [1.0, 1.0, 1.0]\n"),
                       doctest::Contains("strictly increasing (profile_r[2] = 1)"), ConfigError);
  // the physics violation names the offending node
  CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nkind = \"custom\"\n"
                                         "profile_r = [0.0, 1.0, 2.0]\n"
                                         "profile_v = [1.0, -0.2, 1.0]\n"),
                       doctest::Contains("profile_v[1] = -0.2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nkind = \"custom\"\n"),
                       doctest::Contains("needs a (profile_r, profile_v) table"), ConfigError);
}

TEST_CASE("schwarzschild data on an origin-regular grid names the singular origin") {
  const char* text =
      "[scenario]\n"
      "kind = \"schwarzschild\"\n"
      "[grid]\n"
      "r_inner = 0.0\n";
  CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("singular at the origin"),
                       ConfigError);
  // excising the core fixes it
  const RunSpec ok = parse_config_text("[scenario]\nkind = \"schwarzschild\"\n"
                                       "[grid]\nr_inner = 0.5\n");
  CHECK(ok.grid.r_inner == 0.5);
}

TEST_CASE("unknown sections and keys are rejected by name") {
  CHECK_THROWS_WITH_AS(parse_config_text("[scenari]\nkind = \"flat\"\n"),
                       doctest::Contains("unknown section [scenari] (line 1)"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[scenario]\nkid = \"flat\"\n"),
                       doctest::Contains("[scenario].kid: unknown key (line 2)"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[solver]\ndt = 0.1\ntimestep = 0.1\n"),
                       doctest::Contains("[solver].timestep: unknown key (line 3)"),
                       ConfigError);
}

TEST_CASE("validation reports every problem at once, with key paths") {
  const char* text =
      "[scenario]\n"
      "kind = \"sphere\"\n"      // bad enum
      "n = 2\n"                  // bad dimension
      "[grid]\n"
      "kind = \"geometric\"\n"   // needs r_inner > 0 (default 0)
      "r_outer = -5.0\n"         // below r_inner
      "[solver]\n"
      "dt = 0.0\n"               // not positive
      "cfl_safety = 1.5\n"       // outside (0, 1]
      "newton_max_iter = 0\n"    // below 1
      "[monitors]\n"
      "bracket_tol = -1.0\n";    // not positive
  try {
    parse_config_text(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.messages().size() == 8);
    CHECK(e.messages()[0].find("[scenario].kind: 'sphere' is not one of") != std::string::npos);
    CHECK(e.messages()[1].find("[scenario].n: dimension must be >= 3") != std::string::npos);
    CHECK(e.messages()[2].find("[solver].newton_max_iter") != std::string::npos);
    CHECK(e.messages()[3].find("[grid].r_outer: must exceed r_inner") != std::string::npos);
    CHECK(e.messages()[4].find("[grid].kind: a geometric stretch requires r_inner > 0") !=
          std::string::npos);
    CHECK(e.messages()[5].find("[solver].dt") != std::string::npos);
    CHECK(e.messages()[6].find("[solver].cfl_safety") != std::string::npos);
    CHECK(e.messages()[7].find("[monitors].bracket_tol") != std::string::npos);
  }
}

TEST_CASE("type mismatches name the key, the expected type, and the line") {
  CHECK_THROWS_WITH_AS(parse_config_text("[solver]\ndt = \"fast\"\n"),
                       doctest::Contains("[solver].dt: expected a number, got string (line 2)"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\ncount = 3.5\n"),
                       doctest::Contains("[grid].count: expected an integer, got float"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[monitors]\nmass = 1\n"),
                       doctest::Contains("[monitors].mass: expected a boolean, got integer"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[monitors]\nmass_radii = [1.0, \"x\"]\n"),
                       doctest::Contains("mixed value types"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[output]\ndirectory = true\n"),
                       doctest::Contains("[output].directory: expected a string, got boolean"),
                       ConfigError);
}

TEST_CASE("boundary overrides are checked against the grid's boundary layout") {
  CHECK_THROWS_WITH_AS(parse_config_text("[solver]\ninner_value = 1.0\n"),
                       doctest::Contains("origin-regular grid (r_inner = 0) has no inner "
                                         "Dirichlet row"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nr_inner = 1.0\n[solver]\n"
                                         "inner_value = -1.0\n"),
                       doctest::Contains("[solver].inner_value: the conformal factor must be "
                                         "positive"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[solver]\nouter_value = 0.0\n"),
                       doctest::Contains("[solver].outer_value"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[monitors]\nmass_radii = [45.0]\n"),
                       doctest::Contains("probe radius 45 lies outside"), ConfigError);
}

TEST_CASE("enabling the mass monitor without radii fills the normalised probes") {
  const RunSpec spec = parse_config_text("[scenario]\nkind = \"flat\"\n[grid]\n"
                                         "r_outer = 100.0\n[monitors]\nmass = true\n");
  CHECK(spec.monitors.mass_radii ==
        std::vector<double>{0.5 * 100.0, 0.7 * 100.0, 0.9 * 100.0});
}

TEST_CASE("exhaustion section parses and validates") {
  const RunSpec spec = parse_config_text("[exhaustion]\nradii = [15.0, 30.0, 60.0]\n"
                                         "compact_radius = 8.0\ndr = 0.5\nsnapshots = 4\n");
  CHECK(spec.exhaustion.radii == std::vector<double>{15.0, 30.0, 60.0});
  CHECK(spec.exhaustion.compact_radius == 8.0);
  CHECK(spec.exhaustion.dr == 0.5);
  CHECK(spec.exhaustion.snapshots == 4);

  CHECK_THROWS_WITH_AS(parse_config_text("[exhaustion]\nradii = [30.0, 15.0]\n"),
                       doctest::Contains("[exhaustion].radii: must be strictly increasing"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[exhaustion]\ndr = 0.0\n"),
                       doctest::Contains("[exhaustion].dr"), ConfigError);
}

TEST_CASE("maxprinciple verification configs parse their three sections") {
  const char* text =
      "[maxprinciple]\ninstances = 7\nseed = 99\nT = 0.25\ndt = 0.025\ntolerance = 1e-11\n"
      "[grid]\ndim = 3\nr_inner = 0.5\nr_outer = 12.0\ncount = 101\nkind = \"uniform\"\n"
      "[bounds]\nm0 = 0.7\nm1 = 1.3\nalpha1_prime = 0.5\nalpha1 = 1.5\nalpha2 = 0.8\n"
      "alpha3 = 0.9\nalpha4 = 1.0\nalpha5 = 0.0\nk = 1.0\nK0 = 1.0\n";
  const MaxPrincipleSpec spec = parse_maxprinciple_config_text(text);
  CHECK(spec.instances == 7);
  CHECK(spec.seed == 99);
  CHECK(spec.T == 0.25);
  CHECK(spec.bounds.m0 == 0.7);
  CHECK(spec.bounds.alpha2 == 0.8);
  CHECK(build_grid(spec)->size() == 101);

  // bound inconsistencies surface with the [bounds] prefix
  CHECK_THROWS_WITH_AS(parse_maxprinciple_config_text("[bounds]\nm0 = 2.0\nm1 = 1.0\n"),
                       doctest::Contains("[bounds]"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_maxprinciple_config_text("[maxprinciple]\nT = -1.0\n"),
                       doctest::Contains("[maxprinciple].T"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_maxprinciple_config_text("[budget]\nx = 1\n"),
                       doctest::Contains("unknown section [budget]"), ConfigError);
}

TEST_CASE("materialisation surfaces physics failures from the scenario layer") {
  // a power tail with amplitude <= -1 drives v0 nonpositive at the origin
  const RunSpec spec = parse_config_text("[scenario]\nkind = \"power_tail\"\n"
                                         "amplitude = -1.5\ntau = 1.0\n");
  CHECK_THROWS_AS(materialize(spec), Error);
}
