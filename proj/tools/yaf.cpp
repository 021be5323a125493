// Command-line front end: configured runs, exhaustion studies, maximum
// principle checks, and the manufactured-solution convergence study.
//
// Exit codes: 0 on success, 1 when a verification fails (monitor verdict,
// non-decreasing exhaustion errors, a failed study), 2 on configuration or
// usage errors.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "yaf/mms.hpp"
#include "yaf/runner.hpp"
#include "yaf/version.hpp"

namespace {

std::optional<std::filesystem::path> out_override(const CLI::Option* opt,
                                                  const std::string& dir) {
  if (opt->count() == 0) return std::nullopt;
  return std::filesystem::path(dir);
}

int cmd_run(const std::string& config, const std::optional<std::filesystem::path>& out) {
  const yaf::RunSpec spec = yaf::parse_config(config);
  const yaf::RunResult res = yaf::run_scenario(spec, out);
  std::printf("scenario %s (n = %d): %zu steps, %zu snapshots\n",
              yaf::to_string(spec.scenario.kind), spec.scenario.n, res.trajectory.steps_taken,
              res.trajectory.snapshots.size());
  if (res.trajectory.aborted) {
    std::printf("aborted: %s\n", res.trajectory.abort_reason.c_str());
  }
  for (const yaf::MonitorVerdict& v : res.manifest.verdicts) {
    std::printf("monitor %s: %s%s%s%s\n", v.name.c_str(), v.passed ? "passed" : "FAILED",
                v.detail.empty() ? "" : " (", v.detail.c_str(), v.detail.empty() ? "" : ")");
  }
  std::printf("wrote %s\n", (res.directory / "manifest.json").string().c_str());
  std::printf("result: %s\n", res.ok ? "ok" : "failed");
  return res.ok ? 0 : 1;
}

int cmd_exhaustion(const std::string& config, const std::vector<double>& radii,
                   const std::optional<std::filesystem::path>& out) {
  const yaf::RunSpec spec = yaf::parse_config(config);
  const yaf::ExhaustionRunResult res = yaf::run_exhaustion(spec, radii, out);
  std::printf("%-4s %-12s %-14s %s\n", "m", "radius", "e_m", "rate");
  for (const yaf::ExhaustionRow& row : res.study.table) {
    if (row.rate) {
      std::printf("%-4zu %-12g %-14.6e %.4f\n", row.m, row.radius, row.e_m, *row.rate);
    } else {
      std::printf("%-4zu %-12g %-14.6e -\n", row.m, row.radius, row.e_m);
    }
  }
  std::printf("strictly decreasing: %s\n", res.ok ? "yes" : "no");
  std::printf("wrote %s\n", res.csv_path.string().c_str());
  return res.ok ? 0 : 1;
}

int cmd_constants(double T, double K0, double alpha4, double alpha5, double alpha1, int n,
                  double m0, double alpha2, double alpha3, double alpha1_prime) {
  const double theta = yaf::theta_constant(alpha1);
  const double eta = yaf::admissible_eta(T, K0, alpha4, alpha5);
  const double beta = yaf::beta_lower_bound(n, m0, alpha5, alpha3, alpha2, alpha1_prime);
  nlohmann::json j;
  j["theta"] = theta;
  j["eta"] = eta;
  j["beta"] = beta;
  j["induction_cover"] = yaf::induction_cover(T, eta);
  j["inputs"] = {{"T", T},          {"K0", K0},       {"alpha4", alpha4},
                 {"alpha5", alpha5}, {"alpha1", alpha1}, {"n", n},
                 {"m0", m0},        {"alpha2", alpha2}, {"alpha3", alpha3},
                 {"alpha1_prime", alpha1_prime}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& config) {
  const yaf::MaxPrincipleSpec spec = yaf::parse_maxprinciple_config(config);
  const yaf::RandomizedStudy study = yaf::randomized_nonpositivity_study(
      yaf::build_grid(spec), spec.bounds, spec.instances, spec.seed, spec.T, spec.dt,
      spec.tolerance);
  nlohmann::json j;
  j["instances"] = study.instances;
  j["tolerance"] = study.tolerance;
  j["eta_used"] = study.eta_used;
  j["steps_used"] = study.steps_used;
  j["max_violation"] = study.max_violation;
  j["worst_instance"] = study.worst_instance;
  j["passed"] = study.passed;
  std::cout << j.dump(2) << "\n";
  return study.passed ? 0 : 1;
}

int cmd_mms(const std::vector<int>& dims, int refinements) {
  bool all_passed = true;
  for (int n : dims) {
    const yaf::MmsReport rep = yaf::run_mms_study(n, refinements);
    std::printf("n = %d\n", n);
    std::printf("  %-10s %-8s %-12s %-12s %s\n", "study", "nodes", "h", "dt", "error");
    for (const yaf::MmsLevel& lvl : rep.spatial) {
      std::printf("  %-10s %-8zu %-12.6g %-12.6g %.6e\n", "spatial", lvl.nodes, lvl.h, lvl.dt,
                  lvl.error);
    }
    for (const yaf::MmsLevel& lvl : rep.temporal) {
      std::printf("  %-10s %-8zu %-12.6g %-12.6g %.6e\n", "temporal", lvl.nodes, lvl.h, lvl.dt,
                  lvl.error);
    }
    std::printf("  spatial order  %.3f (target 2.0 +/- 0.2)\n", rep.spatial_order);
    std::printf("  temporal order %.3f (target 1.0 +/- 0.2)\n", rep.temporal_order);
    std::printf("  verdict: %s\n", rep.passed ? "PASS" : "FAIL");
    all_passed = all_passed && rep.passed;
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial conformal flow workbench"};
  app.set_version_flag("--version", yaf::kVersion);
  app.require_subcommand(1);

  // run
  std::string run_config;
  std::string run_out;
  CLI::App* run = app.add_subcommand("run", "evolve one configured scenario");
  run->add_option("config", run_config, "TOML configuration file")->required();
  CLI::Option* run_out_opt = run->add_option("--out", run_out, "output directory override");

  // exhaustion
  std::string exh_config;
  std::string exh_out;
  std::vector<double> exh_radii;
  CLI::App* exh = app.add_subcommand("exhaustion", "nested-domain convergence study");
  exh->add_option("config", exh_config, "TOML configuration file")->required();
  exh->add_option("--radii", exh_radii, "comma-separated outer radii (overrides the config)")
      ->delimiter(',');
  CLI::Option* exh_out_opt = exh->add_option("--out", exh_out, "output directory override");

  // maxprinciple {constants, verify}
  CLI::App* mp = app.add_subcommand("maxprinciple", "maximum principle toolbox");
  mp->require_subcommand(1);
  double mp_T = 0.0, mp_K0 = 0.0, mp_a4 = 0.0, mp_a5 = 0.0;
  double mp_a1 = 1.0, mp_m0 = 1.0, mp_a2 = 1.0, mp_a3 = 1.0, mp_a1p = 1.0;
  int mp_n = 3;
  CLI::App* consts = mp->add_subcommand("constants", "derived constants as JSON");
  consts->add_option("--T", mp_T, "time horizon")->required();
  consts->add_option("--K0", mp_K0, "curvature-scale bound")->required();
  consts->add_option("--alpha4", mp_a4, "drift bound")->required();
  consts->add_option("--alpha5", mp_a5, "zeroth-order bound")->required();
  consts->add_option("--alpha1", mp_a1, "upper ellipticity bound (default 1)");
  consts->add_option("--n", mp_n, "dimension (default 3)");
  consts->add_option("--m0", mp_m0, "lower weight bound (default 1)");
  consts->add_option("--alpha2", mp_a2, "gradient-coefficient bound (default 1)");
  consts->add_option("--alpha3", mp_a3, "potential bound (default 1)");
  consts->add_option("--alpha1-prime", mp_a1p, "lower ellipticity bound (default 1)");
  std::string mp_config;
  CLI::App* verify = mp->add_subcommand("verify", "randomized nonpositivity study");
  verify->add_option("config", mp_config, "TOML configuration file")->required();

  // mms-convergence
  std::vector<int> mms_dims{3};
  int mms_refinements = 4;
  CLI::App* mms = app.add_subcommand("mms-convergence",
                                     "manufactured-solution convergence orders");
  mms->add_option("--dims", mms_dims, "comma-separated dimensions (default 3)")->delimiter(',');
  mms->add_option("--refinements", mms_refinements, "refinement levels (default 4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly, usage errors do not
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_config, out_override(run_out_opt, run_out));
    }
    if (exh->parsed()) {
      return cmd_exhaustion(exh_config, exh_radii, out_override(exh_out_opt, exh_out));
    }
    if (mp->parsed() && consts->parsed()) {
      return cmd_constants(mp_T, mp_K0, mp_a4, mp_a5, mp_a1, mp_n, mp_m0, mp_a2, mp_a3, mp_a1p);
    }
    if (mp->parsed() && verify->parsed()) {
      return cmd_verify(mp_config);
    }
    if (mms->parsed()) {
      return cmd_mms(mms_dims, mms_refinements);
    }
  } catch (const yaf::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const yaf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable: require_subcommand guarantees a branch above
}
