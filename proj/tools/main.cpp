// Case-directory driver.  Subcommands:
//
//   check    load mesh + config, validate, print a quality report
//   solve    run the coupled solver, write state/summary/log/VTK
//   sample   evaluate configured line samples from a saved state
//   export   rewrite VTK output from a saved state
//   verify   solve a built-in analytic case and compare fields
//
// Exit codes: 0 ok, 1 usage/config, 2 divergence, 3 max-iterations, 4 I/O.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ferrovolt/case_setup.hpp"
#include "ferrovolt/error.hpp"
#include "ferrovolt/log.hpp"
#include "ferrovolt/magnetostatics.hpp"
#include "ferrovolt/mesh_quality.hpp"
#include "ferrovolt/postproc.hpp"
#include "ferrovolt/state_io.hpp"
#include "ferrovolt/verify.hpp"

namespace {

using namespace ferrovolt;

struct CommonOpts {
  std::string caseDir = ".";
  std::vector<std::string> sets;
  std::string logLevel = "info";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--case", o.caseDir, "Case directory (default: current directory)");
  cmd->add_option("--set", o.sets, "Override a config key, key=value (repeatable)");
  cmd->add_option("--log-level", o.logLevel, "debug | info | warning | error | quiet");
}

int map_exceptions(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    log_error(e.what());
    return 4;
  } catch (const std::exception& e) {
    log_error(e.what());
    return 1;
  }
}

std::string out_dir(const CaseSetup& setup, const std::string& caseDir) {
  std::filesystem::path p(setup.output.directory);
  if (p.is_absolute()) return p.string();
  return (std::filesystem::path(caseDir) / p).string();
}

int cmd_check(const CommonOpts& o) {
  const CaseSetup setup = load_case(o.caseDir, o.sets);
  const QualityReport report = check_quality(setup.mesh);
  std::fputs(report.summary().c_str(), stdout);
  std::printf("boundary conditions: all %zu region(s) covered\n", setup.mesh.regions.size());
  return report.error ? 1 : 0;
}

int cmd_solve(const CommonOpts& o) {
  CaseSetup setup = load_case(o.caseDir, o.sets);
  const std::string out = out_dir(setup, o.caseDir);
  std::filesystem::create_directories(out);
  if (setup.output.iterationLog) setup.control.logPath = out + "/iterations.tsv";

  SolveState state = make_solve_state(setup.mesh, setup.materials);
  const auto t0 = std::chrono::steady_clock::now();
  const OuterIterationReport report =
      bgs_outer_loop(setup.mesh, setup.bcs, state, setup.control);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunSummary summary;
  summary.converged = report.converged;
  summary.diverged = report.diverged;
  summary.iterations = report.iterations;
  summary.finalResidual =
      report.residualHistory.empty() ? 0.0 : report.residualHistory.back();
  summary.wallSeconds = wall;
  summary.failure = report.failure;
  summary.gauge = gauge_report(setup.mesh, setup.bcs, state);

  write_summary(summary, out + "/summary.txt");
  save_state(setup.mesh, state, out + "/state.dat");
  if (setup.output.vtk) write_vtk(setup.mesh, state, out + "/solution");

  if (report.converged) {
    std::printf("converged in %d outer iteration(s), %.2f s\n", report.iterations, wall);
  } else if (report.diverged) {
    std::printf("status: diverged\n");
    std::printf("iterations: %d\n", report.iterations);
    std::printf("reason: %s\n", report.failure.c_str());
    const size_t n = report.residualHistory.size();
    std::printf("residual tail:");
    for (size_t i = n > 5 ? n - 5 : 0; i < n; ++i) {
      std::printf(" %.3e", report.residualHistory[i]);
    }
    std::printf("\n");
  } else {
    std::printf("iteration budget (%d) exhausted, residual %.3e\n", report.iterations,
                summary.finalResidual);
  }
  std::printf("outputs in %s\n", out.c_str());
  return report.converged ? 0 : (report.diverged ? 2 : 3);
}

int cmd_sample(const CommonOpts& o) {
  const CaseSetup setup = load_case(o.caseDir, o.sets);
  const std::string out = out_dir(setup, o.caseDir);
  SolveState state = make_solve_state(setup.mesh, setup.materials);
  load_state(setup.mesh, state, out + "/state.dat");
  if (setup.samples.empty()) log_warning("case defines no [sample.*] sections");
  for (const SampleSpec& spec : setup.samples) {
    const SampleTable table = sample_line(setup.mesh, state, spec);
    const std::string path = out + "/sample_" + spec.name + ".csv";
    write_csv_samples(table, path);
    std::printf("wrote %s\n", path.c_str());
  }
  return 0;
}

int cmd_export(const CommonOpts& o) {
  const CaseSetup setup = load_case(o.caseDir, o.sets);
  const std::string out = out_dir(setup, o.caseDir);
  SolveState state = make_solve_state(setup.mesh, setup.materials);
  load_state(setup.mesh, state, out + "/state.dat");
  write_vtk(setup.mesh, state, out + "/solution");
  std::printf("wrote %s/solution*.vtk\n", out.c_str());
  return 0;
}

int cmd_verify(const std::string& name) {
  std::vector<std::string> names =
      name.empty() ? oracle_case_names() : std::vector<std::string>{name};
  bool allPass = true;
  bool anyUnsolved = false;
  for (const std::string& n : names) {
    const VerifyResult res = verify_case(n);
    std::printf("%s: %s\n", res.name.c_str(), res.pass ? "PASS" : "FAIL");
    for (const std::string& line : res.detail) std::printf("  %s\n", line.c_str());
    allPass = allPass && res.pass;
    anyUnsolved = anyUnsolved || !res.solved;
  }
  return allPass ? 0 : (anyUnsolved ? 2 : 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ferrovolt: multi-region finite-volume magnetostatics"};
  app.require_subcommand(1);

  CommonOpts check, solve, sample, exp;
  add_common(app.add_subcommand("check", "Validate a case and print mesh quality"), check);
  add_common(app.add_subcommand("solve", "Run the solver on a case"), solve);
  add_common(app.add_subcommand("sample", "Evaluate configured line samples"), sample);
  add_common(app.add_subcommand("export", "Write VTK output from a saved state"), exp);

  std::string verifyName;
  std::string verifyLogLevel = "info";
  CLI::App* verify = app.add_subcommand("verify", "Solve built-in analytic cases and compare");
  verify->add_option("name", verifyName,
                     "magnetized_cylinder | current_wire | permeable_cylinder (default: all)");
  verify->add_option("--log-level", verifyLogLevel, "debug | info | warning | error | quiet");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  return map_exceptions([&]() -> int {
    if (app.got_subcommand("check")) {
      set_log_level(parse_log_level(check.logLevel));
      return cmd_check(check);
    }
    if (app.got_subcommand("solve")) {
      set_log_level(parse_log_level(solve.logLevel));
      return cmd_solve(solve);
    }
    if (app.got_subcommand("sample")) {
      set_log_level(parse_log_level(sample.logLevel));
      return cmd_sample(sample);
    }
    if (app.got_subcommand("export")) {
      set_log_level(parse_log_level(exp.logLevel));
      return cmd_export(exp);
    }
    set_log_level(parse_log_level(verifyLogLevel));
    return cmd_verify(verifyName);
  });
}
