#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "wasb/manifest.hpp"

namespace {

void add_common(CLI::App* app, wasb::cli::CommonOptions& o, bool with_grid) {
  app->add_option("--config", o.config, "Config file or manifest");
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--threads", o.threads, "Worker threads (default: WASB_THREADS, else all cores)")
      ->check(CLI::NonNegativeNumber);
  if (with_grid) {
    app->add_option("--grid", o.grid, "Grid size")->check(CLI::IsMember({"small", "full"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weakly asymmetric stochastic Burgers: simulation and verification"};
  app.set_version_flag("--version", std::string(wasb::code_version()));
  app.require_subcommand(1);

  wasb::cli::CommonOptions common;
  wasb::cli::VerifyOptions verify;
  std::string coefficients;
  int nmax = 6;
  std::vector<std::string> files;

  auto* simulate = app.add_subcommand("simulate", "Simulate an ensemble and write trajectory files");
  add_common(simulate, common, false);

  auto* hermite = app.add_subcommand("hermite", "Print Hermite coefficients c_n of F as CSV");
  hermite->add_option("--F", coefficients, "Polynomial coefficients a0,a1,...")->required();
  hermite->add_option("--nmax", nmax, "Highest order");
  hermite->add_option("--out", common.out, "Also write hermite.csv and a manifest here");

  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite; exit 0 iff all gates pass");
  verify_cmd->add_option("suite", verify.suite,
                         "poisson | antisym | stationarity | qv | bg-scaling | kernel");
  add_common(verify_cmd, common, true);
  verify_cmd->add_option("--noise-scale", verify.noise_variance_scale,
                         "Negative control: multiply the noise variance");
  verify_cmd->add_option("--c2", verify.c2, "Negative control: replace c_2 in variant B");

  auto* qv = app.add_subcommand("qv", "Quadratic variations of the martingale and antisymmetric paths");
  add_common(qv, common, false);

  auto* bg = app.add_subcommand("bg-scaling", "Boltzmann-Gibbs residual scaling study");
  add_common(bg, common, true);
  bg->add_option("--c2", verify.c2, "Negative control: replace c_2 in variant B");

  auto* report = app.add_subcommand("report", "Summarize report CSVs; exit 0 iff every row passes");
  report->add_option("files", files, "Report CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wasb::cli::kUsage;
  }

  using namespace wasb::cli;
  if (*simulate) return cmd_simulate(common, std::cout, std::cerr);
  if (*hermite) return cmd_hermite(common, coefficients, nmax, std::cout, std::cerr);
  if (*verify_cmd) return cmd_verify(common, verify, std::cout, std::cerr);
  if (*qv) return cmd_qv(common, std::cout, std::cerr);
  if (*bg) return cmd_bg_scaling(common, verify, std::cout, std::cerr);
  if (*report) return cmd_report(files, std::cout, std::cerr);
  return kUsage;
}
