// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>

#include "koopcert/errors.hpp"
#include "koopcert/pipeline.hpp"

namespace {

using namespace koopcert;

struct CommonArgs {
  std::string config_path;
  std::string scale = "desk";
  std::string out_dir;
  long seed = -1;
  double tol_feas = -1.0;
};

PipelineConfig resolve_config(const CommonArgs& args) {
  PipelineConfig cfg;
  if (!args.config_path.empty()) {
    cfg = PipelineConfig::from_manifest(Manifest::load(args.config_path));
  } else if (args.scale == "desk") {
    cfg = desk_config();
  } else if (args.scale == "paper") {
    cfg = paper_config();
  } else {
    throw koopcert::ConfigError("--scale must be 'desk' or 'paper'");
  }
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (args.tol_feas > 0.0) cfg.tol_feas = args.tol_feas;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (key=value)");
  cmd->add_option("--scale", args.scale, "shipped configuration: desk or paper");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--out", args.out_dir, "run directory override");
  cmd->add_option("--tol-feas", args.tol_feas, "feasibility tolerance override");
}

int report_certificate(const PipelineResult& result) {
  const auto& cert = result.certificate;
  std::cout << "run directory: " << result.run_dir.string() << "\n";
  std::cout << "transfer_valid=" << (cert.transfer_valid ? "true" : "false") << "\n";
  if (!cert.transfer_valid) {
    std::cout << "failing clause: " << cert.failing_clause << "\n";
  }
  std::cout << "rho_bar=" << cert.rho_bar << " rho_min=" << cert.rho_min
            << "  nu_bar=" << cert.nu_bar << " nu_min=" << cert.nu_min
            << "  lmi_residual=" << cert.lmi_residual << "\n";
  return cert.transfer_valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"koopcert: dissipativity-certified neural Koopman identification"};
  app.require_subcommand(1);

  CommonArgs args;

  auto* cmd_simulate = app.add_subcommand("simulate", "generate the trajectory datasets");
  add_common(cmd_simulate, args);
  auto* cmd_train = app.add_subcommand("train", "fit the unconstrained Koopman model");
  add_common(cmd_train, args);
  auto* cmd_evaluate =
      app.add_subcommand("evaluate", "measure model errors on the evaluation grid");
  add_common(cmd_evaluate, args);
  auto* cmd_lipschitz =
      app.add_subcommand("lipschitz", "bound network Lipschitz constants, build the budget");
  add_common(cmd_lipschitz, args);
  auto* cmd_perturb =
      app.add_subcommand("perturb", "solve the minimal-perturbation program");
  add_common(cmd_perturb, args);
  auto* cmd_verify = app.add_subcommand("verify", "certify and run the empirical checks");
  add_common(cmd_verify, args);
  auto* cmd_repro = app.add_subcommand(
      "reproduce-duffing", "full two-stage pipeline on the Duffing case study");
  add_common(cmd_repro, args);
  auto* cmd_plot = app.add_subcommand("plot", "emit the SVG figures for a finished run");
  add_common(cmd_plot, args);
  auto* cmd_lint =
      app.add_subcommand("manifest-lint", "audit certificate provenance for a run");
  add_common(cmd_lint, args);

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = resolve_config(args);
    const auto dir = ensure_run_dir(cfg);

    if (cmd_simulate->parsed()) {
      stage_simulate(cfg, dir);
    } else if (cmd_train->parsed()) {
      stage_simulate(cfg, dir);
      stage_train(cfg, dir);
    } else if (cmd_evaluate->parsed()) {
      stage_evaluate(cfg, dir);
    } else if (cmd_lipschitz->parsed()) {
      stage_lipschitz(cfg, dir);
    } else if (cmd_perturb->parsed()) {
      stage_perturb(cfg, dir);
    } else if (cmd_verify->parsed()) {
      stage_verify(cfg, dir);
      PipelineResult result;
      result.run_dir = dir;
      result.certificate = DissipativityCertificate::load(dir / "cert" / "certificate.txt");
      result.transfer_valid = result.certificate.transfer_valid;
      return report_certificate(result);
    } else if (cmd_repro->parsed()) {
      return report_certificate(run_pipeline(cfg));
    } else if (cmd_plot->parsed()) {
      emit_plots(dir);
    } else if (cmd_lint->parsed()) {
      const auto problems = manifest_lint(dir);
      for (const auto& p : problems) std::cout << "lint: " << p << "\n";
      std::cout << (problems.empty() ? "manifest clean" : "manifest has problems") << "\n";
      return problems.empty() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
