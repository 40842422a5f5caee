// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "koopcert/config.hpp"
#include "koopcert/verify.hpp"

namespace koopcert {

/// Two-stage pipeline over a single run directory:
///   simulate -> train -> evaluate -> lipschitz -> perturb -> verify -> plot
/// Every stage is idempotent: when its artifacts already exist for the same
/// configuration it is skipped, so an interrupted run resumes where it
/// stopped and produces the same certificate as an uninterrupted one.
struct PipelineResult {
  std::filesystem::path run_dir;
  bool transfer_valid = false;
  DissipativityCertificate certificate;
};

PipelineResult run_pipeline(const PipelineConfig& cfg);

// Individual stages, exposed for the CLI subcommands. Each takes the run
// directory prepared by ensure_run_dir.
std::filesystem::path ensure_run_dir(const PipelineConfig& cfg);
void stage_simulate(const PipelineConfig& cfg, const std::filesystem::path& dir);
void stage_train(const PipelineConfig& cfg, const std::filesystem::path& dir);
void stage_evaluate(const PipelineConfig& cfg, const std::filesystem::path& dir);
void stage_lipschitz(const PipelineConfig& cfg, const std::filesystem::path& dir);
void stage_perturb(const PipelineConfig& cfg, const std::filesystem::path& dir);
void stage_verify(const PipelineConfig& cfg, const std::filesystem::path& dir);
void emit_plots(const std::filesystem::path& dir);

/// Audits that every certificate entry traces to a configuration key or a
/// computed artifact. Returns human-readable problems; empty means clean.
std::vector<std::string> manifest_lint(const std::filesystem::path& dir);

}  // namespace koopcert
