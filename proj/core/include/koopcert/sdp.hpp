// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "koopcert/lmi.hpp"

namespace koopcert {

/// Variable bounds that keep the feasible set compact (the source program
/// leaves it unbounded): caps on rho/nu and the norm slacks, a definiteness
/// floor and a trace cap on P.
struct SdpBounds {
  double rho_nu_cap = 1e6;
  double slack_cap = 1e6;
  double p_min = 1e-6;
  double p_trace_cap = 1e6;
};

/// Minimal-perturbation program: convex quadratic objective
///   lambda_A |X - P A_ini|_F^2 + lambda_B |Y - P B_ini|_F^2
/// + lambda_C |C - C_ini|_F^2  + lambda_D |D - D_ini|_F^2
/// over the LMI system. The first two terms couple P with X and Y but stay
/// jointly convex quadratic since the anchors are constants.
struct SdpProblem {
  LmiSystem lmi;
  double lambda_a = 100.0;
  double lambda_b = 4.0;
  double lambda_c = 1000.0;
  double lambda_d = 100.0;
  Eigen::MatrixXd a_ini, b_ini, c_ini, d_ini;
  SdpBounds bounds;
};

enum class SdpStatus { Optimal, MaxIter, Infeasible };

enum class SdpMethod { Barrier, Projection };

struct SdpOptions {
  SdpMethod method = SdpMethod::Barrier;
  double feas_tol = 1e-8;
  double rel_gap = 1e-6;
  double gap_abs = 1e-7;
  double barrier_mu = 10.0;
  long max_newton = 600;
  long max_inner = 60;
  double phase1_target = 1e-9;
  long projection_max_iter = 50'000;
  double projection_beta = 1.0;
  double projection_tol = 1e-9;
};

struct SdpTraceRow {
  long iter = 0;
  double objective = 0.0;
  double min_residual = 0.0;
  double step_len = 0.0;
  double gap = 0.0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIter;
  Eigen::VectorXd v;
  Eigen::MatrixXd X, Y, C, D, P;
  double rho = 0.0;
  double nu = 0.0;
  double n_c = 0.0;
  double n_d = 0.0;
  double objective = 0.0;
  std::vector<std::pair<std::string, double>> block_residuals;  // paper-form min eigenvalues
  std::string most_violated;  // set when infeasible
  long iterations = 0;
  std::vector<SdpTraceRow> trace;

  double min_block_residual() const;
  void save(const std::filesystem::path& path) const;
  void save_trace_csv(const std::filesystem::path& path) const;
};

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts = {});

/// Objective value of the perturbation program at an arbitrary variable
/// vector (used by oracles and by the solution reporting).
double sdp_objective(const SdpProblem& prob, const Eigen::VectorXd& v);

struct RecoveredModel {
  Eigen::MatrixXd A, B, C, D;
  double p_condition = 0.0;
  bool ill_conditioned = false;  // condition number above 1e8
};

/// A = P^{-1} X, B = P^{-1} Y via Cholesky; C, D taken directly.
/// Requires an optimal solution with P > p_min I.
RecoveredModel recover_model(const SdpSolution& sol, double p_min = 1e-6);

}  // namespace koopcert
