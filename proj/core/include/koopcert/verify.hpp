// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "koopcert/error_budget.hpp"
#include "koopcert/koopman_model.hpp"
#include "koopcert/lmi.hpp"

namespace koopcert {

/// Self-contained, re-checkable record of the transfer guarantee: the
/// strict-dissipativity residual of the final model plus the threshold
/// checks on (rho, nu) recomputed from the final |C|, |D| (not the slacks).
struct DissipativityCertificate {
  // supply echo
  double q = 0.0;
  double s = 0.0;
  double r = 0.0;
  double eta = 0.0;
  double tau = 0.0;
  // certified point
  double rho_bar = 0.0;
  double nu_bar = 0.0;
  double c_norm = 0.0;
  double d_norm = 0.0;
  // thresholds (conservative variant governs validity; the display variant
  // of the rho bound is logged next to it)
  double rho_min = 0.0;
  double nu_min = 0.0;
  double rho_min_display = 0.0;
  // Eq. (9) feasibility: smallest eigenvalue of the negated block
  double lmi_residual = 0.0;
  double p_min_eig = 0.0;
  double tol = 1e-8;
  bool transfer_valid = false;
  std::string failing_clause;  // empty when valid
  std::string region;          // "|x| >= eta"
  std::string lipschitz_provenance;
  std::string delta_x_convention;
  // budget echo so the certificate re-checks from its serialized form
  ErrorBudget budget;

  void save(const std::filesystem::path& path) const;
  static DissipativityCertificate load(const std::filesystem::path& path);
};

/// Evaluates Eq.-(9) feasibility of (A,B,C,D,P,rho,nu) and the transfer
/// thresholds from the final matrices. Failure is encoded in
/// transfer_valid=false with the failing clause named, never thrown.
DissipativityCertificate certify(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const Eigen::MatrixXd& c, const Eigen::MatrixXd& d,
                                 const Eigen::MatrixXd& p, double rho, double nu,
                                 const QsrSupply& qsr, const ErrorBudget& budget,
                                 double tol = 1e-8);

struct DissipationViolationReport {
  long checked_steps = 0;
  long violations = 0;
  double max_violation = 0.0;  // max positive excess beyond the tolerance
  std::vector<double> margins;  // per-step rhs - lhs of the first trajectory
};

/// Checks V(z+) - V(z) <= w(y~, u) - rho|z|^2 - nu|u|^2 along lifted
/// trajectories (V = z'Pz). An Eq.-(9)-feasible model admits no violations
/// for any z, u.
DissipationViolationReport empirical_dissipation_check(
    const KoopmanModel& model, const Eigen::MatrixXd& p, double rho, double nu,
    const QsrSupply& qsr, const std::vector<LiftedRollout>& rollouts,
    const std::vector<Eigen::MatrixXd>& input_sequences, double tol = 1e-8);

struct PerturbationReport {
  // parameter-space distances |A - A_ini|_F, ...
  double a_dist = 0.0;
  double b_dist = 0.0;
  double c_dist = 0.0;
  double d_dist = 0.0;
  // objective-space distances |X - P A_ini|_F, |Y - P B_ini|_F
  double x_obj_dist = 0.0;
  double y_obj_dist = 0.0;
};

PerturbationReport perturbation_report(const Eigen::MatrixXd& a_ini,
                                       const Eigen::MatrixXd& b_ini,
                                       const Eigen::MatrixXd& c_ini,
                                       const Eigen::MatrixXd& d_ini,
                                       const Eigen::MatrixXd& a_fin,
                                       const Eigen::MatrixXd& b_fin,
                                       const Eigen::MatrixXd& c_fin,
                                       const Eigen::MatrixXd& d_fin,
                                       const Eigen::MatrixXd& p,
                                       const Eigen::MatrixXd& x_bar,
                                       const Eigen::MatrixXd& y_bar);

}  // namespace koopcert
