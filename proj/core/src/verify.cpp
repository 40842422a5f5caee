// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/verify.hpp"

#include <cmath>

#include "koopcert/errors.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

DissipativityCertificate certify(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                 const Eigen::MatrixXd& c, const Eigen::MatrixXd& d,
                                 const Eigen::MatrixXd& p, double rho, double nu,
                                 const QsrSupply& qsr, const ErrorBudget& budget,
                                 double tol) {
  if (qsr.eta() != budget.eta || qsr.tau() != budget.tau) {
    throw ConfigError("certify: supply (eta, tau) differ from the error budget");
  }

  DissipativityCertificate cert;
  cert.q = qsr.Q()(0, 0);
  cert.s = qsr.S()(0, 0);
  cert.r = qsr.R()(0, 0);
  cert.eta = qsr.eta();
  cert.tau = qsr.tau();
  cert.rho_bar = rho;
  cert.nu_bar = nu;
  cert.tol = tol;
  cert.region = "|x| >= eta";
  cert.lipschitz_provenance = budget.lipschitz_provenance;
  cert.delta_x_convention = budget.delta_x_convention;
  cert.budget = budget;

  cert.c_norm = spectral_norm(c);
  cert.d_norm = spectral_norm(d);

  const SymMatrix block9 = strict_lmi_matrix(a, b, c, d, p, qsr, rho, nu);
  cert.lmi_residual = min_eigenvalue(SymMatrix(-block9.matrix(), 1e-9));
  cert.p_min_eig = min_eigenvalue(SymMatrix(p, 1e-9));

  const Thresholds thr =
      theorem1_thresholds(cert.c_norm, cert.d_norm, budget, qsr, HVariant::Appendix);
  const Thresholds thr_display =
      theorem1_thresholds(cert.c_norm, cert.d_norm, budget, qsr, HVariant::Display);
  cert.rho_min = thr.rho_min;
  cert.nu_min = thr.nu_min;
  cert.rho_min_display = thr_display.rho_min;

  cert.transfer_valid = true;
  if (cert.p_min_eig <= 0.0) {
    cert.transfer_valid = false;
    cert.failing_clause = "P not positive definite";
  } else if (cert.lmi_residual < -tol) {
    cert.transfer_valid = false;
    cert.failing_clause = "strict dissipativity LMI residual";
  } else if (cert.rho_bar < cert.rho_min) {
    cert.transfer_valid = false;
    cert.failing_clause = "rho threshold";
  } else if (cert.nu_bar < cert.nu_min) {
    cert.transfer_valid = false;
    cert.failing_clause = "nu threshold";
  }
  return cert;
}

DissipationViolationReport empirical_dissipation_check(
    const KoopmanModel& model, const Eigen::MatrixXd& p, double rho, double nu,
    const QsrSupply& qsr, const std::vector<LiftedRollout>& rollouts,
    const std::vector<Eigen::MatrixXd>& input_sequences, double tol) {
  if (rollouts.size() != input_sequences.size()) {
    throw InvalidInputError("empirical_dissipation_check: rollouts/inputs size mismatch");
  }
  DissipationViolationReport report;
  for (std::size_t r = 0; r < rollouts.size(); ++r) {
    const Eigen::MatrixXd& z = rollouts[r].lifted;
    const Eigen::MatrixXd& y = rollouts[r].outputs;
    const Eigen::MatrixXd& u = input_sequences[r];
    const bool record = r == 0;
    for (long k = 0; k + 1 < z.cols(); ++k) {
      const Eigen::VectorXd zk = z.col(k);
      const Eigen::VectorXd zk1 = z.col(k + 1);
      const double lhs = zk1.dot(p * zk1) - zk.dot(p * zk);
      const double rhs = qsr.supply(y.col(k), u.col(k)) - rho * zk.squaredNorm() -
                         nu * u.col(k).squaredNorm();
      const double excess = lhs - rhs;
      if (record) report.margins.push_back(rhs - lhs);
      ++report.checked_steps;
      if (excess > tol) {
        ++report.violations;
        report.max_violation = std::max(report.max_violation, excess);
      }
    }
  }
  return report;
}

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
                                       const Eigen::MatrixXd& y_bar) {
  if (a_ini.rows() != a_fin.rows() || a_ini.cols() != a_fin.cols()) {
    throw InvalidInputError("perturbation_report: A dimension mismatch");
  }
  PerturbationReport rep;
  rep.a_dist = (a_fin - a_ini).norm();
  rep.b_dist = (b_fin - b_ini).norm();
  rep.c_dist = (c_fin - c_ini).norm();
  rep.d_dist = (d_fin - d_ini).norm();
  rep.x_obj_dist = (x_bar - p * a_ini).norm();
  rep.y_obj_dist = (y_bar - p * b_ini).norm();
  return rep;
}

void DissipativityCertificate::save(const std::filesystem::path& path) const {
  Manifest m;
  m.set("transfer_valid", transfer_valid);
  m.set("failing_clause", failing_clause);
  m.set("region", region);
  m.set("qsr.q", q);
  m.set("qsr.s", s);
  m.set("qsr.r", r);
  m.set("qsr.eta", eta);
  m.set("qsr.tau", tau);
  m.set("rho_bar", rho_bar);
  m.set("nu_bar", nu_bar);
  m.set("c_norm", c_norm);
  m.set("d_norm", d_norm);
  m.set("rho_min", rho_min);
  m.set("rho_min_display", rho_min_display);
  m.set("nu_min", nu_min);
  m.set("lmi_residual", lmi_residual);
  m.set("p_min_eig", p_min_eig);
  m.set("tol", tol);
  m.set("lipschitz_provenance", lipschitz_provenance);
  m.set("delta_x_convention", delta_x_convention);
  m.set("budget.delta_d", budget.delta_d);
  m.set("budget.delta_x", budget.delta_x);
  m.set("budget.delta_c", budget.delta_c);
  m.set("budget.delta_r", budget.delta_r);
  m.set("budget.l_phi_x", budget.l_phi_x);
  m.set("budget.l_psi_z", budget.l_psi_z);
  m.set("budget.l_psiphi_x", budget.l_psiphi_x);
  m.set("budget.l_g_x", budget.l_g_x);
  m.set("budget.phi0_norm", budget.phi0_norm);
  m.set("budget.psi0_norm", budget.psi0_norm);
  m.set("budget.delta_1", budget.delta_1);
  m.set("budget.delta_2", budget.delta_2);
  m.set("budget.c_phi", budget.c_phi);
  m.set("budget.delta_b", budget.delta_b);
  m.save(path);
}

DissipativityCertificate DissipativityCertificate::load(const std::filesystem::path& path) {
  const Manifest m = Manifest::load(path);
  DissipativityCertificate c;
  c.transfer_valid = m.get_bool("transfer_valid");
  c.failing_clause = m.get("failing_clause");
  c.region = m.get("region");
  c.q = m.get_double("qsr.q");
  c.s = m.get_double("qsr.s");
  c.r = m.get_double("qsr.r");
  c.eta = m.get_double("qsr.eta");
  c.tau = m.get_double("qsr.tau");
  c.rho_bar = m.get_double("rho_bar");
  c.nu_bar = m.get_double("nu_bar");
  c.c_norm = m.get_double("c_norm");
  c.d_norm = m.get_double("d_norm");
  c.rho_min = m.get_double("rho_min");
  c.rho_min_display = m.get_double("rho_min_display");
  c.nu_min = m.get_double("nu_min");
  c.lmi_residual = m.get_double("lmi_residual");
  c.p_min_eig = m.get_double("p_min_eig");
  c.tol = m.get_double("tol");
  c.lipschitz_provenance = m.get("lipschitz_provenance");
  c.delta_x_convention = m.get("delta_x_convention");
  c.budget.delta_d = m.get_double("budget.delta_d");
  c.budget.delta_x = m.get_double("budget.delta_x");
  c.budget.delta_c = m.get_double("budget.delta_c");
  c.budget.delta_r = m.get_double("budget.delta_r");
  c.budget.l_phi_x = m.get_double("budget.l_phi_x");
  c.budget.l_psi_z = m.get_double("budget.l_psi_z");
  c.budget.l_psiphi_x = m.get_double("budget.l_psiphi_x");
  c.budget.l_g_x = m.get_double("budget.l_g_x");
  c.budget.phi0_norm = m.get_double("budget.phi0_norm");
  c.budget.psi0_norm = m.get_double("budget.psi0_norm");
  c.budget.eta = c.eta;
  c.budget.tau = c.tau;
  c.budget.lipschitz_provenance = c.lipschitz_provenance;
  c.budget.delta_x_convention = c.delta_x_convention;
  c.budget = assemble_error_budget(c.budget);
  return c;
}

}  // namespace koopcert
