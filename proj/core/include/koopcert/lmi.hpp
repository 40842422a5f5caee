// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "koopcert/error_budget.hpp"
#include "koopcert/matrix_ops.hpp"

namespace koopcert {

/// Supply-rate data w(y,u) = y'Qy + 2y'Su + u'Ru with Q <= 0, plus the
/// guarantee-region radius eta and the rho/nu trade-off parameter tau.
class QsrSupply {
 public:
  enum class Regime { NegDef, Zero };

  QsrSupply(const Eigen::MatrixXd& q, const Eigen::MatrixXd& s, const Eigen::MatrixXd& r,
            double eta, double tau, double regime_tol = 1e-10);

  /// SISO convenience: scalar (q, s, r).
  static QsrSupply siso(double q, double s, double r, double eta, double tau);

  const Eigen::MatrixXd& Q() const { return q_; }
  const Eigen::MatrixXd& S() const { return s_; }
  const Eigen::MatrixXd& R() const { return r_; }
  double eta() const { return eta_; }
  double tau() const { return tau_; }
  Regime regime() const { return regime_; }
  int p() const { return static_cast<int>(q_.rows()); }
  int m() const { return static_cast<int>(r_.rows()); }
  double q_norm() const { return q_norm_; }
  double s_norm() const { return s_norm_; }

  /// Supply rate value for one sample.
  double supply(const Eigen::VectorXd& y, const Eigen::VectorXd& u) const;

 private:
  Eigen::MatrixXd q_, s_, r_;
  double eta_, tau_;
  double q_norm_, s_norm_;
  Regime regime_;
};

/// The strict-dissipativity block
///   [ A'PA - P - C'QC + rho I   A'PB - C'QD - C'S            ]
///   [ (sym)                     B'PB - D'QD - D'S - S'D - R + nu I ]
/// which must be <= 0 for the lifted model to be strictly dissipative.
SymMatrix strict_lmi_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& c, const Eigen::MatrixXd& d,
                            const Eigen::MatrixXd& p, const QsrSupply& qsr, double rho,
                            double nu);

/// Which coefficient multiplies the |phi(0)| cross term in the rho
/// threshold: the theorem display carries factor 1, the appendix derivation
/// factor 2. The conservative (appendix) variant is the default everywhere;
/// both values are always reported.
enum class HVariant { Appendix, Display };

struct Thresholds {
  double rho_min = 0.0;
  double nu_min = 0.0;
};

/// Lower bounds on (rho, nu) under which strict dissipativity of the lifted
/// model transfers to the original system on |x| >= eta.
Thresholds theorem1_thresholds(double c_norm, double d_norm, const ErrorBudget& budget,
                               const QsrSupply& qsr, HVariant variant = HVariant::Appendix);

/// Decision-variable layout of the perturbation program:
/// P (symmetric, upper triangle), X, Y, C, D row-major, then the scalars
/// rho, nu, N_C, N_D.
struct VarLayout {
  int N = 0;
  int m = 0;
  int p = 0;

  long p_var(int i, int j) const;  // i <= j
  long x_var(int i, int j) const;
  long y_var(int i, int k) const;
  long c_var(int l, int i) const;
  long d_var(int l, int k) const;
  long rho_var() const;
  long nu_var() const;
  long nc_var() const;
  long nd_var() const;
  long count() const;

  Eigen::MatrixXd extract_p(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd extract_x(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd extract_y(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd extract_c(const Eigen::VectorXd& v) const;
  Eigen::MatrixXd extract_d(const Eigen::VectorXd& v) const;
};

/// One PSD constraint F(v) = F0 + sum_i v_i * G_i >= 0 with sparse G_i.
/// Entries list every nonzero position (both (r,c) and (c,r) for
/// off-diagonal terms) so F(v) is symmetric by construction.
struct AffineBlock {
  struct Entry {
    long var;
    int row;
    int col;
    double coef;
  };

  std::string name;
  int size = 0;
  Eigen::MatrixXd constant;
  std::vector<Entry> entries;
  double shift = 0.0;  // strictness margin folded into `constant`

  Eigen::MatrixXd eval(const Eigen::VectorXd& v) const;
  /// Residual of the un-shifted inequality (paper form F >= 0).
  double paper_residual(const Eigen::VectorXd& v) const;
};

struct LmiSystem {
  VarLayout layout;
  std::vector<AffineBlock> blocks;
  QsrSupply::Regime regime = QsrSupply::Regime::NegDef;

  std::string dump() const;  // diagnostic text, not a stable format
};

struct LmiOptions {
  double eps_strict = 1e-9;
  HVariant h_variant = HVariant::Appendix;
};

/// Builds the perturbation LMI system for the given supply regime. SISO
/// only (p = m = 1): the threshold blocks mix scalar norms and inverses
/// that the source construction only instantiates for scalar supplies.
LmiSystem build_lmi_system(const QsrSupply& qsr, const ErrorBudget& budget, int lift_dim,
                           const LmiOptions& opts = {});

}  // namespace koopcert
