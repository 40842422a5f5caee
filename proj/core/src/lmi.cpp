// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/lmi.hpp"

#include <cmath>
#include <sstream>

#include "koopcert/errors.hpp"

namespace koopcert {

QsrSupply::QsrSupply(const Eigen::MatrixXd& q, const Eigen::MatrixXd& s,
                     const Eigen::MatrixXd& r, double eta, double tau, double regime_tol)
    : q_(q), s_(s), r_(r), eta_(eta), tau_(tau) {
  if (q.rows() != q.cols() || r.rows() != r.cols()) {
    throw InvalidInputError("QsrSupply: Q and R must be square");
  }
  if (s.rows() != q.rows() || s.cols() != r.rows()) {
    throw InvalidInputError("QsrSupply: S must be p x m");
  }
  if (eta <= 0.0) throw InvalidInputError("QsrSupply: eta must be positive");
  if (tau <= 0.0) throw InvalidInputError("QsrSupply: tau must be positive");

  const Eigen::VectorXd ev = eigenvalues(SymMatrix(q, 1e-9));
  if (ev.maxCoeff() > regime_tol) {
    throw InvalidInputError("QsrSupply: Q must be negative semidefinite");
  }
  if (ev.maxCoeff() < -regime_tol) {
    regime_ = Regime::NegDef;
  } else if (ev.minCoeff() >= -regime_tol) {
    regime_ = Regime::Zero;
    q_.setZero();  // treat round-off level Q as exactly zero
  } else {
    throw InvalidInputError(
        "QsrSupply: mixed semidefinite Q (some eigenvalues zero, some negative) is not "
        "supported");
  }
  q_norm_ = spectral_norm(q_);
  s_norm_ = spectral_norm(s_);
}

QsrSupply QsrSupply::siso(double q, double s, double r, double eta, double tau) {
  Eigen::MatrixXd qm(1, 1), sm(1, 1), rm(1, 1);
  qm << q;
  sm << s;
  rm << r;
  return QsrSupply(qm, sm, rm, eta, tau);
}

double QsrSupply::supply(const Eigen::VectorXd& y, const Eigen::VectorXd& u) const {
  return (y.dot(q_ * y)) + 2.0 * y.dot(s_ * u) + u.dot(r_ * u);
}

SymMatrix strict_lmi_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const Eigen::MatrixXd& c, const Eigen::MatrixXd& d,
                            const Eigen::MatrixXd& p, const QsrSupply& qsr, double rho,
                            double nu) {
  const long N = a.rows();
  const long m = b.cols();
  if (a.cols() != N || b.rows() != N || c.cols() != N || d.cols() != m ||
      d.rows() != c.rows() || p.rows() != N || p.cols() != N) {
    throw InvalidInputError("strict_lmi_matrix: dimension mismatch");
  }
  if (qsr.p() != c.rows() || qsr.m() != m) {
    throw InvalidInputError("strict_lmi_matrix: supply dimensions do not match C, D");
  }
  const Eigen::MatrixXd& q = qsr.Q();
  const Eigen::MatrixXd& s = qsr.S();
  const Eigen::MatrixXd& r = qsr.R();

  Eigen::MatrixXd block(N + m, N + m);
  block.topLeftCorner(N, N) = a.transpose() * p * a - p - c.transpose() * q * c +
                              rho * Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd off =
      a.transpose() * p * b - c.transpose() * q * d - c.transpose() * s;
  block.topRightCorner(N, m) = off;
  block.bottomLeftCorner(m, N) = off.transpose();
  block.bottomRightCorner(m, m) = b.transpose() * p * b - d.transpose() * q * d -
                                  d.transpose() * s - s.transpose() * d - r +
                                  nu * Eigen::MatrixXd::Identity(m, m);
  return SymMatrix(block, 1e-9);
}

Thresholds theorem1_thresholds(double c_norm, double d_norm, const ErrorBudget& budget,
                               const QsrSupply& qsr, HVariant variant) {
  const double margin = budget.margin();
  if (margin <= 0.0) {
    throw ConfigError("theorem1_thresholds: eta - delta_b - |psi(0)| must be positive");
  }
  const double qn = qsr.q_norm();
  const double sn = qsr.s_norm();
  const double tau = qsr.tau();
  const double eta = budget.eta;
  const double dg = budget.delta_g(c_norm);
  const double phi0_factor = variant == HVariant::Appendix ? 2.0 : 1.0;

  // h(C): coefficient of |x|^2 in the supply-error bound, for |x| >= eta.
  const double bracket =
      (dg * dg * (qn + tau + 1.0) + phi0_factor * dg * qn * c_norm * budget.phi0_norm) /
          (eta * eta) +
      2.0 * dg * qn * c_norm * budget.l_phi_x / eta;

  Thresholds t;
  const double lpsi = budget.l_psi_z;
  t.rho_min = lpsi * lpsi / (margin / eta) / (margin / eta) * bracket;
  t.nu_min = qn * qn * d_norm * d_norm + sn * sn / tau;
  return t;
}

long VarLayout::p_var(int i, int j) const {
  if (i > j) std::swap(i, j);
  return static_cast<long>(i) * N - static_cast<long>(i) * (i - 1) / 2 + (j - i);
}
long VarLayout::x_var(int i, int j) const {
  return static_cast<long>(N) * (N + 1) / 2 + static_cast<long>(i) * N + j;
}
long VarLayout::y_var(int i, int k) const {
  return x_var(N - 1, N - 1) + 1 + static_cast<long>(i) * m + k;
}
long VarLayout::c_var(int l, int i) const {
  return y_var(N - 1, m - 1) + 1 + static_cast<long>(l) * N + i;
}
long VarLayout::d_var(int l, int k) const {
  return c_var(p - 1, N - 1) + 1 + static_cast<long>(l) * m + k;
}
long VarLayout::rho_var() const { return d_var(p - 1, m - 1) + 1; }
long VarLayout::nu_var() const { return rho_var() + 1; }
long VarLayout::nc_var() const { return rho_var() + 2; }
long VarLayout::nd_var() const { return rho_var() + 3; }
long VarLayout::count() const { return rho_var() + 4; }

Eigen::MatrixXd VarLayout::extract_p(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd out(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) out(i, j) = out(j, i) = v[p_var(i, j)];
  }
  return out;
}
Eigen::MatrixXd VarLayout::extract_x(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd out(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) out(i, j) = v[x_var(i, j)];
  }
  return out;
}
Eigen::MatrixXd VarLayout::extract_y(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd out(N, m);
  for (int i = 0; i < N; ++i) {
    for (int k = 0; k < m; ++k) out(i, k) = v[y_var(i, k)];
  }
  return out;
}
Eigen::MatrixXd VarLayout::extract_c(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd out(p, N);
  for (int l = 0; l < p; ++l) {
    for (int i = 0; i < N; ++i) out(l, i) = v[c_var(l, i)];
  }
  return out;
}
Eigen::MatrixXd VarLayout::extract_d(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd out(p, m);
  for (int l = 0; l < p; ++l) {
    for (int k = 0; k < m; ++k) out(l, k) = v[d_var(l, k)];
  }
  return out;
}

Eigen::MatrixXd AffineBlock::eval(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd f = constant;
  for (const auto& e : entries) f(e.row, e.col) += e.coef * v[e.var];
  return f;
}

double AffineBlock::paper_residual(const Eigen::VectorXd& v) const {
  return min_eigenvalue(SymMatrix(eval(v), 1e-9)) + shift;
}

std::string LmiSystem::dump() const {
  std::ostringstream out;
  out << "variables=" << layout.count() << " (N=" << layout.N << " m=" << layout.m
      << " p=" << layout.p << ")\n";
  for (const auto& b : blocks) {
    out << "block " << b.name << " size=" << b.size << " entries=" << b.entries.size()
        << " shift=" << b.shift << "\n";
    out << "  constant_norm=" << b.constant.norm() << "\n";
  }
  return out.str();
}

namespace {

// Adds coefficient at (r, c), mirroring off-diagonal positions.
void add_entry(AffineBlock& blk, long var, int r, int c, double coef) {
  blk.entries.push_back({var, r, c, coef});
  if (r != c) blk.entries.push_back({var, c, r, coef});
}

AffineBlock dissipativity_block(const QsrSupply& qsr, const VarLayout& lay,
                                double eps_strict) {
  const int N = lay.N;
  const bool negdef = qsr.regime() == QsrSupply::Regime::NegDef;
  const int size = negdef ? 2 * N + 2 : 2 * N + 1;
  const int in_row = N;          // the single input row (m = 1)
  const int out_row = N + 1;     // the -Q^{-1} row, Q < 0 only
  const int x_base = negdef ? N + 2 : N + 1;

  AffineBlock blk;
  blk.name = negdef ? "dissipativity-q-negdef" : "dissipativity-q-zero";
  blk.size = size;
  blk.shift = eps_strict;
  blk.constant = Eigen::MatrixXd::Zero(size, size);
  blk.constant.diagonal().array() -= eps_strict;

  const double s = qsr.S()(0, 0);
  const double r = qsr.R()(0, 0);

  // (1,1): P - rho I ; (4,4): P
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      add_entry(blk, lay.p_var(i, j), i, j, 1.0);
      add_entry(blk, lay.p_var(i, j), x_base + i, x_base + j, 1.0);
    }
    blk.entries.push_back({lay.rho_var(), i, i, -1.0});
  }
  // (1,2): C'S ; (1,3): C' (Q < 0)
  for (int i = 0; i < N; ++i) {
    add_entry(blk, lay.c_var(0, i), i, in_row, s);
    if (negdef) add_entry(blk, lay.c_var(0, i), i, out_row, 1.0);
  }
  // (1,4): X'
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      add_entry(blk, lay.x_var(j, i), i, x_base + j, 1.0);
    }
  }
  // (2,2): D'S + S'D + R - nu I
  blk.constant(in_row, in_row) += r;
  blk.entries.push_back({lay.d_var(0, 0), in_row, in_row, 2.0 * s});
  blk.entries.push_back({lay.nu_var(), in_row, in_row, -1.0});
  // (2,3): D' ; (2,4): Y'
  if (negdef) add_entry(blk, lay.d_var(0, 0), in_row, out_row, 1.0);
  for (int j = 0; j < N; ++j) {
    add_entry(blk, lay.y_var(j, 0), in_row, x_base + j, 1.0);
  }
  // (3,3): -Q^{-1}
  if (negdef) blk.constant(out_row, out_row) += -1.0 / qsr.Q()(0, 0);
  return blk;
}

AffineBlock rho_threshold_block(const QsrSupply& qsr, const ErrorBudget& budget,
                                const VarLayout& lay, const LmiOptions& opts) {
  const double margin2 = budget.margin() * budget.margin();
  const double lpsi2 = budget.l_psi_z * budget.l_psi_z;
  const double qn = qsr.q_norm();
  const double tau = qsr.tau();
  const double d1 = budget.delta_1;
  const double d2 = budget.delta_2;
  const double c_eff = opts.h_variant == HVariant::Appendix
                           ? budget.c_phi + budget.phi0_norm
                           : budget.c_phi;

  AffineBlock blk;
  blk.shift = opts.eps_strict;
  if (qsr.regime() == QsrSupply::Regime::Zero) {
    blk.name = "rho-threshold-q-zero";
    blk.size = 2;
    blk.constant = Eigen::MatrixXd::Zero(2, 2);
    blk.constant(0, 1) = blk.constant(1, 0) = d1;
    blk.constant(1, 1) = margin2 / (lpsi2 * (tau + 1.0));
    blk.constant.diagonal().array() -= opts.eps_strict;
    blk.entries.push_back({lay.rho_var(), 0, 0, 1.0});
    add_entry(blk, lay.nc_var(), 0, 1, d2);
    return blk;
  }

  if (d2 <= 0.0) {
    // delta_2 -> 0 limit of the threshold: a single affine inequality
    // rho >= lpsi^2/margin^2 * (d1^2 (|Q|+tau+1) + |Q| c_eff d1 N_C).
    blk.name = "rho-threshold-q-negdef-limit";
    blk.size = 1;
    blk.constant = Eigen::MatrixXd::Zero(1, 1);
    blk.constant(0, 0) = -lpsi2 * d1 * d1 * (qn + tau + 1.0) / margin2 - opts.eps_strict;
    blk.entries.push_back({lay.rho_var(), 0, 0, 1.0});
    blk.entries.push_back({lay.nc_var(), 0, 0, -lpsi2 * qn * c_eff * d1 / margin2});
    return blk;
  }

  blk.name = "rho-threshold-q-negdef";
  blk.size = 2;
  blk.constant = Eigen::MatrixXd::Zero(2, 2);
  const double k1 = lpsi2 * c_eff * qn * d1 / (margin2 * d2);
  blk.constant(0, 0) = k1 * d1;
  blk.constant(0, 1) = blk.constant(1, 0) = d1;
  blk.constant(1, 1) = margin2 * d2 / (lpsi2 * ((qn + tau + 1.0) * d2 + qn * c_eff));
  blk.constant.diagonal().array() -= opts.eps_strict;
  blk.entries.push_back({lay.rho_var(), 0, 0, 1.0});
  blk.entries.push_back({lay.nc_var(), 0, 0, k1 * d2});
  add_entry(blk, lay.nc_var(), 0, 1, d2);
  return blk;
}

AffineBlock nu_threshold_block(const QsrSupply& qsr, const VarLayout& lay,
                               double eps_strict) {
  AffineBlock blk;
  blk.shift = eps_strict;
  const double sn = qsr.s_norm();
  const double tau = qsr.tau();
  if (qsr.regime() == QsrSupply::Regime::Zero) {
    blk.name = "nu-threshold-q-zero";
    blk.size = 1;
    blk.constant = Eigen::MatrixXd::Zero(1, 1);
    blk.constant(0, 0) = -sn * sn / tau - eps_strict;
    blk.entries.push_back({lay.nu_var(), 0, 0, 1.0});
    return blk;
  }
  const double qn = qsr.q_norm();
  blk.name = "nu-threshold-q-negdef";
  blk.size = 2;
  blk.constant = Eigen::MatrixXd::Zero(2, 2);
  blk.constant(0, 0) = -sn * sn / tau;
  // The Schur corner must encode nu - |S|^2/tau >= |Q|^2 N_D^2; the 1/|Q|
  // corner reads that way only for |Q| <= 1, so the sound corner is the
  // smaller of 1/|Q| and 1/|Q|^2.
  blk.constant(1, 1) = std::min(1.0 / qn, 1.0 / (qn * qn));
  blk.constant.diagonal().array() -= eps_strict;
  blk.entries.push_back({lay.nu_var(), 0, 0, 1.0});
  add_entry(blk, lay.nd_var(), 0, 1, 1.0);
  return blk;
}

AffineBlock norm_block(const std::string& name, const VarLayout& lay, long slack_var,
                       bool for_c, double eps_strict) {
  // [[slack * I_p, M], [M', slack * I_cols]] >= 0  <=>  |M| <= slack.
  const int rows = lay.p;
  const int cols = for_c ? lay.N : lay.m;
  AffineBlock blk;
  blk.name = name;
  blk.size = rows + cols;
  blk.shift = eps_strict;
  blk.constant = Eigen::MatrixXd::Zero(blk.size, blk.size);
  blk.constant.diagonal().array() -= eps_strict;
  for (int i = 0; i < rows + cols; ++i) blk.entries.push_back({slack_var, i, i, 1.0});
  for (int l = 0; l < rows; ++l) {
    for (int j = 0; j < cols; ++j) {
      const long var = for_c ? lay.c_var(l, j) : lay.d_var(l, j);
      add_entry(blk, var, l, rows + j, 1.0);
    }
  }
  return blk;
}

}  // namespace

LmiSystem build_lmi_system(const QsrSupply& qsr, const ErrorBudget& budget, int lift_dim,
                           const LmiOptions& opts) {
  if (qsr.p() != 1 || qsr.m() != 1) {
    throw InvalidInputError(
        "build_lmi_system: the perturbation path supports scalar (SISO) supplies only");
  }
  if (budget.margin() <= 0.0) {
    throw ConfigError("build_lmi_system: error budget margin must be positive");
  }
  LmiSystem sys;
  sys.layout = VarLayout{lift_dim, 1, 1};
  sys.regime = qsr.regime();
  sys.blocks.push_back(dissipativity_block(qsr, sys.layout, opts.eps_strict));
  sys.blocks.push_back(rho_threshold_block(qsr, budget, sys.layout, opts));
  sys.blocks.push_back(nu_threshold_block(qsr, sys.layout, opts.eps_strict));
  sys.blocks.push_back(
      norm_block("norm-C", sys.layout, sys.layout.nc_var(), true, opts.eps_strict));
  if (qsr.regime() == QsrSupply::Regime::NegDef) {
    sys.blocks.push_back(
        norm_block("norm-D", sys.layout, sys.layout.nd_var(), false, opts.eps_strict));
  }
  return sys;
}

}  // namespace koopcert
