// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/matrix_ops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "koopcert/errors.hpp"

namespace koopcert {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

SymMatrix::SymMatrix(const Eigen::MatrixXd& m, double asym_tol) {
  if (m.rows() != m.cols()) {
    throw InvalidInputError("SymMatrix: matrix is not square");
  }
  if (!m.allFinite()) {
    throw InvalidInputError("SymMatrix: non-finite entries");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > asym_tol * scale) {
    throw InvalidInputError("SymMatrix: asymmetry " + std::to_string(asym) +
                            " exceeds tolerance");
  }
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::zero(int dim) { return SymMatrix(Eigen::MatrixXd::Zero(dim, dim)); }

Eigen::VectorXd eigenvalues(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw InvalidInputError("eigenvalues: self-adjoint solver did not converge");
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const SymMatrix& m) { return eigenvalues(m).minCoeff(); }

double max_eigenvalue(const SymMatrix& m) { return eigenvalues(m).maxCoeff(); }

double spectral_norm(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) {
    throw InvalidInputError("spectral_norm: non-finite entries");
  }
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

bool is_psd(const SymMatrix& m, double tol) {
  if (tol < 0.0) {
    throw InvalidInputError("is_psd: tolerance must be non-negative");
  }
  return min_eigenvalue(m) >= -tol;
}

Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& p, const Eigen::MatrixXd& b) {
  if (p.rows() != p.cols() || p.rows() != b.rows()) {
    throw InvalidInputError("spd_solve: dimension mismatch");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (p + p.transpose()));
  if (llt.info() != Eigen::Success) {
    throw InvalidInputError("spd_solve: matrix is not positive definite");
  }
  return llt.solve(b);
}

SymMatrix schur_complement(const SymMatrix& a, const Eigen::MatrixXd& b, const SymMatrix& c) {
  if (b.rows() != a.dim() || b.cols() != c.dim()) {
    throw InvalidInputError("schur_complement: dimension mismatch");
  }
  const Eigen::MatrixXd cinv_bt = spd_solve(c.matrix(), b.transpose());
  // The product carries round-off asymmetry; symmetrize with a loose gate.
  return SymMatrix(a.matrix() - b * cinv_bt, 1e-9);
}

double spd_condition(const SymMatrix& p) {
  const Eigen::VectorXd ev = eigenvalues(p);
  const double lo = ev.minCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return ev.maxCoeff() / lo;
}

}  // namespace koopcert
