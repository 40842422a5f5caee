// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

namespace koopcert {

/// Dense real symmetric matrix. Construction symmetrizes round-off level
/// asymmetry (averaging M and M'); asymmetry beyond the tolerance is
/// rejected as an input error.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m, double asym_tol = 1e-12);

  static SymMatrix identity(int dim);
  static SymMatrix zero(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }

 private:
  Eigen::MatrixXd mat_;
};

/// Smallest eigenvalue of a symmetric matrix (tridiagonalization + implicit
/// QL via Eigen's self-adjoint solver; deterministic for fixed input).
double min_eigenvalue(const SymMatrix& m);

/// Largest eigenvalue, same machinery.
double max_eigenvalue(const SymMatrix& m);

/// All eigenvalues, ascending.
Eigen::VectorXd eigenvalues(const SymMatrix& m);

/// Largest singular value of a rectangular matrix.
double spectral_norm(const Eigen::MatrixXd& m);

/// True iff min_eigenvalue(m) >= -tol. tol must be >= 0.
bool is_psd(const SymMatrix& m, double tol);

/// Solves P x = b for symmetric positive definite P via Cholesky.
/// Throws InvalidInputError if P is not positive definite.
Eigen::MatrixXd spd_solve(const Eigen::MatrixXd& p, const Eigen::MatrixXd& b);

/// A - B C^{-1} B' for the block matrix [[A, B], [B', C]] with C > 0.
SymMatrix schur_complement(const SymMatrix& a, const Eigen::MatrixXd& b, const SymMatrix& c);

/// Condition number estimate of a symmetric positive definite matrix
/// (ratio of extreme eigenvalues).
double spd_condition(const SymMatrix& p);

bool all_finite(const Eigen::MatrixXd& m);

}  // namespace koopcert
