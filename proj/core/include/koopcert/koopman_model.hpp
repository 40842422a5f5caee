// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "koopcert/mlp.hpp"

namespace koopcert {

/// Learned surrogate: encoder phi (n -> N), decoder psi (N -> n) and the
/// lifted linear dynamics z+ = Az + Bu, y~ = Cz + Du.
struct KoopmanModel {
  MlpNetwork encoder;
  MlpNetwork decoder;
  Eigen::MatrixXd A;  // N x N
  Eigen::MatrixXd B;  // N x m
  Eigen::MatrixXd C;  // p x N
  Eigen::MatrixXd D;  // p x m

  int state_dim() const { return encoder.input_dim(); }
  int lift_dim() const { return encoder.output_dim(); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int output_dim() const { return static_cast<int>(C.rows()); }

  /// Throws InvalidInputError when the dimension chain n -> N -> n is broken
  /// or N <= n.
  void validate() const;

  void save_checkpoint(const std::filesystem::path& path) const;
  static KoopmanModel load_checkpoint(const std::filesystem::path& path);
};

struct LiftedRollout {
  Eigen::MatrixXd decoded_states;  // n x K, psi(z(k))
  Eigen::MatrixXd outputs;         // p x K, C z(k) + D u(k)
  Eigen::MatrixXd lifted;          // N x K
};

/// z(0) = phi(x0); z advances by the linear recursion only (no re-encoding
/// at intermediate steps). Throws DivergenceError if the lift blows up.
LiftedRollout lifted_rollout(const KoopmanModel& model, const Eigen::VectorXd& x0,
                             const Eigen::MatrixXd& inputs);

/// Same recursion from an arbitrary lifted start z0 (not necessarily the
/// image of a state under the encoder).
LiftedRollout lifted_rollout_from(const KoopmanModel& model, const Eigen::VectorXd& z0,
                                  const Eigen::MatrixXd& inputs);

}  // namespace koopcert
