// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "koopcert/dynamics.hpp"
#include "koopcert/koopman_model.hpp"

namespace koopcert {

/// Training hyperparameters. The loss terms are plain (un-squared) 2-norms;
/// squared_norms switches to the squared variants for conditioning
/// experiments.
struct TrainHyper {
  double lambda1 = 2.0;   // Koopman dynamic loss weight
  double lambda2 = 5.0;   // prediction loss weight
  double lambda3 = 10.0;  // reconstruction loss weight
  double lr0 = 0.003;
  double decay = 0.9;
  long decay_every = 500;  // epochs
  long max_epochs = 50'000;
  long batch_size = 0;  // 0 = full batch
  bool squared_norms = false;
  std::uint64_t seed = 0;

  void validate() const;
  double lr_at_epoch(long epoch) const;
};

/// Batch of transition tuples (x(k), u(k), x(k+1), y(k)), stored columnwise.
struct TransitionBatch {
  Eigen::MatrixXd x;       // n x M
  Eigen::MatrixXd u;       // m x M
  Eigen::MatrixXd x_next;  // n x M
  Eigen::MatrixXd y;       // p x M

  long size() const { return x.cols(); }
};

/// Builds the tuple batch from consecutive samples of each trajectory.
TransitionBatch make_transition_batch(const std::vector<Trajectory>& trajectories);

struct LossParts {
  double l_z = 0.0;
  double l_pred = 0.0;
  double l_rec = 0.0;
  double total = 0.0;
};

LossParts koopman_loss(const KoopmanModel& model, const TransitionBatch& batch,
                       const TrainHyper& hyper);

/// Gradient of the total loss with respect to every parameter. The
/// un-squared norm terms are non-smooth at zero residual; the zero
/// subgradient is returned there.
struct ModelGrads {
  std::vector<MlpLayer> encoder;
  std::vector<MlpLayer> decoder;
  Eigen::MatrixXd A, B, C, D;
};

ModelGrads loss_gradients(const KoopmanModel& model, const TransitionBatch& batch,
                          const TrainHyper& hyper, LossParts* parts = nullptr);

/// Flattened parameter vector in a fixed order (encoder layers, decoder
/// layers, A, B, C, D); used by the optimizer and by finite-difference
/// checks.
Eigen::VectorXd pack_parameters(const KoopmanModel& model);
void unpack_parameters(const Eigen::VectorXd& v, KoopmanModel& model);
Eigen::VectorXd pack_gradients(const ModelGrads& grads);

}  // namespace koopcert
