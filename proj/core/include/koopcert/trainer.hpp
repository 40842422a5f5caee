// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "koopcert/koopman_loss.hpp"

namespace koopcert {

struct NetDims {
  int state_dim = 2;
  int lift_dim = 50;
  std::vector<int> hidden{32, 32};
};

struct EpochRecord {
  long epoch = 0;
  double lr = 0.0;
  double l_z = 0.0;
  double l_pred = 0.0;
  double l_rec = 0.0;
  double total = 0.0;
  double val_total = 0.0;
};

struct TrainResult {
  KoopmanModel model;  // best-validation parameters
  std::vector<EpochRecord> log;
  long best_epoch = -1;
  double best_val = 0.0;
  bool aborted_nan = false;

  void save_log_csv(const std::filesystem::path& path) const;
};

/// Fresh model with seeded fan-in initialization. A starts at identity,
/// B, C, D at zero, which biases early training toward slow lifted
/// dynamics.
KoopmanModel init_model(const NetDims& dims, int input_dim, int output_dim,
                        std::uint64_t seed);

/// Adam with the step-size schedule lr0 * decay^(epoch / decay_every).
/// Full-batch when hyper.batch_size == 0, otherwise seeded-shuffle
/// mini-batches. Deterministic for a fixed seed. On NaN loss the run aborts
/// and the last finite (best validation) checkpoint is returned with
/// aborted_nan set.
TrainResult train_model(const std::vector<Trajectory>& train,
                        const std::vector<Trajectory>& val, const NetDims& dims,
                        const TrainHyper& hyper);

}  // namespace koopcert
