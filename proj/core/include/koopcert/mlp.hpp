// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace koopcert {

enum class Activation { Tanh, Relu };

struct MlpLayer {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Feedforward network sigma(W_i x + b_i) with an affine (no activation)
/// final layer, so outputs span unbounded ranges.
class MlpNetwork {
 public:
  MlpNetwork() = default;
  MlpNetwork(std::vector<MlpLayer> layers, Activation act);

  /// Uniform fan-in initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static MlpNetwork random(int input_dim, const std::vector<int>& hidden, int output_dim,
                           Activation act, std::uint64_t seed);

  int input_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  int num_layers() const { return static_cast<int>(layers_.size()); }
  const std::vector<MlpLayer>& layers() const { return layers_; }
  std::vector<MlpLayer>& layers() { return layers_; }
  Activation activation() const { return act_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x) const;

  /// Post-activation values per layer, kept for the backward pass.
  /// activations[0] is the input batch, activations[i] the output of layer i.
  struct Cache {
    std::vector<Eigen::MatrixXd> activations;
  };

  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& x, Cache& cache) const;

  /// Backpropagates d(loss)/d(output); accumulates into `grads` (which must
  /// be zero-initialized with layer shapes) and returns d(loss)/d(input).
  Eigen::MatrixXd backward_batch(const Cache& cache, const Eigen::MatrixXd& grad_out,
                                 std::vector<MlpLayer>& grads) const;

  std::vector<MlpLayer> zero_grads() const;

 private:
  std::vector<MlpLayer> layers_;
  Activation act_ = Activation::Tanh;
};

/// Chains decoder after encoder into a single network. Valid because the
/// encoder's final layer is affine and the decoder's first layer applies
/// its own activation.
MlpNetwork compose_networks(const MlpNetwork& first, const MlpNetwork& second);

}  // namespace koopcert
