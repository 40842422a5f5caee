// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/mlp.hpp"

#include <cmath>

#include "koopcert/errors.hpp"
#include "koopcert/rng.hpp"

namespace koopcert {

MlpNetwork::MlpNetwork(std::vector<MlpLayer> layers, Activation act)
    : layers_(std::move(layers)), act_(act) {
  if (layers_.empty()) throw InvalidInputError("MlpNetwork: no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.weight.rows() != l.bias.size()) {
      throw InvalidInputError("MlpNetwork: bias size does not match weight rows");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw InvalidInputError("MlpNetwork: non-finite parameters");
    }
    if (i > 0 && layers_[i - 1].weight.rows() != l.weight.cols()) {
      throw InvalidInputError("MlpNetwork: consecutive layer dimensions do not chain");
    }
  }
}

MlpNetwork MlpNetwork::random(int input_dim, const std::vector<int>& hidden, int output_dim,
                              Activation act, std::uint64_t seed) {
  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(output_dim);

  Rng rng(seed);
  std::vector<MlpLayer> layers;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    MlpLayer l;
    l.weight.resize(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) l.weight(r, c) = rng.uniform(-scale, scale);
    }
    l.bias = Eigen::VectorXd::Zero(fan_out);
    layers.push_back(std::move(l));
  }
  return MlpNetwork(std::move(layers), act);
}

namespace {

inline void apply_activation(Eigen::MatrixXd& z, Activation act) {
  if (act == Activation::Tanh) {
    z = z.array().tanh();
  } else {
    z = z.cwiseMax(0.0);
  }
}

// Derivative expressed through the post-activation value.
inline Eigen::ArrayXXd activation_deriv(const Eigen::MatrixXd& a, Activation act) {
  if (act == Activation::Tanh) {
    return 1.0 - a.array().square();
  }
  return (a.array() > 0.0).cast<double>();
}

}  // namespace

Eigen::MatrixXd MlpNetwork::forward_batch(const Eigen::MatrixXd& x, Cache& cache) const {
  if (x.rows() != input_dim()) {
    throw InvalidInputError("MlpNetwork::forward_batch: input dimension mismatch");
  }
  cache.activations.clear();
  cache.activations.reserve(layers_.size() + 1);
  cache.activations.push_back(x);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].weight * cache.activations.back();
    z.colwise() += layers_[i].bias;
    if (i + 1 < layers_.size()) apply_activation(z, act_);
    cache.activations.push_back(std::move(z));
  }
  return cache.activations.back();
}

Eigen::MatrixXd MlpNetwork::forward_batch(const Eigen::MatrixXd& x) const {
  Cache cache;
  return forward_batch(x, cache);
}

Eigen::VectorXd MlpNetwork::forward(const Eigen::VectorXd& x) const {
  return forward_batch(Eigen::MatrixXd(x)).col(0);
}

std::vector<MlpLayer> MlpNetwork::zero_grads() const {
  std::vector<MlpLayer> grads;
  grads.reserve(layers_.size());
  for (const auto& l : layers_) {
    grads.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                     Eigen::VectorXd::Zero(l.bias.size())});
  }
  return grads;
}

Eigen::MatrixXd MlpNetwork::backward_batch(const Cache& cache, const Eigen::MatrixXd& grad_out,
                                           std::vector<MlpLayer>& grads) const {
  const int L = num_layers();
  if (static_cast<int>(cache.activations.size()) != L + 1) {
    throw InvalidInputError("MlpNetwork::backward_batch: stale cache");
  }
  Eigen::MatrixXd delta = grad_out;  // final layer is affine
  for (int i = L - 1; i >= 0; --i) {
    if (i < L - 1) {
      delta = delta.cwiseProduct(activation_deriv(cache.activations[i + 1], act_).matrix());
    }
    grads[i].weight.noalias() += delta * cache.activations[i].transpose();
    grads[i].bias.noalias() += delta.rowwise().sum();
    if (i > 0) {
      delta = (layers_[i].weight.transpose() * delta).eval();
    } else {
      return layers_[0].weight.transpose() * delta;
    }
  }
  return delta;
}

MlpNetwork compose_networks(const MlpNetwork& first, const MlpNetwork& second) {
  if (first.output_dim() != second.input_dim()) {
    throw InvalidInputError("compose_networks: dimension mismatch");
  }
  if (first.activation() != second.activation()) {
    throw InvalidInputError("compose_networks: activation tags differ");
  }
  // No activation sits between first's affine output layer and second's
  // first pre-activation, so the two affine maps fold into one layer.
  std::vector<MlpLayer> layers(first.layers().begin(), first.layers().end() - 1);
  const MlpLayer& tail = first.layers().back();
  const MlpLayer& head = second.layers().front();
  MlpLayer merged;
  merged.weight = head.weight * tail.weight;
  merged.bias = head.weight * tail.bias + head.bias;
  layers.push_back(std::move(merged));
  layers.insert(layers.end(), second.layers().begin() + 1, second.layers().end());
  return MlpNetwork(std::move(layers), first.activation());
}

}  // namespace koopcert
