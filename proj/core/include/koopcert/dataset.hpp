// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "koopcert/dynamics.hpp"

namespace koopcert {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Randomized sinusoidal-excitation dataset configuration.
struct TrainConfig {
  long num_trajectories = 400;
  long steps_per_trajectory = 3001;
  Interval amp_range{0.0, 0.5};
  Interval freq_range{0.2, 0.5};
  std::vector<Interval> init_box{{-3.0, 3.0}, {-3.0, 3.0}};
  double split_ratio = 0.8;
  std::uint64_t seed = 0;
};

struct TrainingSet {
  std::vector<Trajectory> train;
  std::vector<Trajectory> val;
  long regenerated = 0;  // trajectories replaced after divergence
  bool empty_val_warning = false;
};

/// Generates num_trajectories trajectories under u(t) = A*sin(w*t) with
/// (A, w, x0) drawn per trajectory, then splits by whole trajectories.
/// Divergent draws are regenerated (at most 10 consecutive failures).
TrainingSet generate_training_set(const DiscreteSystem& sys, const TrainConfig& cfg);

void save_training_set(const TrainingSet& set, const TrainConfig& cfg,
                       const std::filesystem::path& dir);
TrainingSet load_training_set(const std::filesystem::path& dir, const DiscreteSystem& sys);

/// Uniform evaluation grid over a state-domain box with the true (noise
/// free) outputs attached. Two covering radii are reported: the half grid
/// spacing (per-coordinate reading) and the l2 radius of a grid cell, which
/// is what the transfer bound actually consumes.
struct EvalSet {
  Eigen::MatrixXd points;   // n x M
  Eigen::MatrixXd inputs;   // m x M (constant evaluation input)
  Eigen::MatrixXd outputs;  // p x M
  double delta_x_half_spacing = 0.0;
  double delta_x_l2 = 0.0;
  std::vector<Interval> domain;

  long size() const { return points.cols(); }
  void save_csv(const std::filesystem::path& path) const;
};

EvalSet build_evaluation_grid(const std::vector<Interval>& domain_box, long points_per_dim,
                              const Eigen::VectorXd& input_value, const DiscreteSystem& sys,
                              long memory_cap_points = 4'000'000);

}  // namespace koopcert
