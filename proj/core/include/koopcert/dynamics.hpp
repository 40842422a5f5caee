// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace koopcert {

/// Time-indexed input signal, evaluated at the physical time t = k * dt.
using InputSignal = std::function<Eigen::VectorXd(double t)>;

InputSignal constant_input(const Eigen::VectorXd& u);
InputSignal sine_input(double amplitude, double omega);  // scalar A*sin(w*t)

/// One recorded trajectory: states, inputs and outputs of equal length.
struct Trajectory {
  Eigen::MatrixXd states;   // n x M
  Eigen::MatrixXd inputs;   // m x M
  Eigen::MatrixXd outputs;  // p x M

  long length() const { return states.cols(); }

  void save_csv(const std::filesystem::path& path) const;
  static Trajectory load_csv(const std::filesystem::path& path, int n, int m, int p);
};

/// Generic discrete-time plant interface so new benchmarks plug in next to
/// the shipped Duffing instance.
struct DiscreteSystem {
  int state_dim = 0;
  int input_dim = 0;
  int output_dim = 0;
  double dt = 0.0;
  double noise_bound = 0.0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& noise)>
      step;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& u)> output;
};

/// Damped Duffing oscillator, explicit-Euler discretized, with a bounded
/// additive process noise on both state channels.
struct DuffingSystem {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double dt = 0.005;
  double noise_bound = 1e-2;  // l2 bound on the per-step noise vector
};

/// x1+ = x1 + dt*x2 + w1
/// x2+ = x2 + dt*(-a*x2 - (b + c*x1^2)*x1 + u) + w2
Eigen::Vector2d duffing_step(const Eigen::Vector2d& state, double input,
                             const DuffingSystem& sys, const Eigen::Vector2d& noise);

/// y = 0.2*sin(0.2*x1) + 0.8*cos(0.5*x2) + u
double duffing_output(const Eigen::Vector2d& state, double input);

DiscreteSystem make_duffing(const DuffingSystem& params);

/// Simulates `steps` samples from x0 under the given input signal. Noise is
/// drawn i.i.d. uniformly on the l2 ball of radius noise_bound from the
/// seeded generator; the result is bit-reproducible for a fixed seed.
/// Throws DivergenceError (with step index) if the state leaves the finite
/// range.
Trajectory simulate(const DiscreteSystem& sys, const Eigen::VectorXd& x0,
                    const InputSignal& input, long steps, std::uint64_t seed);

}  // namespace koopcert
