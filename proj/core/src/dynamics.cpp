// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/dynamics.hpp"

#include <cmath>

#include "koopcert/errors.hpp"
#include "koopcert/rng.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

InputSignal constant_input(const Eigen::VectorXd& u) {
  return [u](double) { return u; };
}

InputSignal sine_input(double amplitude, double omega) {
  return [amplitude, omega](double t) {
    Eigen::VectorXd u(1);
    u[0] = amplitude * std::sin(omega * t);
    return u;
  };
}

Eigen::Vector2d duffing_step(const Eigen::Vector2d& state, double input,
                             const DuffingSystem& sys, const Eigen::Vector2d& noise) {
  if (noise.norm() > sys.noise_bound + 1e-15) {
    throw InvalidInputError("duffing_step: noise norm exceeds the declared bound");
  }
  const double x1 = state[0];
  const double x2 = state[1];
  Eigen::Vector2d next;
  next[0] = x1 + sys.dt * x2 + noise[0];
  next[1] = x2 + sys.dt * (-sys.a * x2 - (sys.b + sys.c * x1 * x1) * x1 + input) + noise[1];
  return next;
}

double duffing_output(const Eigen::Vector2d& state, double input) {
  if (!state.allFinite() || !std::isfinite(input)) {
    throw InvalidInputError("duffing_output: non-finite input");
  }
  return 0.2 * std::sin(0.2 * state[0]) + 0.8 * std::cos(0.5 * state[1]) + input;
}

DiscreteSystem make_duffing(const DuffingSystem& params) {
  if (params.dt <= 0.0) throw InvalidInputError("make_duffing: dt must be positive");
  if (params.noise_bound < 0.0) {
    throw InvalidInputError("make_duffing: noise bound must be non-negative");
  }
  DiscreteSystem sys;
  sys.state_dim = 2;
  sys.input_dim = 1;
  sys.output_dim = 1;
  sys.dt = params.dt;
  sys.noise_bound = params.noise_bound;
  sys.step = [params](const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& w) -> Eigen::VectorXd {
    return duffing_step(x, u[0], params, w);
  };
  sys.output = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Eigen::VectorXd y(1);
    y[0] = duffing_output(x, u[0]);
    return y;
  };
  return sys;
}

Trajectory simulate(const DiscreteSystem& sys, const Eigen::VectorXd& x0,
                    const InputSignal& input, long steps, std::uint64_t seed) {
  if (steps < 1) throw InvalidInputError("simulate: steps must be >= 1");
  if (x0.size() != sys.state_dim) throw InvalidInputError("simulate: x0 dimension mismatch");

  Trajectory traj;
  traj.states.resize(sys.state_dim, steps);
  traj.inputs.resize(sys.input_dim, steps);
  traj.outputs.resize(sys.output_dim, steps);

  Rng rng(seed);
  Eigen::VectorXd x = x0;
  constexpr double kBlowUp = 1e9;
  for (long k = 0; k < steps; ++k) {
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kBlowUp) {
      throw DivergenceError("simulate: state diverged", k);
    }
    const Eigen::VectorXd u = input(static_cast<double>(k) * sys.dt);
    traj.states.col(k) = x;
    traj.inputs.col(k) = u;
    traj.outputs.col(k) = sys.output(x, u);
    if (k + 1 < steps) {
      const Eigen::VectorXd w = rng.uniform_in_ball(sys.state_dim, sys.noise_bound);
      x = sys.step(x, u, w);
    }
  }
  return traj;
}

void Trajectory::save_csv(const std::filesystem::path& path) const {
  CsvTable t;
  t.header.push_back("k");
  for (long i = 0; i < states.rows(); ++i) t.header.push_back("x" + std::to_string(i + 1));
  for (long i = 0; i < inputs.rows(); ++i) t.header.push_back("u" + std::to_string(i + 1));
  for (long i = 0; i < outputs.rows(); ++i) t.header.push_back("y" + std::to_string(i + 1));
  for (long k = 0; k < length(); ++k) {
    std::vector<double> row;
    row.push_back(static_cast<double>(k));
    for (long i = 0; i < states.rows(); ++i) row.push_back(states(i, k));
    for (long i = 0; i < inputs.rows(); ++i) row.push_back(inputs(i, k));
    for (long i = 0; i < outputs.rows(); ++i) row.push_back(outputs(i, k));
    t.rows.push_back(std::move(row));
  }
  t.save(path);
}

Trajectory Trajectory::load_csv(const std::filesystem::path& path, int n, int m, int p) {
  const CsvTable t = CsvTable::load(path);
  if (static_cast<int>(t.header.size()) != 1 + n + m + p) {
    throw IoError("trajectory csv has unexpected width: " + path.string());
  }
  Trajectory traj;
  const long len = static_cast<long>(t.rows.size());
  traj.states.resize(n, len);
  traj.inputs.resize(m, len);
  traj.outputs.resize(p, len);
  for (long k = 0; k < len; ++k) {
    const auto& row = t.rows[k];
    for (int i = 0; i < n; ++i) traj.states(i, k) = row[1 + i];
    for (int i = 0; i < m; ++i) traj.inputs(i, k) = row[1 + n + i];
    for (int i = 0; i < p; ++i) traj.outputs(i, k) = row[1 + n + m + i];
  }
  return traj;
}

}  // namespace koopcert
