// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "koopcert/errors.hpp"
#include "koopcert/rng.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

namespace {

std::string traj_filename(long i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "traj_%04ld.csv", i);
  return buf;
}

}  // namespace

TrainingSet generate_training_set(const DiscreteSystem& sys, const TrainConfig& cfg) {
  if (cfg.num_trajectories < 1) {
    throw InvalidInputError("generate_training_set: need at least one trajectory");
  }
  if (cfg.split_ratio <= 0.0 || cfg.split_ratio >= 1.0) {
    throw InvalidInputError("generate_training_set: split_ratio must lie in (0,1)");
  }
  if (static_cast<int>(cfg.init_box.size()) != sys.state_dim) {
    throw InvalidInputError("generate_training_set: init_box dimension mismatch");
  }

  TrainingSet out;
  std::vector<Trajectory> all;
  all.reserve(cfg.num_trajectories);
  for (long i = 0; i < cfg.num_trajectories; ++i) {
    long failures = 0;
    for (;;) {
      // Fresh substream per (trajectory, attempt) so a regeneration does not
      // shift later trajectories.
      const std::uint64_t sub = derive_seed(cfg.seed, static_cast<std::uint64_t>(i) * 64 +
                                                          static_cast<std::uint64_t>(failures));
      Rng draw(derive_seed(sub, "excitation"));
      const double amp = draw.uniform(cfg.amp_range.lo, cfg.amp_range.hi);
      const double omega = draw.uniform(cfg.freq_range.lo, cfg.freq_range.hi);
      Eigen::VectorXd x0(sys.state_dim);
      for (int d = 0; d < sys.state_dim; ++d) {
        x0[d] = draw.uniform(cfg.init_box[d].lo, cfg.init_box[d].hi);
      }
      try {
        all.push_back(simulate(sys, x0, sine_input(amp, omega), cfg.steps_per_trajectory,
                               derive_seed(sub, "noise")));
        break;
      } catch (const DivergenceError&) {
        ++out.regenerated;
        if (++failures > 10) {
          throw InvalidInputError(
              "generate_training_set: more than 10 consecutive divergent draws for trajectory " +
              std::to_string(i));
        }
      }
    }
  }

  const long n_train = std::max<long>(
      1, static_cast<long>(std::floor(static_cast<double>(cfg.num_trajectories) *
                                      cfg.split_ratio)));
  for (long i = 0; i < cfg.num_trajectories; ++i) {
    if (i < n_train) {
      out.train.push_back(std::move(all[i]));
    } else {
      out.val.push_back(std::move(all[i]));
    }
  }
  out.empty_val_warning = out.val.empty();
  return out;
}

void save_training_set(const TrainingSet& set, const TrainConfig& cfg,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "train");
  std::filesystem::create_directories(dir / "val");
  for (std::size_t i = 0; i < set.train.size(); ++i) {
    set.train[i].save_csv(dir / "train" / traj_filename(static_cast<long>(i)));
  }
  for (std::size_t i = 0; i < set.val.size(); ++i) {
    set.val[i].save_csv(dir / "val" / traj_filename(static_cast<long>(i)));
  }
  Manifest m;
  m.set("num_trajectories", cfg.num_trajectories);
  m.set("steps_per_trajectory", cfg.steps_per_trajectory);
  m.set("amp_min", cfg.amp_range.lo);
  m.set("amp_max", cfg.amp_range.hi);
  m.set("freq_min", cfg.freq_range.lo);
  m.set("freq_max", cfg.freq_range.hi);
  for (std::size_t d = 0; d < cfg.init_box.size(); ++d) {
    m.set("init_min_" + std::to_string(d + 1), cfg.init_box[d].lo);
    m.set("init_max_" + std::to_string(d + 1), cfg.init_box[d].hi);
  }
  m.set("split_ratio", cfg.split_ratio);
  m.set("seed", static_cast<long>(cfg.seed));
  m.set("n_train", static_cast<long>(set.train.size()));
  m.set("n_val", static_cast<long>(set.val.size()));
  m.set("regenerated", set.regenerated);
  m.save(dir / "manifest.txt");
}

TrainingSet load_training_set(const std::filesystem::path& dir, const DiscreteSystem& sys) {
  const Manifest m = Manifest::load(dir / "manifest.txt");
  TrainingSet set;
  const long n_train = m.get_long("n_train");
  const long n_val = m.get_long("n_val");
  for (long i = 0; i < n_train; ++i) {
    set.train.push_back(Trajectory::load_csv(dir / "train" / traj_filename(i), sys.state_dim,
                                             sys.input_dim, sys.output_dim));
  }
  for (long i = 0; i < n_val; ++i) {
    set.val.push_back(Trajectory::load_csv(dir / "val" / traj_filename(i), sys.state_dim,
                                           sys.input_dim, sys.output_dim));
  }
  set.regenerated = m.get_long("regenerated");
  set.empty_val_warning = set.val.empty();
  return set;
}

EvalSet build_evaluation_grid(const std::vector<Interval>& domain_box, long points_per_dim,
                              const Eigen::VectorXd& input_value, const DiscreteSystem& sys,
                              long memory_cap_points) {
  if (points_per_dim < 2) {
    throw InvalidInputError("build_evaluation_grid: points_per_dim must be >= 2");
  }
  const int n = static_cast<int>(domain_box.size());
  if (n != sys.state_dim) {
    throw InvalidInputError("build_evaluation_grid: domain dimension mismatch");
  }

  double total_d = 1.0;
  for (int d = 0; d < n; ++d) total_d *= static_cast<double>(points_per_dim);
  if (total_d > static_cast<double>(memory_cap_points)) {
    throw InvalidInputError("build_evaluation_grid: grid of " + std::to_string(total_d) +
                            " points exceeds the memory cap");
  }
  const long total = static_cast<long>(total_d);

  EvalSet set;
  set.domain = domain_box;
  set.points.resize(n, total);
  set.inputs.resize(sys.input_dim, total);
  set.outputs.resize(sys.output_dim, total);

  double half_max = 0.0;
  double half_sq = 0.0;
  for (int d = 0; d < n; ++d) {
    const double half = 0.5 * domain_box[d].width() / static_cast<double>(points_per_dim - 1);
    half_max = std::max(half_max, half);
    half_sq += half * half;
  }
  set.delta_x_half_spacing = half_max;
  set.delta_x_l2 = std::sqrt(half_sq);

  std::vector<long> idx(n, 0);
  for (long j = 0; j < total; ++j) {
    Eigen::VectorXd x(n);
    for (int d = 0; d < n; ++d) {
      x[d] = domain_box[d].lo + domain_box[d].width() * static_cast<double>(idx[d]) /
                                    static_cast<double>(points_per_dim - 1);
    }
    set.points.col(j) = x;
    set.inputs.col(j) = input_value;
    set.outputs.col(j) = sys.output(x, input_value);
    for (int d = n - 1; d >= 0; --d) {  // last dimension fastest
      if (++idx[d] < points_per_dim) break;
      idx[d] = 0;
    }
  }
  return set;
}

void EvalSet::save_csv(const std::filesystem::path& path) const {
  CsvTable t;
  for (long i = 0; i < points.rows(); ++i) t.header.push_back("x" + std::to_string(i + 1));
  for (long i = 0; i < inputs.rows(); ++i) t.header.push_back("u" + std::to_string(i + 1));
  for (long i = 0; i < outputs.rows(); ++i) t.header.push_back("y" + std::to_string(i + 1));
  for (long j = 0; j < size(); ++j) {
    std::vector<double> row;
    for (long i = 0; i < points.rows(); ++i) row.push_back(points(i, j));
    for (long i = 0; i < inputs.rows(); ++i) row.push_back(inputs(i, j));
    for (long i = 0; i < outputs.rows(); ++i) row.push_back(outputs(i, j));
    t.rows.push_back(std::move(row));
  }
  t.save(path);
}

}  // namespace koopcert
