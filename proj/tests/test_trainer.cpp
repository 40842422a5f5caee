// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "koopcert/dataset.hpp"
#include "koopcert/text_io.hpp"
#include "koopcert/trainer.hpp"

using namespace koopcert;

namespace {

/// Scalar linear plant x+ = 0.9 x + u, y = x, noise free.
DiscreteSystem linear_plant() {
  DiscreteSystem sys;
  sys.state_dim = 1;
  sys.input_dim = 1;
  sys.output_dim = 1;
  sys.dt = 1.0;
  sys.noise_bound = 0.0;
  sys.step = [](const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                const Eigen::VectorXd&) -> Eigen::VectorXd { return 0.9 * x + u; };
  sys.output = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) { return x; };
  return sys;
}

TrainingSet linear_data(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.num_trajectories = 10;
  cfg.steps_per_trajectory = 60;
  cfg.amp_range = {0.1, 0.5};
  cfg.freq_range = {0.2, 0.9};
  cfg.init_box = {{-1.0, 1.0}};
  cfg.split_ratio = 0.8;
  cfg.seed = seed;
  return generate_training_set(linear_plant(), cfg);
}

}  // namespace

TEST_SUITE_BEGIN("trainer");

TEST_CASE("an exactly representable linear system trains to tiny dynamic loss") {
  const TrainingSet data = linear_data(5);
  NetDims dims;
  dims.state_dim = 1;
  dims.lift_dim = 4;
  dims.hidden = {16};
  TrainHyper hyper;
  hyper.max_epochs = 2000;
  hyper.seed = 12;
  const TrainResult result = train_model(data.train, data.val, dims, hyper);
  REQUIRE_FALSE(result.aborted_nan);
  const TransitionBatch val = make_transition_batch(data.val);
  const LossParts parts = koopman_loss(result.model, val, hyper);
  CHECK(parts.l_z <= 1e-4);
}

TEST_CASE("same seed yields identical final parameters") {
  const TrainingSet data = linear_data(9);
  NetDims dims;
  dims.state_dim = 1;
  dims.lift_dim = 3;
  dims.hidden = {8};
  TrainHyper hyper;
  hyper.max_epochs = 50;
  hyper.seed = 77;
  const TrainResult a = train_model(data.train, data.val, dims, hyper);
  const TrainResult b = train_model(data.train, data.val, dims, hyper);
  CHECK(pack_parameters(a.model) == pack_parameters(b.model));
  CHECK(a.best_epoch == b.best_epoch);
}

TEST_CASE("mini-batch mode is deterministic and trains") {
  const TrainingSet data = linear_data(13);
  NetDims dims;
  dims.state_dim = 1;
  dims.lift_dim = 3;
  dims.hidden = {8};
  TrainHyper hyper;
  hyper.max_epochs = 60;
  hyper.batch_size = 64;
  hyper.seed = 5;
  const TrainResult a = train_model(data.train, data.val, dims, hyper);
  const TrainResult b = train_model(data.train, data.val, dims, hyper);
  CHECK(pack_parameters(a.model) == pack_parameters(b.model));
  CHECK(a.log.back().total < a.log.front().total);
}

TEST_CASE("learning-rate schedule decays by 0.9 every decay_every epochs") {
  TrainHyper hyper;
  hyper.lr0 = 0.003;
  hyper.decay = 0.9;
  hyper.decay_every = 500;
  CHECK(hyper.lr_at_epoch(0) == doctest::Approx(0.003));
  CHECK(hyper.lr_at_epoch(499) == doctest::Approx(0.003));
  CHECK(hyper.lr_at_epoch(500) == doctest::Approx(0.0027));
  CHECK(hyper.lr_at_epoch(1234) == doctest::Approx(0.003 * 0.9 * 0.9));
}

TEST_CASE("training log carries the expected columns") {
  const TrainingSet data = linear_data(21);
  NetDims dims;
  dims.state_dim = 1;
  dims.lift_dim = 3;
  dims.hidden = {4};
  TrainHyper hyper;
  hyper.max_epochs = 5;
  hyper.seed = 3;
  const TrainResult result = train_model(data.train, data.val, dims, hyper);
  const std::filesystem::path path = "test_artifacts/train_log.csv";
  result.save_log_csv(path);
  const CsvTable t = CsvTable::load(path);
  CHECK(t.header == std::vector<std::string>{"epoch", "lr", "L_z", "L_pred", "L_rec", "total",
                                             "val_total"});
  CHECK(t.rows.size() == 5);
}

TEST_SUITE_END();
