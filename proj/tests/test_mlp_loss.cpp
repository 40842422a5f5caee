// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "koopcert/errors.hpp"
#include "koopcert/koopman_loss.hpp"
#include "koopcert/rng.hpp"
#include "oracles.hpp"

using namespace koopcert;

namespace {

MlpLayer layer(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) { return {w, b}; }

/// Small random model plus a random batch with residuals bounded away from
/// zero (the un-squared norms are non-smooth at zero residual).
struct RandomProblem {
  KoopmanModel model;
  TransitionBatch batch;
};

RandomProblem random_problem(std::uint64_t seed, int n = 2, int lift = 5, int batch = 7) {
  Rng rng(seed);
  RandomProblem prob;
  prob.model.encoder = MlpNetwork::random(n, {6}, lift, Activation::Tanh, rng.next_u64());
  prob.model.decoder = MlpNetwork::random(lift, {6}, n, Activation::Tanh, rng.next_u64());
  const auto mat = [&rng](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) m(i, j) = rng.uniform(-0.8, 0.8);
    }
    return m;
  };
  prob.model.A = mat(lift, lift);
  prob.model.B = mat(lift, 1);
  prob.model.C = mat(1, lift);
  prob.model.D = mat(1, 1);
  prob.batch.x = mat(n, batch);
  prob.batch.u = mat(1, batch);
  prob.batch.x_next = mat(n, batch);
  prob.batch.y = mat(1, batch);
  return prob;
}

}  // namespace

TEST_SUITE_BEGIN("mlp-loss");

TEST_CASE("identity and zero layers") {
  MlpNetwork ident({layer(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3))},
                   Activation::Tanh);
  const Eigen::Vector3d x(0.3, -1.2, 4.0);
  CHECK((ident.forward(x) - x).norm() == 0.0);  // single layer is affine

  // A single layer network is affine regardless of the activation tag, so
  // force a hidden tanh by stacking a zero layer in front.
  MlpNetwork zero_tanh(
      {layer(Eigen::MatrixXd::Zero(3, 3), Eigen::VectorXd::Zero(3)),
       layer(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3))},
      Activation::Tanh);
  CHECK(zero_tanh.forward(x).norm() == 0.0);
}

TEST_CASE("forward pass matches the straight-line reference") {
  Rng rng(3);
  const MlpNetwork net = MlpNetwork::random(2, {32, 32}, 4, Activation::Tanh, 11);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(2);
    x << rng.uniform(-2, 2), rng.uniform(-2, 2);
    const Eigen::VectorXd ours = net.forward(x);
    const Eigen::VectorXd ref = oracles::mlp_forward_reference(net, x);
    CHECK((ours - ref).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const MlpNetwork net = MlpNetwork::random(2, {4}, 3, Activation::Tanh, 1);
  CHECK_THROWS_AS(net.forward(Eigen::VectorXd::Zero(5)), InvalidInputError);
}

TEST_CASE("loss vanishes on the zero fixed point with a zero-consistent model") {
  KoopmanModel model;
  model.encoder = MlpNetwork({layer(Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Zero(3))},
                             Activation::Tanh);
  model.decoder = MlpNetwork({layer(Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Zero(1))},
                             Activation::Tanh);
  model.A = Eigen::MatrixXd::Identity(3, 3);
  model.B = Eigen::MatrixXd::Zero(3, 1);
  model.C = Eigen::MatrixXd::Zero(1, 3);
  model.D = Eigen::MatrixXd::Zero(1, 1);

  TransitionBatch batch;
  batch.x = Eigen::MatrixXd::Zero(1, 4);
  batch.u = Eigen::MatrixXd::Zero(1, 4);
  batch.x_next = Eigen::MatrixXd::Zero(1, 4);
  batch.y = Eigen::MatrixXd::Zero(1, 4);

  const LossParts parts = koopman_loss(model, batch, TrainHyper{});
  CHECK(parts.l_z == 0.0);
  CHECK(parts.l_pred == 0.0);
  CHECK(parts.l_rec == 0.0);
  CHECK(parts.total == 0.0);
}

TEST_CASE("weighted total for hand-built residual norms (0.1, 0.2, 0.3)") {
  // Encoder maps x to (x, 0); A = I, B = 0, so the dynamic residual for the
  // tuple (0 -> 0.1) is (0.1, 0). C = D = 0 leaves the prediction residual
  // at y = 0.2. The decoder is the constant 0.3, so reconstruction of x = 0
  // misses by 0.3.
  KoopmanModel model;
  Eigen::MatrixXd enc_w(2, 1);
  enc_w << 1.0, 0.0;
  model.encoder = MlpNetwork({layer(enc_w, Eigen::VectorXd::Zero(2))}, Activation::Tanh);
  Eigen::MatrixXd dec_w(1, 2);
  dec_w << 0.0, 0.0;
  Eigen::VectorXd dec_b(1);
  dec_b << 0.3;
  model.decoder = MlpNetwork({layer(dec_w, dec_b)}, Activation::Tanh);
  model.A = Eigen::MatrixXd::Identity(2, 2);
  model.B = Eigen::MatrixXd::Zero(2, 1);
  model.C = Eigen::MatrixXd::Zero(1, 2);
  model.D = Eigen::MatrixXd::Zero(1, 1);

  TransitionBatch batch;
  batch.x = Eigen::MatrixXd::Zero(1, 1);
  batch.u = Eigen::MatrixXd::Zero(1, 1);
  batch.x_next = Eigen::MatrixXd::Constant(1, 1, 0.1);
  batch.y = Eigen::MatrixXd::Constant(1, 1, 0.2);

  TrainHyper hyper;  // lambdas (2, 5, 10)
  const LossParts parts = koopman_loss(model, batch, hyper);
  CHECK(parts.l_z == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(parts.l_pred == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(parts.l_rec == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(parts.total == doctest::Approx(4.2).epsilon(1e-12));
}

TEST_CASE("total is invariant under batch permutation") {
  const RandomProblem prob = random_problem(17);
  const LossParts base = koopman_loss(prob.model, prob.batch, TrainHyper{});

  TransitionBatch shuffled = prob.batch;
  const long M = prob.batch.size();
  for (long j = 0; j < M; ++j) {
    const long src = M - 1 - j;
    shuffled.x.col(j) = prob.batch.x.col(src);
    shuffled.u.col(j) = prob.batch.u.col(src);
    shuffled.x_next.col(j) = prob.batch.x_next.col(src);
    shuffled.y.col(j) = prob.batch.y.col(src);
  }
  const LossParts perm = koopman_loss(prob.model, shuffled, TrainHyper{});
  CHECK(base.total == doctest::Approx(perm.total).epsilon(1e-13));
}

TEST_CASE("analytic gradients match central finite differences over 20 seeds") {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RandomProblem prob = random_problem(seed);
    TrainHyper hyper;
    const LossParts parts = koopman_loss(prob.model, prob.batch, hyper);
    REQUIRE(parts.l_z > 1e-3);  // residuals bounded away from the kink
    REQUIRE(parts.l_pred > 1e-3);
    REQUIRE(parts.l_rec > 1e-3);

    const Eigen::VectorXd analytic = pack_gradients(loss_gradients(prob.model, prob.batch, hyper));
    const Eigen::VectorXd numeric =
        oracles::finite_difference_gradient(prob.model, prob.batch, hyper);
    const double rel =
        (analytic - numeric).cwiseAbs().maxCoeff() / numeric.cwiseAbs().maxCoeff();
    worst = std::max(worst, rel);
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("zero residuals produce the zero subgradient") {
  KoopmanModel model;
  model.encoder = MlpNetwork({layer(Eigen::MatrixXd::Ones(2, 1), Eigen::VectorXd::Zero(2))},
                             Activation::Tanh);
  model.decoder = MlpNetwork({layer(Eigen::MatrixXd::Zero(1, 2), Eigen::VectorXd::Zero(1))},
                             Activation::Tanh);
  model.A = Eigen::MatrixXd::Identity(2, 2);
  model.B = Eigen::MatrixXd::Zero(2, 1);
  model.C = Eigen::MatrixXd::Zero(1, 2);
  model.D = Eigen::MatrixXd::Zero(1, 1);
  TransitionBatch batch;
  batch.x = Eigen::MatrixXd::Zero(1, 3);
  batch.u = Eigen::MatrixXd::Zero(1, 3);
  batch.x_next = Eigen::MatrixXd::Zero(1, 3);
  batch.y = Eigen::MatrixXd::Zero(1, 3);
  const Eigen::VectorXd grad = pack_gradients(loss_gradients(model, batch, TrainHyper{}));
  CHECK(grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaling lambda1 scales exactly the dynamic-loss gradient share") {
  const RandomProblem prob = random_problem(23);
  TrainHyper h1;
  h1.lambda2 = 1e-30;  // isolate the dynamic term
  h1.lambda3 = 1e-30;
  TrainHyper h2 = h1;
  h2.lambda1 = 2.0 * h1.lambda1;
  const Eigen::VectorXd g1 = pack_gradients(loss_gradients(prob.model, prob.batch, h1));
  const Eigen::VectorXd g2 = pack_gradients(loss_gradients(prob.model, prob.batch, h2));
  CHECK((g2 - 2.0 * g1).cwiseAbs().maxCoeff() <= 1e-12 * g1.cwiseAbs().maxCoeff());
}

TEST_CASE("rollout basics") {
  const RandomProblem prob = random_problem(29);
  KoopmanModel model = prob.model;

  SUBCASE("A = I, B = 0 keeps the lift constant") {
    model.A = Eigen::MatrixXd::Identity(model.lift_dim(), model.lift_dim());
    model.B = Eigen::MatrixXd::Zero(model.lift_dim(), 1);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 0.4);
    const LiftedRollout roll = lifted_rollout(model, x0, Eigen::MatrixXd::Zero(1, 5));
    const Eigen::VectorXd expected = model.decoder.forward(model.encoder.forward(x0));
    for (long k = 0; k < 5; ++k) {
      CHECK((roll.decoded_states.col(k) - expected).norm() <= 1e-14);
    }
  }

  SUBCASE("one step equals encode, multiply, decode composed by hand") {
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, -0.3);
    Eigen::MatrixXd u(1, 2);
    u << 0.7, 0.0;
    const LiftedRollout roll = lifted_rollout(model, x0, u);
    const Eigen::VectorXd z0 = model.encoder.forward(x0);
    const Eigen::VectorXd z1 = model.A * z0 + model.B * u.col(0);
    CHECK((roll.lifted.col(1) - z1).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((roll.decoded_states.col(1) - model.decoder.forward(z1)).cwiseAbs().maxCoeff() <=
          1e-14);
    CHECK((roll.outputs.col(1) - (model.C * z1 + model.D * u.col(1))).cwiseAbs().maxCoeff() <=
          1e-14);
  }

  SUBCASE("a stable lift stays bounded under zero input") {
    model.A = 0.9 * Eigen::MatrixXd::Identity(model.lift_dim(), model.lift_dim());
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 1.0);
    const LiftedRollout roll = lifted_rollout(model, x0, Eigen::MatrixXd::Zero(1, 200));
    double prev = roll.lifted.col(0).norm();
    for (long k = 1; k < 200; ++k) {
      const double cur = roll.lifted.col(k).norm();
      REQUIRE(cur <= prev + 1e-12);
      prev = cur;
    }
  }

  SUBCASE("divergence is detected with a step index") {
    model.A = 3.0 * Eigen::MatrixXd::Identity(model.lift_dim(), model.lift_dim());
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(2, 1.0);
    CHECK_THROWS_AS(lifted_rollout(model, x0, Eigen::MatrixXd::Zero(1, 100)),
                    DivergenceError);
  }
}

TEST_CASE("checkpoint round trip preserves every parameter bit") {
  const RandomProblem prob = random_problem(31);
  const std::filesystem::path path = "test_artifacts/checkpoint.txt";
  prob.model.save_checkpoint(path);
  const KoopmanModel loaded = KoopmanModel::load_checkpoint(path);
  CHECK(pack_parameters(prob.model) == pack_parameters(loaded));
}

TEST_SUITE_END();
