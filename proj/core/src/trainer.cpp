// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/trainer.hpp"

#include <cmath>
#include <limits>

#include "koopcert/errors.hpp"
#include "koopcert/rng.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

KoopmanModel init_model(const NetDims& dims, int input_dim, int output_dim,
                        std::uint64_t seed) {
  KoopmanModel model;
  model.encoder = MlpNetwork::random(dims.state_dim, dims.hidden, dims.lift_dim,
                                     Activation::Tanh, derive_seed(seed, "encoder"));
  model.decoder = MlpNetwork::random(dims.lift_dim, dims.hidden, dims.state_dim,
                                     Activation::Tanh, derive_seed(seed, "decoder"));
  model.A = Eigen::MatrixXd::Identity(dims.lift_dim, dims.lift_dim);
  model.B = Eigen::MatrixXd::Zero(dims.lift_dim, input_dim);
  model.C = Eigen::MatrixXd::Zero(output_dim, dims.lift_dim);
  model.D = Eigen::MatrixXd::Zero(output_dim, input_dim);
  model.validate();
  return model;
}

namespace {

TransitionBatch gather_tuples(const TransitionBatch& all, const std::vector<long>& idx,
                              long begin, long count) {
  TransitionBatch b;
  b.x.resize(all.x.rows(), count);
  b.u.resize(all.u.rows(), count);
  b.x_next.resize(all.x_next.rows(), count);
  b.y.resize(all.y.rows(), count);
  for (long j = 0; j < count; ++j) {
    const long s = idx[begin + j];
    b.x.col(j) = all.x.col(s);
    b.u.col(j) = all.u.col(s);
    b.x_next.col(j) = all.x_next.col(s);
    b.y.col(j) = all.y.col(s);
  }
  return b;
}

struct Adam {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long t = 0;

  explicit Adam(long dim) : m(Eigen::VectorXd::Zero(dim)), v(Eigen::VectorXd::Zero(dim)) {}

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr) {
    ++t;
    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    params.array() -=
        lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  }
};

}  // namespace

TrainResult train_model(const std::vector<Trajectory>& train,
                        const std::vector<Trajectory>& val, const NetDims& dims,
                        const TrainHyper& hyper) {
  hyper.validate();
  if (train.empty()) throw InvalidInputError("train_model: empty training set");
  if (dims.lift_dim <= dims.state_dim) {
    throw InvalidInputError("train_model: lift dimension must exceed the state dimension");
  }

  const TransitionBatch train_batch = make_transition_batch(train);
  const bool have_val = !val.empty();
  TransitionBatch val_batch;
  if (have_val) val_batch = make_transition_batch(val);

  const int input_dim = static_cast<int>(train_batch.u.rows());
  const int output_dim = static_cast<int>(train_batch.y.rows());
  KoopmanModel model = init_model(dims, input_dim, output_dim, hyper.seed);

  Eigen::VectorXd params = pack_parameters(model);
  Adam adam(params.size());
  Rng shuffle_rng(derive_seed(hyper.seed, "shuffle"));

  TrainResult result;
  result.model = model;
  result.best_val = std::numeric_limits<double>::infinity();
  result.log.reserve(hyper.max_epochs);

  const long total_tuples = train_batch.size();
  std::vector<long> order(total_tuples);
  for (long i = 0; i < total_tuples; ++i) order[i] = i;

  for (long epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    const double lr = hyper.lr_at_epoch(epoch);
    LossParts epoch_parts;

    if (hyper.batch_size <= 0 || hyper.batch_size >= total_tuples) {
      const ModelGrads grads = loss_gradients(model, train_batch, hyper, &epoch_parts);
      const Eigen::VectorXd g = pack_gradients(grads);
      adam.step(params, g, lr);
      unpack_parameters(params, model);
    } else {
      // Fisher-Yates with the dedicated stream; deterministic per epoch.
      for (long i = total_tuples - 1; i > 0; --i) {
        const long j = static_cast<long>(shuffle_rng.uniform_index(i + 1));
        std::swap(order[i], order[j]);
      }
      double acc_z = 0.0, acc_pred = 0.0, acc_rec = 0.0;
      long seen = 0;
      for (long begin = 0; begin < total_tuples; begin += hyper.batch_size) {
        const long count = std::min<long>(hyper.batch_size, total_tuples - begin);
        const TransitionBatch mini = gather_tuples(train_batch, order, begin, count);
        LossParts parts;
        const ModelGrads grads = loss_gradients(model, mini, hyper, &parts);
        const Eigen::VectorXd g = pack_gradients(grads);
        adam.step(params, g, lr);
        unpack_parameters(params, model);
        acc_z += parts.l_z * count;
        acc_pred += parts.l_pred * count;
        acc_rec += parts.l_rec * count;
        seen += count;
      }
      epoch_parts.l_z = acc_z / seen;
      epoch_parts.l_pred = acc_pred / seen;
      epoch_parts.l_rec = acc_rec / seen;
      epoch_parts.total = hyper.lambda1 * epoch_parts.l_z + hyper.lambda2 * epoch_parts.l_pred +
                          hyper.lambda3 * epoch_parts.l_rec;
    }

    double val_total = epoch_parts.total;
    if (have_val) {
      val_total = koopman_loss(model, val_batch, hyper).total;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.l_z = epoch_parts.l_z;
    rec.l_pred = epoch_parts.l_pred;
    rec.l_rec = epoch_parts.l_rec;
    rec.total = epoch_parts.total;
    rec.val_total = val_total;
    result.log.push_back(rec);

    if (!std::isfinite(epoch_parts.total) || !std::isfinite(val_total)) {
      result.aborted_nan = true;
      break;  // last finite checkpoint (best so far) is returned
    }
    if (val_total < result.best_val) {
      result.best_val = val_total;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  return result;
}

void TrainResult::save_log_csv(const std::filesystem::path& path) const {
  CsvTable t;
  t.header = {"epoch", "lr", "L_z", "L_pred", "L_rec", "total", "val_total"};
  for (const auto& r : log) {
    t.rows.push_back({static_cast<double>(r.epoch), r.lr, r.l_z, r.l_pred, r.l_rec, r.total,
                      r.val_total});
  }
  t.save(path);
}

}  // namespace koopcert
