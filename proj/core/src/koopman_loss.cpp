// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/koopman_loss.hpp"

#include <cmath>

#include "koopcert/errors.hpp"

namespace koopcert {

void TrainHyper::validate() const {
  if (lambda1 <= 0.0 || lambda2 <= 0.0 || lambda3 <= 0.0) {
    throw InvalidInputError("TrainHyper: loss weights must be positive");
  }
  if (lr0 <= 0.0 || decay <= 0.0 || decay_every < 1 || max_epochs < 1) {
    throw InvalidInputError("TrainHyper: invalid schedule");
  }
}

double TrainHyper::lr_at_epoch(long epoch) const {
  return lr0 * std::pow(decay, static_cast<double>(epoch / decay_every));
}

TransitionBatch make_transition_batch(const std::vector<Trajectory>& trajectories) {
  if (trajectories.empty()) throw InvalidInputError("make_transition_batch: no trajectories");
  long total = 0;
  for (const auto& t : trajectories) {
    if (t.length() < 2) throw InvalidInputError("make_transition_batch: trajectory too short");
    total += t.length() - 1;
  }
  const auto& first = trajectories.front();
  TransitionBatch b;
  b.x.resize(first.states.rows(), total);
  b.u.resize(first.inputs.rows(), total);
  b.x_next.resize(first.states.rows(), total);
  b.y.resize(first.outputs.rows(), total);
  long at = 0;
  for (const auto& t : trajectories) {
    const long k = t.length() - 1;
    b.x.middleCols(at, k) = t.states.leftCols(k);
    b.u.middleCols(at, k) = t.inputs.leftCols(k);
    b.x_next.middleCols(at, k) = t.states.rightCols(k);
    b.y.middleCols(at, k) = t.outputs.leftCols(k);
    at += k;
  }
  return b;
}

namespace {

// Mean of columnwise 2-norms, or of squared norms. Also emits the seed
// gradient d(mean)/d(residual) when requested.
double norm_mean(const Eigen::MatrixXd& residuals, bool squared, Eigen::MatrixXd* seed) {
  const long M = residuals.cols();
  const double inv = 1.0 / static_cast<double>(M);
  if (seed != nullptr) seed->setZero(residuals.rows(), M);
  double acc = 0.0;
  for (long k = 0; k < M; ++k) {
    const double nrm = residuals.col(k).norm();
    if (squared) {
      acc += nrm * nrm;
      if (seed != nullptr) seed->col(k) = 2.0 * inv * residuals.col(k);
    } else {
      acc += nrm;
      if (seed != nullptr && nrm > 0.0) {
        seed->col(k) = (inv / nrm) * residuals.col(k);
      }
      // nrm == 0: zero subgradient
    }
  }
  return acc * inv;
}

}  // namespace

LossParts koopman_loss(const KoopmanModel& model, const TransitionBatch& batch,
                       const TrainHyper& hyper) {
  hyper.validate();
  model.validate();
  if (batch.size() == 0) throw InvalidInputError("koopman_loss: empty batch");

  const Eigen::MatrixXd z1 = model.encoder.forward_batch(batch.x);
  const Eigen::MatrixXd z2 = model.encoder.forward_batch(batch.x_next);
  const Eigen::MatrixXd x_rec = model.decoder.forward_batch(z1);

  LossParts parts;
  parts.l_z = norm_mean(z2 - model.A * z1 - model.B * batch.u, hyper.squared_norms, nullptr);
  parts.l_pred =
      norm_mean(batch.y - model.C * z1 - model.D * batch.u, hyper.squared_norms, nullptr);
  parts.l_rec = norm_mean(x_rec - batch.x, hyper.squared_norms, nullptr);
  parts.total = hyper.lambda1 * parts.l_z + hyper.lambda2 * parts.l_pred +
                hyper.lambda3 * parts.l_rec;
  return parts;
}

ModelGrads loss_gradients(const KoopmanModel& model, const TransitionBatch& batch,
                          const TrainHyper& hyper, LossParts* parts_out) {
  hyper.validate();
  model.validate();
  if (batch.size() == 0) throw InvalidInputError("loss_gradients: empty batch");

  MlpNetwork::Cache enc_cache_x, enc_cache_xn, dec_cache;
  const Eigen::MatrixXd z1 = model.encoder.forward_batch(batch.x, enc_cache_x);
  const Eigen::MatrixXd z2 = model.encoder.forward_batch(batch.x_next, enc_cache_xn);
  const Eigen::MatrixXd x_rec = model.decoder.forward_batch(z1, dec_cache);

  const Eigen::MatrixXd r_z = z2 - model.A * z1 - model.B * batch.u;
  const Eigen::MatrixXd r_pred = batch.y - model.C * z1 - model.D * batch.u;
  const Eigen::MatrixXd r_rec = x_rec - batch.x;

  Eigen::MatrixXd seed_z, seed_pred, seed_rec;
  LossParts parts;
  parts.l_z = norm_mean(r_z, hyper.squared_norms, &seed_z);
  parts.l_pred = norm_mean(r_pred, hyper.squared_norms, &seed_pred);
  parts.l_rec = norm_mean(r_rec, hyper.squared_norms, &seed_rec);
  parts.total = hyper.lambda1 * parts.l_z + hyper.lambda2 * parts.l_pred +
                hyper.lambda3 * parts.l_rec;
  if (parts_out != nullptr) *parts_out = parts;

  ModelGrads grads;
  grads.encoder = model.encoder.zero_grads();
  grads.decoder = model.decoder.zero_grads();

  // Lifted matrices.
  grads.A = -hyper.lambda1 * (seed_z * z1.transpose());
  grads.B = -hyper.lambda1 * (seed_z * batch.u.transpose());
  grads.C = -hyper.lambda2 * (seed_pred * z1.transpose());
  grads.D = -hyper.lambda2 * (seed_pred * batch.u.transpose());

  // Decoder, seeded by the reconstruction residual.
  const Eigen::MatrixXd d_z1_rec =
      model.decoder.backward_batch(dec_cache, hyper.lambda3 * seed_rec, grads.decoder);

  // Encoder at x(k): reconstruction path + dynamic loss (-A' seed) +
  // prediction loss (-C' seed).
  Eigen::MatrixXd d_z1 = d_z1_rec;
  d_z1.noalias() -= hyper.lambda1 * (model.A.transpose() * seed_z);
  d_z1.noalias() -= hyper.lambda2 * (model.C.transpose() * seed_pred);
  model.encoder.backward_batch(enc_cache_x, d_z1, grads.encoder);

  // Encoder at x(k+1): dynamic loss, positive sign.
  model.encoder.backward_batch(enc_cache_xn, hyper.lambda1 * seed_z, grads.encoder);

  return grads;
}

namespace {

long parameter_count(const KoopmanModel& model) {
  long count = 0;
  for (const auto& l : model.encoder.layers()) count += l.weight.size() + l.bias.size();
  for (const auto& l : model.decoder.layers()) count += l.weight.size() + l.bias.size();
  count += model.A.size() + model.B.size() + model.C.size() + model.D.size();
  return count;
}

void pack_matrix(const Eigen::MatrixXd& m, Eigen::VectorXd& v, long& at) {
  for (long j = 0; j < m.cols(); ++j) {
    for (long i = 0; i < m.rows(); ++i) v[at++] = m(i, j);
  }
}

void unpack_matrix(const Eigen::VectorXd& v, Eigen::MatrixXd& m, long& at) {
  for (long j = 0; j < m.cols(); ++j) {
    for (long i = 0; i < m.rows(); ++i) m(i, j) = v[at++];
  }
}

}  // namespace

Eigen::VectorXd pack_parameters(const KoopmanModel& model) {
  Eigen::VectorXd v(parameter_count(model));
  long at = 0;
  for (const auto& l : model.encoder.layers()) {
    pack_matrix(l.weight, v, at);
    Eigen::MatrixXd b = l.bias;
    pack_matrix(b, v, at);
  }
  for (const auto& l : model.decoder.layers()) {
    pack_matrix(l.weight, v, at);
    Eigen::MatrixXd b = l.bias;
    pack_matrix(b, v, at);
  }
  pack_matrix(model.A, v, at);
  pack_matrix(model.B, v, at);
  pack_matrix(model.C, v, at);
  pack_matrix(model.D, v, at);
  return v;
}

void unpack_parameters(const Eigen::VectorXd& v, KoopmanModel& model) {
  long at = 0;
  for (auto& l : model.encoder.layers()) {
    unpack_matrix(v, l.weight, at);
    Eigen::MatrixXd b = l.bias;
    unpack_matrix(v, b, at);
    l.bias = b;
  }
  for (auto& l : model.decoder.layers()) {
    unpack_matrix(v, l.weight, at);
    Eigen::MatrixXd b = l.bias;
    unpack_matrix(v, b, at);
    l.bias = b;
  }
  unpack_matrix(v, model.A, at);
  unpack_matrix(v, model.B, at);
  unpack_matrix(v, model.C, at);
  unpack_matrix(v, model.D, at);
  if (at != v.size()) throw InvalidInputError("unpack_parameters: size mismatch");
}

Eigen::VectorXd pack_gradients(const ModelGrads& grads) {
  long count = 0;
  for (const auto& l : grads.encoder) count += l.weight.size() + l.bias.size();
  for (const auto& l : grads.decoder) count += l.weight.size() + l.bias.size();
  count += grads.A.size() + grads.B.size() + grads.C.size() + grads.D.size();
  Eigen::VectorXd v(count);
  long at = 0;
  for (const auto& l : grads.encoder) {
    pack_matrix(l.weight, v, at);
    Eigen::MatrixXd b = l.bias;
    pack_matrix(b, v, at);
  }
  for (const auto& l : grads.decoder) {
    pack_matrix(l.weight, v, at);
    Eigen::MatrixXd b = l.bias;
    pack_matrix(b, v, at);
  }
  pack_matrix(grads.A, v, at);
  pack_matrix(grads.B, v, at);
  pack_matrix(grads.C, v, at);
  pack_matrix(grads.D, v, at);
  return v;
}

}  // namespace koopcert
