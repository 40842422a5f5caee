// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/koopman_model.hpp"

#include <sstream>
#include <string>

#include "koopcert/errors.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

void KoopmanModel::validate() const {
  const int n = encoder.input_dim();
  const int N = encoder.output_dim();
  if (decoder.input_dim() != N || decoder.output_dim() != n) {
    throw InvalidInputError("KoopmanModel: decoder does not invert the encoder dimensions");
  }
  if (N <= n) {
    throw InvalidInputError("KoopmanModel: lift dimension must exceed the state dimension");
  }
  if (A.rows() != N || A.cols() != N) throw InvalidInputError("KoopmanModel: A must be NxN");
  if (B.rows() != N) throw InvalidInputError("KoopmanModel: B must have N rows");
  if (C.cols() != N) throw InvalidInputError("KoopmanModel: C must have N columns");
  if (D.rows() != C.rows() || D.cols() != B.cols()) {
    throw InvalidInputError("KoopmanModel: D dimensions inconsistent with B and C");
  }
}

LiftedRollout lifted_rollout_from(const KoopmanModel& model, const Eigen::VectorXd& z0,
                                  const Eigen::MatrixXd& inputs) {
  if (z0.size() != model.lift_dim()) {
    throw InvalidInputError("lifted_rollout: z0 dimension mismatch");
  }
  if (inputs.rows() != model.input_dim()) {
    throw InvalidInputError("lifted_rollout: input dimension mismatch");
  }
  const long K = inputs.cols();
  const int N = model.lift_dim();

  LiftedRollout roll;
  roll.lifted.resize(N, K);
  Eigen::VectorXd z = z0;
  constexpr double kBlowUp = 1e12;
  for (long k = 0; k < K; ++k) {
    if (!z.allFinite() || z.cwiseAbs().maxCoeff() > kBlowUp) {
      throw DivergenceError("lifted_rollout: lifted state diverged", k);
    }
    roll.lifted.col(k) = z;
    if (k + 1 < K) {
      z = model.A * z + model.B * inputs.col(k);
    }
  }
  roll.decoded_states = model.decoder.forward_batch(roll.lifted);
  roll.outputs = model.C * roll.lifted + model.D * inputs;
  return roll;
}

LiftedRollout lifted_rollout(const KoopmanModel& model, const Eigen::VectorXd& x0,
                             const Eigen::MatrixXd& inputs) {
  if (x0.size() != model.state_dim()) {
    throw InvalidInputError("lifted_rollout: x0 dimension mismatch");
  }
  return lifted_rollout_from(model, model.encoder.forward(x0), inputs);
}

namespace {

void put_net(Manifest& m, const std::string& prefix, const MlpNetwork& net) {
  m.set(prefix + ".layers", static_cast<long>(net.num_layers()));
  m.set(prefix + ".activation", std::string(net.activation() == Activation::Tanh ? "tanh" : "relu"));
  for (int i = 0; i < net.num_layers(); ++i) {
    const auto& l = net.layers()[i];
    const std::string key = prefix + ".l" + std::to_string(i);
    m.set(key + ".rows", static_cast<long>(l.weight.rows()));
    m.set(key + ".cols", static_cast<long>(l.weight.cols()));
  }
}

}  // namespace

void KoopmanModel::save_checkpoint(const std::filesystem::path& path) const {
  validate();
  Manifest m;
  m.set("format", std::string("koopcert-checkpoint-v1"));
  m.set("n", static_cast<long>(state_dim()));
  m.set("N", static_cast<long>(lift_dim()));
  m.set("m", static_cast<long>(input_dim()));
  m.set("p", static_cast<long>(output_dim()));
  put_net(m, "encoder", encoder);
  put_net(m, "decoder", decoder);

  std::string out = m.serialize();
  out += "#matrices\n";
  for (const auto& l : encoder.layers()) {
    out += matrix_to_text(l.weight);
    out += matrix_to_text(l.bias);
  }
  for (const auto& l : decoder.layers()) {
    out += matrix_to_text(l.weight);
    out += matrix_to_text(l.bias);
  }
  out += matrix_to_text(A);
  out += matrix_to_text(B);
  out += matrix_to_text(C);
  out += matrix_to_text(D);
  write_text_file(path, out);
}

namespace {

Eigen::MatrixXd read_matrix(std::istringstream& in, long rows, long cols) {
  Eigen::MatrixXd m(rows, cols);
  std::string tok;
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!(in >> tok)) throw IoError("checkpoint: matrix data ended early");
      m(i, j) = parse_double(tok);
    }
  }
  return m;
}

MlpNetwork read_net(const Manifest& m, const std::string& prefix, std::istringstream& body) {
  const long L = m.get_long(prefix + ".layers");
  const std::string act_name = m.get(prefix + ".activation");
  const Activation act = act_name == "tanh" ? Activation::Tanh : Activation::Relu;
  std::vector<MlpLayer> layers;
  for (long i = 0; i < L; ++i) {
    const std::string key = prefix + ".l" + std::to_string(i);
    const long rows = m.get_long(key + ".rows");
    const long cols = m.get_long(key + ".cols");
    MlpLayer l;
    l.weight = read_matrix(body, rows, cols);
    l.bias = read_matrix(body, rows, 1);
    layers.push_back(std::move(l));
  }
  return MlpNetwork(std::move(layers), act);
}

}  // namespace

KoopmanModel KoopmanModel::load_checkpoint(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto marker = text.find("#matrices\n");
  if (marker == std::string::npos) throw IoError("checkpoint: missing matrix section");
  const Manifest m = Manifest::parse(text.substr(0, marker));
  if (m.get("format") != "koopcert-checkpoint-v1") {
    throw IoError("checkpoint: unknown format tag");
  }
  std::istringstream body(text.substr(marker + 10));

  KoopmanModel model;
  model.encoder = read_net(m, "encoder", body);
  model.decoder = read_net(m, "decoder", body);
  const long N = m.get_long("N");
  const long in_dim = m.get_long("m");
  const long out_dim = m.get_long("p");
  model.A = read_matrix(body, N, N);
  model.B = read_matrix(body, N, in_dim);
  model.C = read_matrix(body, out_dim, N);
  model.D = read_matrix(body, out_dim, in_dim);
  model.validate();
  return model;
}

}  // namespace koopcert
