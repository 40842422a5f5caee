// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/error_budget.hpp"

#include <algorithm>
#include <cmath>

#include "koopcert/errors.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

namespace {

std::vector<double> histogram(const Eigen::VectorXd& values, double hi, int bins) {
  std::vector<double> h(bins, 0.0);
  if (hi <= 0.0) return h;
  for (long i = 0; i < values.size(); ++i) {
    int b = static_cast<int>(std::floor(values[i] / hi * bins));
    b = std::clamp(b, 0, bins - 1);
    h[b] += 1.0;
  }
  return h;
}

}  // namespace

ModelErrors compute_model_errors(const KoopmanModel& model, const EvalSet& eval) {
  model.validate();
  if (eval.size() == 0) throw InvalidInputError("compute_model_errors: empty evaluation set");

  const Eigen::MatrixXd z = model.encoder.forward_batch(eval.points);
  const Eigen::MatrixXd x_rec = model.decoder.forward_batch(z);
  const Eigen::MatrixXd y_pred = model.C * z + model.D * eval.inputs;

  const Eigen::VectorXd state_err = (x_rec - eval.points).colwise().norm();
  const Eigen::VectorXd output_err = (y_pred - eval.outputs).colwise().norm();

  ModelErrors errs;
  Eigen::Index arg_c, arg_r;
  errs.delta_c = state_err.maxCoeff(&arg_c);
  errs.delta_r = output_err.maxCoeff(&arg_r);
  errs.argmax_c = arg_c;
  errs.argmax_r = arg_r;
  errs.state_error_histogram = histogram(state_err, errs.delta_c, 20);
  errs.output_error_histogram = histogram(output_err, errs.delta_r, 20);
  return errs;
}

ErrorBudget assemble_error_budget(ErrorBudget raw) {
  const double deltas[] = {raw.delta_d, raw.delta_x, raw.delta_c, raw.delta_r};
  for (double d : deltas) {
    if (d < 0.0 || !std::isfinite(d)) {
      throw ConfigError("error budget: deltas must be finite and non-negative");
    }
  }
  const double lips[] = {raw.l_phi_x, raw.l_psi_z, raw.l_psiphi_x, raw.l_g_x};
  for (double l : lips) {
    if (l < 0.0 || !std::isfinite(l)) {
      throw ConfigError("error budget: Lipschitz constants must be finite and non-negative");
    }
  }
  if (raw.eta <= 0.0) throw ConfigError("error budget: eta must be positive");
  if (raw.tau <= 0.0) throw ConfigError("error budget: tau must be positive");

  raw.delta_1 = raw.delta_d + raw.delta_r + raw.l_g_x * raw.delta_x;
  raw.delta_2 = raw.l_phi_x * raw.delta_x;
  raw.c_phi = 2.0 * raw.eta * raw.l_phi_x + raw.phi0_norm;
  raw.delta_b = raw.l_psiphi_x * raw.delta_x + raw.delta_c + raw.delta_d + raw.delta_x;

  const double min_eta = raw.delta_b + raw.psi0_norm;
  if (raw.eta <= min_eta) {
    throw ConfigError(
        "error budget: eta must exceed delta_b + |psi(0)| = " + format_full(min_eta) +
        " (eta = " + format_full(raw.eta) + "); increase eta or improve the model fit");
  }
  return raw;
}

void ErrorBudget::save(const std::filesystem::path& path) const {
  Manifest m;
  m.set("delta_d", delta_d);
  m.set("delta_x", delta_x);
  m.set("delta_c", delta_c);
  m.set("delta_r", delta_r);
  m.set("l_phi_x", l_phi_x);
  m.set("l_psi_z", l_psi_z);
  m.set("l_psiphi_x", l_psiphi_x);
  m.set("l_g_x", l_g_x);
  m.set("phi0_norm", phi0_norm);
  m.set("psi0_norm", psi0_norm);
  m.set("eta", eta);
  m.set("tau", tau);
  m.set("delta_1", delta_1);
  m.set("delta_2", delta_2);
  m.set("c_phi", c_phi);
  m.set("delta_b", delta_b);
  m.set("lipschitz_provenance", lipschitz_provenance);
  m.set("delta_x_convention", delta_x_convention);
  m.save(path);
}

ErrorBudget ErrorBudget::load(const std::filesystem::path& path) {
  const Manifest m = Manifest::load(path);
  ErrorBudget b;
  b.delta_d = m.get_double("delta_d");
  b.delta_x = m.get_double("delta_x");
  b.delta_c = m.get_double("delta_c");
  b.delta_r = m.get_double("delta_r");
  b.l_phi_x = m.get_double("l_phi_x");
  b.l_psi_z = m.get_double("l_psi_z");
  b.l_psiphi_x = m.get_double("l_psiphi_x");
  b.l_g_x = m.get_double("l_g_x");
  b.phi0_norm = m.get_double("phi0_norm");
  b.psi0_norm = m.get_double("psi0_norm");
  b.eta = m.get_double("eta");
  b.tau = m.get_double("tau");
  b.lipschitz_provenance = m.get("lipschitz_provenance");
  b.delta_x_convention = m.get("delta_x_convention");
  b = assemble_error_budget(b);
  // Serialized derived values must agree with the re-derivation.
  const double rederived[] = {b.delta_1, b.delta_2, b.c_phi, b.delta_b};
  const double stored[] = {m.get_double("delta_1"), m.get_double("delta_2"),
                           m.get_double("c_phi"), m.get_double("delta_b")};
  for (int i = 0; i < 4; ++i) {
    if (rederived[i] != stored[i]) {
      throw IoError("error budget: derived field mismatch on load");
    }
  }
  return b;
}

}  // namespace koopcert
