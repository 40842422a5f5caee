// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "koopcert/dataset.hpp"
#include "koopcert/koopman_model.hpp"

namespace koopcert {

/// Worst-case model-vs-data errors over the evaluation set:
/// delta_c = max_j |psi(phi(x_j)) - x_j|, delta_r = max_j |y~_j - y_j|.
struct ModelErrors {
  double delta_c = 0.0;
  double delta_r = 0.0;
  long argmax_c = -1;
  long argmax_r = -1;
  std::vector<double> state_error_histogram;   // 20 bins up to delta_c
  std::vector<double> output_error_histogram;  // 20 bins up to delta_r
};

ModelErrors compute_model_errors(const KoopmanModel& model, const EvalSet& eval);

/// All constants consumed by the transfer thresholds and the perturbation
/// LMIs. Raw fields are set by the caller; derived fields are filled by
/// assemble_error_budget and the struct is treated as immutable afterwards.
struct ErrorBudget {
  // raw
  double delta_d = 0.0;      // data noise bound
  double delta_x = 0.0;      // covering radius actually used
  double delta_c = 0.0;
  double delta_r = 0.0;
  double l_phi_x = 0.0;      // Lipschitz of encoder w.r.t. x
  double l_psi_z = 0.0;      // Lipschitz of decoder w.r.t. z
  double l_psiphi_x = 0.0;   // Lipschitz of decoder(encoder(.))
  double l_g_x = 0.0;        // Lipschitz of the output map
  double phi0_norm = 0.0;
  double psi0_norm = 0.0;
  double eta = 1.0;
  double tau = 1.0;
  // derived
  double delta_1 = 0.0;  // delta_d + delta_r + l_g_x * delta_x
  double delta_2 = 0.0;  // l_phi_x * delta_x
  double c_phi = 0.0;    // 2 * eta * l_phi_x + phi0_norm
  double delta_b = 0.0;  // l_psiphi_x * delta_x + delta_c + delta_d + delta_x
  // provenance notes, e.g. "certified" / "sampled*1.1"
  std::string lipschitz_provenance;
  std::string delta_x_convention;  // "l2" or "half-spacing"

  double delta_g(double c_norm) const { return delta_1 + delta_2 * c_norm; }
  /// eta - delta_b - psi0_norm; positive by construction.
  double margin() const { return eta - delta_b - psi0_norm; }

  void save(const std::filesystem::path& path) const;
  static ErrorBudget load(const std::filesystem::path& path);
};

/// Fills the derived fields and enforces admissibility: all deltas
/// non-negative, tau > 0, and eta > delta_b + psi0_norm. On violation of
/// the last inequality the error names the minimum admissible eta.
ErrorBudget assemble_error_budget(ErrorBudget raw);

}  // namespace koopcert
