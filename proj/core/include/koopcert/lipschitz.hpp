// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "koopcert/dataset.hpp"
#include "koopcert/koopman_model.hpp"

namespace koopcert {

/// Certified upper bound and/or sampled lower estimate for one function.
struct LipschitzReport {
  double certified_upper = -1.0;  // < 0 when no certified bound exists
  double sampled_lower = 0.0;
  long n_samples = 0;
  std::vector<Interval> domain;
  std::uint64_t seed = 0;

  bool has_certified() const { return certified_upper >= 0.0; }
};

/// Product of layer spectral norms (activations are 1-Lipschitz). A valid
/// upper bound for any MLP of this form; looser than SDP-based certificates
/// but self-contained, and a larger constant only tightens the transfer
/// thresholds.
double certified_mlp_lipschitz(const MlpNetwork& net);

/// Max difference quotient over sampled pairs: a lower estimate of the true
/// constant. Pairs are formed both at random and between nearest sampled
/// neighbors (near pairs probe local slope). Zero-distance pairs are
/// skipped.
double sampled_lipschitz(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn,
                         const std::vector<Interval>& domain, long n_samples,
                         std::uint64_t seed);

/// (|phi(0)|, |psi(0)|): encoder/decoder output norms at the origin, used
/// directly by the transfer thresholds.
std::pair<double, double> network_origin_values(const KoopmanModel& model);

}  // namespace koopcert
