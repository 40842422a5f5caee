// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/lipschitz.hpp"

#include <cmath>
#include <limits>

#include "koopcert/errors.hpp"
#include "koopcert/matrix_ops.hpp"
#include "koopcert/rng.hpp"

namespace koopcert {

double certified_mlp_lipschitz(const MlpNetwork& net) {
  double bound = 1.0;
  for (const auto& layer : net.layers()) bound *= spectral_norm(layer.weight);
  return bound;
}

double sampled_lipschitz(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn,
                         const std::vector<Interval>& domain, long n_samples,
                         std::uint64_t seed) {
  if (n_samples < 2) throw InvalidInputError("sampled_lipschitz: need at least 2 samples");
  const int dim = static_cast<int>(domain.size());

  Rng rng(seed);
  Eigen::MatrixXd pts(dim, n_samples);
  for (long j = 0; j < n_samples; ++j) {
    for (int d = 0; d < dim; ++d) pts(d, j) = rng.uniform(domain[d].lo, domain[d].hi);
  }
  std::vector<Eigen::VectorXd> values(n_samples);
  for (long j = 0; j < n_samples; ++j) values[j] = fn(pts.col(j));

  double best = 0.0;
  const auto consider = [&](long a, long b) {
    if (a == b) return;
    const double dist = (pts.col(a) - pts.col(b)).norm();
    if (dist == 0.0) return;
    best = std::max(best, (values[a] - values[b]).norm() / dist);
  };

  // Random pairs.
  for (long k = 0; k < n_samples; ++k) {
    consider(static_cast<long>(rng.uniform_index(n_samples)),
             static_cast<long>(rng.uniform_index(n_samples)));
  }
  // Nearest-neighbor pairs.
  for (long a = 0; a < n_samples; ++a) {
    long nearest = -1;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (long b = 0; b < n_samples; ++b) {
      if (a == b) continue;
      const double d2 = (pts.col(a) - pts.col(b)).squaredNorm();
      if (d2 < nearest_dist && d2 > 0.0) {
        nearest_dist = d2;
        nearest = b;
      }
    }
    if (nearest >= 0) consider(a, nearest);
  }
  return best;
}

std::pair<double, double> network_origin_values(const KoopmanModel& model) {
  model.validate();
  const Eigen::VectorXd phi0 =
      model.encoder.forward(Eigen::VectorXd::Zero(model.state_dim()));
  const Eigen::VectorXd psi0 =
      model.decoder.forward(Eigen::VectorXd::Zero(model.lift_dim()));
  return {phi0.norm(), psi0.norm()};
}

}  // namespace koopcert
