// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles used by the tests. These deliberately avoid the
// library's own numerics: eigenvalues come from inertia bisection, spectral
// norms from power iteration, network outputs from a straight-line loop
// re-evaluation, and the small perturbation programs from grid search.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "koopcert/koopman_loss.hpp"
#include "koopcert/matrix_ops.hpp"
#include "koopcert/mlp.hpp"

namespace oracles {

/// Number of eigenvalues of M strictly below lambda, by the inertia of
/// M - lambda I under symmetric elimination (Sylvester's law). Breakdown
/// pivots are nudged; good enough for well-separated test spectra.
inline int count_eigenvalues_below(const Eigen::MatrixXd& m, double lambda) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd a = m - lambda * Eigen::MatrixXd::Identity(n, n);
  int negatives = 0;
  for (int k = 0; k < n; ++k) {
    double pivot = a(k, k);
    if (std::abs(pivot) < 1e-13) pivot = pivot >= 0.0 ? 1e-13 : -1e-13;
    if (pivot < 0.0) ++negatives;
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / pivot;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return negatives;
}

/// Smallest eigenvalue to tolerance `tol` via bisection on the inertia
/// count, bracketed by Gershgorin bounds.
inline double min_eigenvalue_bisection(const Eigen::MatrixXd& m, double tol = 1e-11) {
  const int n = static_cast<int>(m.rows());
  double lo = m(0, 0), hi = m(0, 0);
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i != j) radius += std::abs(m(i, j));
    }
    lo = std::min(lo, m(i, i) - radius);
    hi = std::max(hi, m(i, i) + radius);
  }
  lo -= 1.0;
  hi += 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (count_eigenvalues_below(m, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Largest singular value via power iteration on M'M.
inline double spectral_norm_power_iteration(const Eigen::MatrixXd& m, int iters = 20000) {
  const Eigen::MatrixXd mtm = m.transpose() * m;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(mtm.rows());
  v += 0.001 * Eigen::VectorXd::LinSpaced(mtm.rows(), 0.0, 1.0);  // break symmetry
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Eigen::VectorXd w = mtm * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    lambda = norm;
    v = w;
  }
  return std::sqrt(lambda);
}

/// Straight-line re-evaluation of an MLP forward pass with plain loops.
inline Eigen::VectorXd mlp_forward_reference(const koopcert::MlpNetwork& net,
                                             const Eigen::VectorXd& x) {
  std::vector<double> act(x.data(), x.data() + x.size());
  const auto& layers = net.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& w = layers[li].weight;
    const auto& b = layers[li].bias;
    std::vector<double> next(w.rows());
    for (long i = 0; i < w.rows(); ++i) {
      double acc = b[i];
      for (long j = 0; j < w.cols(); ++j) acc += w(i, j) * act[j];
      if (li + 1 < layers.size()) {
        acc = net.activation() == koopcert::Activation::Tanh ? std::tanh(acc)
                                                             : std::max(acc, 0.0);
      }
      next[i] = acc;
    }
    act = std::move(next);
  }
  return Eigen::Map<Eigen::VectorXd>(act.data(), static_cast<long>(act.size()));
}

/// Central finite differences of the total Koopman loss with respect to the
/// packed parameter vector.
inline Eigen::VectorXd finite_difference_gradient(const koopcert::KoopmanModel& model,
                                                  const koopcert::TransitionBatch& batch,
                                                  const koopcert::TrainHyper& hyper,
                                                  double step = 1e-5) {
  koopcert::KoopmanModel work = model;
  const Eigen::VectorXd base = koopcert::pack_parameters(model);
  Eigen::VectorXd grad(base.size());
  for (long i = 0; i < base.size(); ++i) {
    Eigen::VectorXd v = base;
    v[i] = base[i] + step;
    koopcert::unpack_parameters(v, work);
    const double up = koopcert::koopman_loss(work, batch, hyper).total;
    v[i] = base[i] - step;
    koopcert::unpack_parameters(v, work);
    const double down = koopcert::koopman_loss(work, batch, hyper).total;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

/// Brute-force reference for the scalar-lift (N = m = p = 1) perturbation
/// program: rho, nu and the norm slacks are eliminated at their minimal
/// feasible values, the remaining five scalars are grid searched with
/// progressive zooming, then polished by coordinate descent.
struct ToyAnchors {
  double a, b, c, d;
  double lambda_a, lambda_b, lambda_c, lambda_d;
  double q, s, r, tau;      // supply (q < 0 or q = 0)
  double eps_strict;
  double p_min;
  // budget-derived constants
  double delta_1, delta_2, margin, lpsi2, qn_c_eff, qn_tau_term;
};

inline double toy_rho_floor(const ToyAnchors& t, double n_c) {
  // rho >= lpsi2/margin^2 * (dg^2 * (|Q|+tau+1) + |Q| c_eff dg N_C)
  const double dg = t.delta_1 + t.delta_2 * n_c;
  return t.lpsi2 / (t.margin * t.margin) * (dg * dg * t.qn_tau_term + t.qn_c_eff * dg * n_c);
}

inline bool toy_feasible(const ToyAnchors& t, double p, double x, double y, double c,
                         double d, double* objective) {
  const double qn = std::abs(t.q);
  const double eps = t.eps_strict;
  const double n_c = std::abs(c) + eps;
  const double n_d = std::abs(d) + eps;
  double rho = std::max(toy_rho_floor(t, n_c) + eps, 0.0);
  double nu = t.s * t.s / t.tau + eps;
  if (t.q < 0.0) {
    const double corner = std::min(1.0 / qn, 1.0 / (qn * qn)) - eps;
    if (corner <= 0.0) return false;
    nu += n_d * n_d / corner;
  }
  if (p < t.p_min) return false;

  // dissipativity block (shifted by eps on the diagonal)
  Eigen::MatrixXd blk;
  if (t.q < 0.0) {
    blk.resize(4, 4);
    blk << p - rho, c * t.s, c, x,
           c * t.s, 2.0 * d * t.s + t.r - nu, d, y,
           c, d, -1.0 / t.q, 0.0,
           x, y, 0.0, p;
  } else {
    blk.resize(3, 3);
    blk << p - rho, c * t.s, x,
           c * t.s, 2.0 * d * t.s + t.r - nu, y,
           x, y, p;
  }
  blk.diagonal().array() -= eps;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blk, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < 0.0) return false;
  if (objective != nullptr) {
    const double ra = x - p * t.a;
    const double rb = y - p * t.b;
    const double rc = c - t.c;
    const double rd = d - t.d;
    *objective = t.lambda_a * ra * ra + t.lambda_b * rb * rb + t.lambda_c * rc * rc +
                 t.lambda_d * rd * rd;
  }
  return true;
}

inline double toy_grid_search(const ToyAnchors& t) {
  double lo[5] = {t.p_min, -5.0, -5.0, -3.0, -3.0};  // p, x, y, c, d
  double hi[5] = {4.0, 5.0, 5.0, 3.0, 3.0};
  double best_obj = std::numeric_limits<double>::infinity();
  double best[5] = {1.0, 0.0, 0.0, 0.0, 0.0};

  for (int round = 0; round < 6; ++round) {
    const int pts = 13;
    bool found = false;
    double v[5];
    for (int i0 = 0; i0 < pts; ++i0) {
      v[0] = lo[0] + (hi[0] - lo[0]) * i0 / (pts - 1.0);
      for (int i1 = 0; i1 < pts; ++i1) {
        v[1] = lo[1] + (hi[1] - lo[1]) * i1 / (pts - 1.0);
        for (int i2 = 0; i2 < pts; ++i2) {
          v[2] = lo[2] + (hi[2] - lo[2]) * i2 / (pts - 1.0);
          for (int i3 = 0; i3 < pts; ++i3) {
            v[3] = lo[3] + (hi[3] - lo[3]) * i3 / (pts - 1.0);
            for (int i4 = 0; i4 < pts; ++i4) {
              v[4] = lo[4] + (hi[4] - lo[4]) * i4 / (pts - 1.0);
              double obj;
              if (toy_feasible(t, v[0], v[1], v[2], v[3], v[4], &obj) && obj < best_obj) {
                best_obj = obj;
                for (int k = 0; k < 5; ++k) best[k] = v[k];
                found = true;
              }
            }
          }
        }
      }
    }
    if (!found && round == 0) return best_obj;  // nothing feasible in the box
    for (int k = 0; k < 5; ++k) {
      const double span = (hi[k] - lo[k]) / (pts - 1.0) * 2.0;
      lo[k] = best[k] - span;
      hi[k] = best[k] + span;
    }
    lo[0] = std::max(lo[0], t.p_min);
  }

  // coordinate-descent polish; the extra direction moves (p, x, y) jointly
  // along the residual-preserving ray x = p a, y = p b.
  double step = 1e-3;
  while (step > 1e-7) {
    bool improved = false;
    for (int k = 0; k < 6; ++k) {
      for (double sgn : {-1.0, 1.0}) {
        double cand[5] = {best[0], best[1], best[2], best[3], best[4]};
        if (k < 5) {
          cand[k] += sgn * step;
        } else {
          cand[0] += sgn * step;
          cand[1] += sgn * step * t.a;
          cand[2] += sgn * step * t.b;
        }
        if (cand[0] < t.p_min) continue;
        double obj;
        if (toy_feasible(t, cand[0], cand[1], cand[2], cand[3], cand[4], &obj) &&
            obj < best_obj) {
          best_obj = obj;
          for (int j = 0; j < 5; ++j) best[j] = cand[j];
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_obj;
}

/// Fixed-step explicit Euler integration of the continuous Duffing model,
/// used as a refined-step reference for the discretized simulator.
inline Eigen::Vector2d duffing_euler_reference(const Eigen::Vector2d& x0,
                                               const std::function<double(double)>& input,
                                               double t_end, double dt) {
  Eigen::Vector2d x = x0;
  double t = 0.0;
  const long steps = static_cast<long>(std::llround(t_end / dt));
  for (long k = 0; k < steps; ++k) {
    const double u = input(t);
    const double dx1 = x[1];
    const double dx2 = -x[1] - (1.0 + x[0] * x[0]) * x[0] + u;
    x[0] += dt * dx1;
    x[1] += dt * dx2;
    t += dt;
  }
  return x;
}

}  // namespace oracles
