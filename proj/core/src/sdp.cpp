// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "koopcert/errors.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

namespace {

// f(v) = 0.5 v'H v + g'v + c, assembled from weighted affine residuals.
struct Quadratic {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  double c = 0.0;

  double value(const Eigen::VectorXd& v) const {
    return 0.5 * v.dot(H * v) + g.dot(v) + c;
  }
  Eigen::VectorXd grad(const Eigen::VectorXd& v) const { return H * v + g; }
};

struct SparseTerm {
  long var;
  double coef;
};

void add_residual(Quadratic& q, const std::vector<SparseTerm>& a, double rhs, double weight) {
  // weight * (a'v - rhs)^2
  for (const auto& t1 : a) {
    for (const auto& t2 : a) {
      q.H(t1.var, t2.var) += 2.0 * weight * t1.coef * t2.coef;
    }
    q.g[t1.var] += -2.0 * weight * rhs * t1.coef;
  }
  q.c += weight * rhs * rhs;
}

Quadratic build_objective(const SdpProblem& prob) {
  const VarLayout& lay = prob.lmi.layout;
  const long nv = lay.count();
  Quadratic q;
  q.H = Eigen::MatrixXd::Zero(nv, nv);
  q.g = Eigen::VectorXd::Zero(nv);

  std::vector<SparseTerm> a;
  // |X - P A_ini|_F^2
  for (int i = 0; i < lay.N; ++i) {
    for (int j = 0; j < lay.N; ++j) {
      a.clear();
      a.push_back({lay.x_var(i, j), 1.0});
      for (int k = 0; k < lay.N; ++k) {
        const double coef = -prob.a_ini(k, j);
        if (coef != 0.0) a.push_back({lay.p_var(i, k), coef});
      }
      add_residual(q, a, 0.0, prob.lambda_a);
    }
  }
  // |Y - P B_ini|_F^2
  for (int i = 0; i < lay.N; ++i) {
    for (int k = 0; k < lay.m; ++k) {
      a.clear();
      a.push_back({lay.y_var(i, k), 1.0});
      for (int l = 0; l < lay.N; ++l) {
        const double coef = -prob.b_ini(l, k);
        if (coef != 0.0) a.push_back({lay.p_var(i, l), coef});
      }
      add_residual(q, a, 0.0, prob.lambda_b);
    }
  }
  // |C - C_ini|_F^2, |D - D_ini|_F^2
  for (int l = 0; l < lay.p; ++l) {
    for (int i = 0; i < lay.N; ++i) {
      a = {{lay.c_var(l, i), 1.0}};
      add_residual(q, a, prob.c_ini(l, i), prob.lambda_c);
    }
    for (int k = 0; k < lay.m; ++k) {
      a = {{lay.d_var(l, k), 1.0}};
      add_residual(q, a, prob.d_ini(l, k), prob.lambda_d);
    }
  }
  return q;
}

AffineBlock scalar_bound(const std::string& name, long var, double coef, double constant) {
  // coef * v[var] + constant >= 0
  AffineBlock blk;
  blk.name = name;
  blk.size = 1;
  blk.constant = Eigen::MatrixXd::Constant(1, 1, constant);
  blk.entries.push_back({var, 0, 0, coef});
  return blk;
}

std::vector<AffineBlock> bound_blocks(const VarLayout& lay, const SdpBounds& bounds) {
  std::vector<AffineBlock> blocks;
  // P >= p_min I
  AffineBlock pfloor;
  pfloor.name = "bound-p-floor";
  pfloor.size = lay.N;
  pfloor.constant = -bounds.p_min * Eigen::MatrixXd::Identity(lay.N, lay.N);
  for (int i = 0; i < lay.N; ++i) {
    for (int j = i; j < lay.N; ++j) {
      pfloor.entries.push_back({lay.p_var(i, j), i, j, 1.0});
      if (i != j) pfloor.entries.push_back({lay.p_var(i, j), j, i, 1.0});
    }
  }
  blocks.push_back(std::move(pfloor));
  // trace(P) <= cap
  AffineBlock ptrace;
  ptrace.name = "bound-p-trace";
  ptrace.size = 1;
  ptrace.constant = Eigen::MatrixXd::Constant(1, 1, bounds.p_trace_cap);
  for (int i = 0; i < lay.N; ++i) ptrace.entries.push_back({lay.p_var(i, i), 0, 0, -1.0});
  blocks.push_back(std::move(ptrace));

  blocks.push_back(scalar_bound("bound-rho-lo", lay.rho_var(), 1.0, 0.0));
  blocks.push_back(scalar_bound("bound-rho-hi", lay.rho_var(), -1.0, bounds.rho_nu_cap));
  blocks.push_back(scalar_bound("bound-nu-lo", lay.nu_var(), 1.0, 0.0));
  blocks.push_back(scalar_bound("bound-nu-hi", lay.nu_var(), -1.0, bounds.rho_nu_cap));
  blocks.push_back(scalar_bound("bound-nc-lo", lay.nc_var(), 1.0, 0.0));
  blocks.push_back(scalar_bound("bound-nc-hi", lay.nc_var(), -1.0, bounds.slack_cap));
  blocks.push_back(scalar_bound("bound-nd-lo", lay.nd_var(), 1.0, 0.0));
  blocks.push_back(scalar_bound("bound-nd-hi", lay.nd_var(), -1.0, bounds.slack_cap));
  return blocks;
}

Eigen::VectorXd default_start(const SdpProblem& prob) {
  const VarLayout& lay = prob.lmi.layout;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(lay.count());
  for (int i = 0; i < lay.N; ++i) v[lay.p_var(i, i)] = 1.0;
  for (int i = 0; i < lay.N; ++i) {
    for (int j = 0; j < lay.N; ++j) v[lay.x_var(i, j)] = prob.a_ini(i, j);
    for (int k = 0; k < lay.m; ++k) v[lay.y_var(i, k)] = prob.b_ini(i, k);
  }
  for (int l = 0; l < lay.p; ++l) {
    for (int i = 0; i < lay.N; ++i) v[lay.c_var(l, i)] = prob.c_ini(l, i);
    for (int k = 0; k < lay.m; ++k) v[lay.d_var(l, k)] = prob.d_ini(l, k);
  }
  const double cap = prob.bounds.rho_nu_cap;
  v[lay.rho_var()] = std::min(1.0, 0.5 * cap);
  v[lay.nu_var()] = std::min(1.0, 0.5 * cap);
  const double c_norm = prob.c_ini.norm();
  const double d_norm = prob.d_ini.norm();
  v[lay.nc_var()] = std::min(c_norm + 1.0, 0.9 * prob.bounds.slack_cap);
  v[lay.nd_var()] = std::min(d_norm + 1.0, 0.9 * prob.bounds.slack_cap);
  return v;
}

// -------- barrier machinery --------

struct BlockFactors {
  std::vector<Eigen::MatrixXd> w;  // inverses of the block values
  double logdet_sum = 0.0;
};

bool factor_blocks(const std::vector<AffineBlock>& blocks, const Eigen::VectorXd& v,
                   BlockFactors* out) {
  if (out != nullptr) {
    out->w.assign(blocks.size(), Eigen::MatrixXd());
    out->logdet_sum = 0.0;
  }
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const Eigen::MatrixXd f = blocks[j].eval(v);
    Eigen::LLT<Eigen::MatrixXd> llt(f);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd& l = llt.matrixL();
    // Guard against LLT "succeeding" on a semidefinite borderline.
    double logdet = 0.0;
    for (int i = 0; i < f.rows(); ++i) {
      if (l(i, i) <= 0.0) return false;
      logdet += std::log(l(i, i));
    }
    if (out != nullptr) {
      out->logdet_sum += 2.0 * logdet;
      out->w[j] = llt.solve(Eigen::MatrixXd::Identity(f.rows(), f.rows()));
    }
  }
  return true;
}

void accumulate_barrier(const std::vector<AffineBlock>& blocks, const BlockFactors& factors,
                        Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& entries = blocks[j].entries;
    const Eigen::MatrixXd& w = factors.w[j];
    for (const auto& e : entries) {
      grad[e.var] -= e.coef * w(e.row, e.col);
    }
    const std::size_t ne = entries.size();
    for (std::size_t s = 0; s < ne; ++s) {
      const auto& e1 = entries[s];
      for (std::size_t t = 0; t < ne; ++t) {
        const auto& e2 = entries[t];
        // tr(W E_{a1 b1} W E_{a2 b2}) = W(b1, a2) * W(b2, a1)
        hess(e1.var, e2.var) += e1.coef * e2.coef * w(e1.col, e2.row) * w(e2.col, e1.row);
      }
    }
  }
}

long total_block_size(const std::vector<AffineBlock>& blocks) {
  long total = 0;
  for (const auto& b : blocks) total += b.size;
  return total;
}

struct NewtonBudget {
  long used = 0;
  long cap = 0;
  bool exhausted() const { return used >= cap; }
};

// Minimizes t * f(v) + barrier(v) over the strictly feasible region.
// `objective` supplies t*f value and gradient; `hess_obj` its Hessian.
// Returns false if no progress was possible (treated as centered).
struct CenterResult {
  bool hit_budget = false;
};

CenterResult center(const std::vector<AffineBlock>& blocks, const Quadratic* objective,
                    double t, Eigen::VectorXd& v, NewtonBudget& budget, long max_inner,
                    const SdpProblem* prob_for_trace, SdpSolution* sol, double gap_for_trace) {
  const long nv = v.size();
  CenterResult res;
  for (long inner = 0; inner < max_inner; ++inner) {
    if (budget.exhausted()) {
      res.hit_budget = true;
      return res;
    }
    ++budget.used;

    BlockFactors factors;
    if (!factor_blocks(blocks, v, &factors)) {
      throw InvalidInputError("sdp barrier: iterate left the feasible interior");
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(nv);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nv, nv);
    accumulate_barrier(blocks, factors, grad, hess);
    double merit = -factors.logdet_sum;
    if (objective != nullptr) {
      merit += t * objective->value(v);
      grad += t * objective->grad(v);
      hess += t * objective->H;
    }

    Eigen::VectorXd step;
    {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      step = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        hess.diagonal().array() += 1e-10 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
        Eigen::LDLT<Eigen::MatrixXd> ridge(hess);
        step = -ridge.solve(grad);
      }
    }
    const double decrement2 = -grad.dot(step);
    if (!(decrement2 > 0.0)) return res;  // stationary (or numerically stuck)

    // Backtracking line search on the merit, staying strictly feasible.
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd cand = v + alpha * step;
      BlockFactors cand_factors;
      if (factor_blocks(blocks, cand, &cand_factors)) {
        double cand_merit = -cand_factors.logdet_sum;
        if (objective != nullptr) cand_merit += t * objective->value(cand);
        if (cand_merit <= merit - 0.01 * alpha * decrement2) {
          v = cand;
          moved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (sol != nullptr && prob_for_trace != nullptr) {
      SdpTraceRow row;
      row.iter = budget.used;
      row.objective = sdp_objective(*prob_for_trace, v.head(prob_for_trace->lmi.layout.count()));
      double min_res = std::numeric_limits<double>::infinity();
      for (const auto& b : prob_for_trace->lmi.blocks) {
        min_res = std::min(min_res, b.paper_residual(v.head(prob_for_trace->lmi.layout.count())));
      }
      row.min_residual = min_res;
      row.step_len = moved ? alpha * step.norm() : 0.0;
      row.gap = gap_for_trace;
      sol->trace.push_back(row);
    }
    if (!moved) return res;                    // no acceptable step
    if (decrement2 * 0.5 <= 1e-9) return res;  // centered
  }
  return res;
}

void fill_solution(const SdpProblem& prob, const Eigen::VectorXd& v, SdpSolution& sol) {
  const VarLayout& lay = prob.lmi.layout;
  sol.v = v;
  sol.P = lay.extract_p(v);
  sol.X = lay.extract_x(v);
  sol.Y = lay.extract_y(v);
  sol.C = lay.extract_c(v);
  sol.D = lay.extract_d(v);
  sol.rho = v[lay.rho_var()];
  sol.nu = v[lay.nu_var()];
  sol.n_c = v[lay.nc_var()];
  sol.n_d = v[lay.nd_var()];
  sol.objective = sdp_objective(prob, v);
  sol.block_residuals.clear();
  for (const auto& b : prob.lmi.blocks) {
    sol.block_residuals.emplace_back(b.name, b.paper_residual(v));
  }
}

SdpSolution solve_barrier(const SdpProblem& prob, const SdpOptions& opts) {
  const VarLayout& lay = prob.lmi.layout;
  const long nv = lay.count();
  SdpSolution sol;

  std::vector<AffineBlock> hard = prob.lmi.blocks;
  std::vector<AffineBlock> bounds = bound_blocks(lay, prob.bounds);

  Eigen::VectorXd v = default_start(prob);
  NewtonBudget budget{0, opts.max_newton};

  // Phase 1: minimize s subject to F_j(v) + s I >= 0 (hard blocks) and the
  // bound blocks as-is, until the hard blocks hold with strict margin.
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& b : hard) {
    worst = std::min(worst, min_eigenvalue(SymMatrix(b.eval(v), 1e-9)));
  }
  if (worst <= opts.phase1_target) {
    const long ns = nv + 1;  // extended vector (v, s)
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(ns);
    ext.head(nv) = v;
    const double s0 = -worst + 1.0;
    ext[nv] = s0;

    std::vector<AffineBlock> ext_blocks;
    for (const auto& b : hard) {
      AffineBlock e = b;
      for (int i = 0; i < e.size; ++i) e.entries.push_back({nv, i, i, 1.0});
      ext_blocks.push_back(std::move(e));
    }
    for (const auto& b : bounds) ext_blocks.push_back(b);
    ext_blocks.push_back(scalar_bound("bound-s-cap", nv, -1.0, s0 + 1.0));

    Quadratic lin;
    lin.H = Eigen::MatrixXd::Zero(ns, ns);
    lin.g = Eigen::VectorXd::Zero(ns);
    lin.g[nv] = 1.0;  // minimize s

    const long m1 = total_block_size(ext_blocks);
    double t = 1.0;
    bool feasible = false;
    while (t < 1e14 && !budget.exhausted()) {
      center(ext_blocks, &lin, t, ext, budget, opts.max_inner, nullptr, nullptr, m1 / t);
      if (ext[nv] <= -0.5) break;  // deep interior, good enough
      if (static_cast<double>(m1) / t <= std::max(1e-12, 0.01 * std::abs(ext[nv]))) break;
      t *= opts.barrier_mu;
    }
    feasible = ext[nv] <= -opts.phase1_target;
    v = ext.head(nv);
    if (!feasible) {
      fill_solution(prob, v, sol);
      sol.status = SdpStatus::Infeasible;
      double min_res = std::numeric_limits<double>::infinity();
      for (const auto& [name, res] : sol.block_residuals) {
        if (res < min_res) {
          min_res = res;
          sol.most_violated = name;
        }
      }
      sol.iterations = budget.used;
      return sol;
    }
  }

  // Phase 2: barrier path on the quadratic objective.
  std::vector<AffineBlock> all_blocks = hard;
  for (const auto& b : bounds) all_blocks.push_back(b);
  const long m_total = total_block_size(all_blocks);
  const Quadratic objective = build_objective(prob);

  double t = 1.0;
  bool hit_budget = false;
  for (;;) {
    const double gap = static_cast<double>(m_total) / t;
    const CenterResult cr =
        center(all_blocks, &objective, t, v, budget, opts.max_inner, &prob, &sol, gap);
    if (cr.hit_budget) {
      hit_budget = true;
      break;
    }
    const double f = objective.value(v);
    if (gap <= std::max(opts.gap_abs, opts.rel_gap * std::abs(f))) break;
    t *= opts.barrier_mu;
  }

  fill_solution(prob, v, sol);
  sol.iterations = budget.used;
  const double min_res = sol.min_block_residual();
  sol.status = (!hit_budget && min_res >= -opts.feas_tol) ? SdpStatus::Optimal
                                                          : SdpStatus::MaxIter;
  return sol;
}

// -------- projection (ADMM-style) fallback --------

SdpSolution solve_projection(const SdpProblem& prob, const SdpOptions& opts) {
  const VarLayout& lay = prob.lmi.layout;
  const long nv = lay.count();
  SdpSolution sol;

  std::vector<AffineBlock> blocks = prob.lmi.blocks;
  for (const auto& b : bound_blocks(lay, prob.bounds)) blocks.push_back(b);
  const std::size_t nb = blocks.size();

  const Quadratic objective = build_objective(prob);
  const double beta = opts.projection_beta;

  // Normal matrix H + beta * sum_j A_j' A_j, factorized once.
  Eigen::MatrixXd normal = objective.H;
  for (const auto& b : blocks) {
    std::map<std::pair<int, int>, std::vector<AffineBlock::Entry>> by_pos;
    for (const auto& e : b.entries) by_pos[{e.row, e.col}].push_back(e);
    for (const auto& [pos, list] : by_pos) {
      for (const auto& e1 : list) {
        for (const auto& e2 : list) {
          normal(e1.var, e2.var) += beta * e1.coef * e2.coef;
        }
      }
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> normal_ldlt(normal);
  if (normal_ldlt.info() != Eigen::Success) {
    throw InvalidInputError("sdp projection: normal matrix factorization failed");
  }

  Eigen::VectorXd v = default_start(prob);
  std::vector<Eigen::MatrixXd> z(nb), u(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(blocks[j].eval(v));
    z[j] = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
           es.eigenvectors().transpose();
    u[j] = Eigen::MatrixXd::Zero(blocks[j].size, blocks[j].size);
  }

  long iter = 0;
  double primal_res = std::numeric_limits<double>::infinity();
  double dual_res = std::numeric_limits<double>::infinity();
  for (; iter < opts.projection_max_iter; ++iter) {
    // v-update: (H + beta sum A'A) v = -g + beta sum A'(Z - U - F0)
    Eigen::VectorXd rhs = -objective.g;
    for (std::size_t j = 0; j < nb; ++j) {
      const Eigen::MatrixXd target = z[j] - u[j] - blocks[j].constant;
      for (const auto& e : blocks[j].entries) {
        rhs[e.var] += beta * e.coef * target(e.row, e.col);
      }
    }
    v = normal_ldlt.solve(rhs);

    // Z-update: project F_j(v) + U_j onto the PSD cone.
    primal_res = 0.0;
    dual_res = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const Eigen::MatrixXd f = blocks[j].eval(v);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f + u[j]);
      const Eigen::MatrixXd z_new = es.eigenvectors() *
                                    es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                    es.eigenvectors().transpose();
      dual_res = std::max(dual_res, beta * (z_new - z[j]).norm());
      z[j] = z_new;
      u[j] += f - z[j];
      primal_res = std::max(primal_res, (f - z[j]).norm());
    }

    if (iter % 100 == 0) {
      SdpTraceRow row;
      row.iter = iter;
      row.objective = sdp_objective(prob, v);
      double min_res = std::numeric_limits<double>::infinity();
      for (const auto& b : prob.lmi.blocks) {
        min_res = std::min(min_res, b.paper_residual(v));
      }
      row.min_residual = min_res;
      row.step_len = primal_res;
      row.gap = dual_res;
      sol.trace.push_back(row);
    }
    if (primal_res <= opts.projection_tol && dual_res <= opts.projection_tol) {
      ++iter;
      break;
    }
  }

  fill_solution(prob, v, sol);
  sol.iterations = iter;
  sol.status = (sol.min_block_residual() >= -opts.feas_tol &&
                primal_res <= 10.0 * opts.projection_tol)
                   ? SdpStatus::Optimal
                   : SdpStatus::MaxIter;
  return sol;
}

}  // namespace

double sdp_objective(const SdpProblem& prob, const Eigen::VectorXd& v) {
  const VarLayout& lay = prob.lmi.layout;
  const Eigen::MatrixXd p = lay.extract_p(v);
  const double fa = (lay.extract_x(v) - p * prob.a_ini).squaredNorm();
  const double fb = (lay.extract_y(v) - p * prob.b_ini).squaredNorm();
  const double fc = (lay.extract_c(v) - prob.c_ini).squaredNorm();
  const double fd = (lay.extract_d(v) - prob.d_ini).squaredNorm();
  return prob.lambda_a * fa + prob.lambda_b * fb + prob.lambda_c * fc + prob.lambda_d * fd;
}

double SdpSolution::min_block_residual() const {
  double min_res = std::numeric_limits<double>::infinity();
  for (const auto& [name, res] : block_residuals) min_res = std::min(min_res, res);
  return min_res;
}

SdpSolution solve_sdp(const SdpProblem& prob, const SdpOptions& opts) {
  if (!prob.a_ini.allFinite() || !prob.b_ini.allFinite() || !prob.c_ini.allFinite() ||
      !prob.d_ini.allFinite()) {
    throw InvalidInputError("solve_sdp: anchors must be finite");
  }
  if (prob.lambda_a <= 0.0 || prob.lambda_b <= 0.0 || prob.lambda_c <= 0.0 ||
      prob.lambda_d <= 0.0) {
    throw InvalidInputError("solve_sdp: objective weights must be positive");
  }
  const VarLayout& lay = prob.lmi.layout;
  if (prob.a_ini.rows() != lay.N || prob.a_ini.cols() != lay.N ||
      prob.b_ini.rows() != lay.N || prob.b_ini.cols() != lay.m ||
      prob.c_ini.rows() != lay.p || prob.c_ini.cols() != lay.N ||
      prob.d_ini.rows() != lay.p || prob.d_ini.cols() != lay.m) {
    throw InvalidInputError("solve_sdp: anchor dimensions do not match the layout");
  }
  if (opts.method == SdpMethod::Projection) return solve_projection(prob, opts);
  return solve_barrier(prob, opts);
}

RecoveredModel recover_model(const SdpSolution& sol, double p_min) {
  if (sol.status != SdpStatus::Optimal) {
    throw InvalidInputError("recover_model: solution is not optimal");
  }
  const SymMatrix p(sol.P, 1e-9);
  if (min_eigenvalue(p) < p_min) {
    throw InvalidInputError("recover_model: P is not positive definite above the floor");
  }
  RecoveredModel rec;
  rec.A = spd_solve(sol.P, sol.X);
  rec.B = spd_solve(sol.P, sol.Y);
  rec.C = sol.C;
  rec.D = sol.D;
  rec.p_condition = spd_condition(p);
  rec.ill_conditioned = rec.p_condition > 1e8;
  return rec;
}

void SdpSolution::save(const std::filesystem::path& path) const {
  Manifest m;
  const char* status_name = status == SdpStatus::Optimal     ? "optimal"
                            : status == SdpStatus::Infeasible ? "infeasible"
                                                              : "max_iter";
  m.set("status", std::string(status_name));
  m.set("objective", objective);
  m.set("rho", rho);
  m.set("nu", nu);
  m.set("n_c", n_c);
  m.set("n_d", n_d);
  m.set("iterations", iterations);
  m.set("most_violated", most_violated);
  for (const auto& [name, res] : block_residuals) {
    m.set("residual." + name, res);
  }
  m.set("P.rows", static_cast<long>(P.rows()));
  m.set("X.rows", static_cast<long>(X.rows()));
  m.set("Y.cols", static_cast<long>(Y.cols()));
  m.set("C.rows", static_cast<long>(C.rows()));
  std::string out = m.serialize();
  out += "#matrices P X Y C D\n";
  out += matrix_to_text(P);
  out += matrix_to_text(X);
  out += matrix_to_text(Y);
  out += matrix_to_text(C);
  out += matrix_to_text(D);
  write_text_file(path, out);
}

void SdpSolution::save_trace_csv(const std::filesystem::path& path) const {
  CsvTable t;
  t.header = {"iter", "objective", "min_residual", "step_len", "gap"};
  for (const auto& r : trace) {
    t.rows.push_back({static_cast<double>(r.iter), r.objective, r.min_residual, r.step_len,
                      r.gap});
  }
  t.save(path);
}

}  // namespace koopcert
