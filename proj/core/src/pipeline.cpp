// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/pipeline.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include "koopcert/error_budget.hpp"
#include "koopcert/errors.hpp"
#include "koopcert/lipschitz.hpp"
#include "koopcert/rng.hpp"
#include "koopcert/svg_plot.hpp"

namespace koopcert {

namespace fs = std::filesystem;

namespace {

std::uint64_t config_hash(const PipelineConfig& cfg) {
  const std::string text = cfg.to_manifest().serialize();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : text) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename Fn>
void run_stage(const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + name + ": " + e.what());
  }
}

bool stage_done(const fs::path& dir, const std::string& stage) {
  const fs::path marker = dir / ("." + stage + ".done");
  return fs::exists(marker);
}

void mark_done(const fs::path& dir, const std::string& stage) {
  write_text_file(dir / ("." + stage + ".done"), stage + "\n");
}

Eigen::VectorXd scalar_vec(double v) {
  Eigen::VectorXd u(1);
  u[0] = v;
  return u;
}

QsrSupply make_qsr(const PipelineConfig& cfg) {
  return QsrSupply::siso(cfg.q, cfg.s, cfg.r, cfg.eta, cfg.tau);
}

std::vector<Interval> eval_box(const PipelineConfig& cfg, int dim) {
  return std::vector<Interval>(dim, Interval{cfg.eval_box_min, cfg.eval_box_max});
}

EvalSet build_grid(const PipelineConfig& cfg, const DiscreteSystem& sys) {
  return build_evaluation_grid(eval_box(cfg, sys.state_dim), cfg.eval_points_per_dim,
                               scalar_vec(cfg.u_eval), sys, cfg.eval_memory_cap);
}

}  // namespace

fs::path ensure_run_dir(const PipelineConfig& cfg) {
  const fs::path dir = cfg.out_dir;
  fs::create_directories(dir);
  const std::string hash = std::to_string(config_hash(cfg));
  const fs::path manifest_path = dir / "manifest.txt";
  if (fs::exists(manifest_path)) {
    const Manifest existing = Manifest::load(manifest_path);
    if (existing.get("config_hash") != hash) {
      throw ConfigError("run directory " + dir.string() +
                        " holds artifacts for a different configuration; use a fresh --out");
    }
    return dir;
  }
  Manifest m = cfg.to_manifest();
  m.set("config_hash", hash);
  m.save(manifest_path);
  cfg.to_manifest().save(dir / "config.cfg");
  return dir;
}

void stage_simulate(const PipelineConfig& cfg, const fs::path& dir) {
  if (stage_done(dir, "simulate")) return;
  run_stage("simulate", [&] {
    const DiscreteSystem sys = make_duffing(cfg.duffing);
    TrainConfig data_cfg = cfg.data;
    data_cfg.init_box.assign(sys.state_dim, cfg.data.init_box.front());
    data_cfg.seed = derive_seed(cfg.seed, "data");
    const TrainingSet set = generate_training_set(sys, data_cfg);
    if (set.empty_val_warning) {
      std::cerr << "warning: validation split is empty (floor rule)\n";
    }
    save_training_set(set, data_cfg, dir / "data");
    mark_done(dir, "simulate");
  });
}

void stage_train(const PipelineConfig& cfg, const fs::path& dir) {
  if (stage_done(dir, "train")) return;
  run_stage("train", [&] {
    const DiscreteSystem sys = make_duffing(cfg.duffing);
    const TrainingSet set = load_training_set(dir / "data", sys);
    NetDims dims = cfg.dims;
    dims.state_dim = sys.state_dim;
    TrainHyper hyper = cfg.hyper;
    hyper.seed = derive_seed(cfg.seed, "train");
    const TrainResult result = train_model(set.train, set.val, dims, hyper);
    if (result.aborted_nan) {
      result.model.save_checkpoint(dir / "model" / "checkpoint.txt");
      result.save_log_csv(dir / "model" / "train_log.csv");
      throw InvalidInputError("training aborted on NaN loss; last finite checkpoint kept");
    }
    result.model.save_checkpoint(dir / "model" / "checkpoint.txt");
    result.save_log_csv(dir / "model" / "train_log.csv");
    Manifest m;
    m.set("best_epoch", result.best_epoch);
    m.set("best_val", result.best_val);
    m.save(dir / "model" / "train_summary.txt");
    mark_done(dir, "train");
  });
}

void stage_evaluate(const PipelineConfig& cfg, const fs::path& dir) {
  if (stage_done(dir, "evaluate")) return;
  run_stage("evaluate", [&] {
    const DiscreteSystem sys = make_duffing(cfg.duffing);
    const KoopmanModel model = KoopmanModel::load_checkpoint(dir / "model" / "checkpoint.txt");
    const EvalSet eval = build_grid(cfg, sys);
    eval.save_csv(dir / "eval" / "grid.csv");
    const ModelErrors errs = compute_model_errors(model, eval);
    Manifest m;
    m.set("delta_c", errs.delta_c);
    m.set("delta_r", errs.delta_r);
    m.set("argmax_c", errs.argmax_c);
    m.set("argmax_r", errs.argmax_r);
    m.set("delta_x_half_spacing", eval.delta_x_half_spacing);
    m.set("delta_x_l2", eval.delta_x_l2);
    m.set("points", eval.size());
    for (std::size_t i = 0; i < errs.state_error_histogram.size(); ++i) {
      m.set("hist_state_" + std::to_string(i), errs.state_error_histogram[i]);
    }
    for (std::size_t i = 0; i < errs.output_error_histogram.size(); ++i) {
      m.set("hist_output_" + std::to_string(i), errs.output_error_histogram[i]);
    }
    m.save(dir / "eval" / "model_errors.txt");
    mark_done(dir, "evaluate");
  });
}

void stage_lipschitz(const PipelineConfig& cfg, const fs::path& dir) {
  if (stage_done(dir, "lipschitz")) return;
  run_stage("lipschitz", [&] {
    const DiscreteSystem sys = make_duffing(cfg.duffing);
    const KoopmanModel model = KoopmanModel::load_checkpoint(dir / "model" / "checkpoint.txt");
    const std::vector<Interval> box = eval_box(cfg, sys.state_dim);
    const std::uint64_t seed = derive_seed(cfg.seed, "lipschitz");

    const MlpNetwork composed = compose_networks(model.encoder, model.decoder);
    const double cert_phi = certified_mlp_lipschitz(model.encoder);
    const double cert_psi = certified_mlp_lipschitz(model.decoder);
    const double cert_comp = certified_mlp_lipschitz(composed);

    const auto enc_fn = [&](const Eigen::VectorXd& x) { return model.encoder.forward(x); };
    const auto comp_fn = [&](const Eigen::VectorXd& x) { return composed.forward(x); };
    const double samp_phi = sampled_lipschitz(enc_fn, box, cfg.lipschitz_samples,
                                              derive_seed(seed, "phi"));
    const double samp_comp = sampled_lipschitz(comp_fn, box, cfg.lipschitz_samples,
                                               derive_seed(seed, "comp"));
    // The decoder acts on lifted points; probe it on the image of the state
    // box under the encoder.
    const double samp_psi = [&] {
      Rng rng(derive_seed(seed, "psi"));
      const long n = cfg.lipschitz_samples;
      Eigen::MatrixXd xs(sys.state_dim, n);
      for (long j = 0; j < n; ++j) {
        for (int d2 = 0; d2 < sys.state_dim; ++d2) {
          xs(d2, j) = rng.uniform(box[d2].lo, box[d2].hi);
        }
      }
      const Eigen::MatrixXd zs = model.encoder.forward_batch(xs);
      const Eigen::MatrixXd psis = model.decoder.forward_batch(zs);
      double best = 0.0;
      for (long a = 0; a < n; ++a) {
        const long b = static_cast<long>(rng.uniform_index(n));
        const double dist = (zs.col(a) - zs.col(b)).norm();
        if (dist > 0.0) best = std::max(best, (psis.col(a) - psis.col(b)).norm() / dist);
      }
      // nearest-neighbor pairs in lifted space
      for (long a = 0; a < n; ++a) {
        long nearest = -1;
        double nd = std::numeric_limits<double>::infinity();
        for (long b = 0; b < n; ++b) {
          if (a == b) continue;
          const double d2 = (zs.col(a) - zs.col(b)).squaredNorm();
          if (d2 > 0.0 && d2 < nd) {
            nd = d2;
            nearest = b;
          }
        }
        if (nearest >= 0) {
          best = std::max(best, (psis.col(a) - psis.col(nearest)).norm() / std::sqrt(nd));
        }
      }
      return best;
    }();

    const auto g_fn = [&](const Eigen::VectorXd& x) {
      return sys.output(x, scalar_vec(cfg.u_eval));
    };
    const double samp_g =
        sampled_lipschitz(g_fn, box, cfg.lipschitz_samples, derive_seed(seed, "g"));

    const auto [phi0, psi0] = network_origin_values(model);

    Manifest m;
    m.set("certified_phi", cert_phi);
    m.set("certified_psi", cert_psi);
    m.set("certified_composed", cert_comp);
    m.set("sampled_phi", samp_phi);
    m.set("sampled_psi", samp_psi);
    m.set("sampled_composed", samp_comp);
    m.set("sampled_g", samp_g);
    m.set("safety_factor", cfg.lipschitz_safety);
    m.set("n_samples", cfg.lipschitz_samples);
    m.set("seed", static_cast<long>(seed));
    m.set("phi0_norm", phi0);
    m.set("psi0_norm", psi0);
    m.save(dir / "budget" / "lipschitz.txt");

    // Assemble the error budget from the chosen provenance.
    const Manifest errs = Manifest::load(dir / "eval" / "model_errors.txt");
    ErrorBudget raw;
    raw.delta_d = cfg.duffing.noise_bound;
    raw.delta_x = cfg.delta_x_convention == "l2" ? errs.get_double("delta_x_l2")
                                                 : errs.get_double("delta_x_half_spacing");
    raw.delta_c = errs.get_double("delta_c");
    raw.delta_r = errs.get_double("delta_r");
    const bool certified = cfg.lipschitz_provenance == "certified";
    raw.l_phi_x = certified ? cert_phi : samp_phi * cfg.lipschitz_safety;
    raw.l_psi_z = certified ? cert_psi : samp_psi * cfg.lipschitz_safety;
    raw.l_psiphi_x = certified ? cert_comp : samp_comp * cfg.lipschitz_safety;
    raw.l_g_x = samp_g * cfg.lipschitz_safety;  // never certifiable from data
    raw.phi0_norm = phi0;
    raw.psi0_norm = psi0;
    raw.eta = cfg.eta;
    raw.tau = cfg.tau;
    raw.lipschitz_provenance =
        certified ? "certified" : "sampled*" + format_full(cfg.lipschitz_safety);
    raw.delta_x_convention = cfg.delta_x_convention;
    const ErrorBudget budget = assemble_error_budget(raw);
    budget.save(dir / "budget" / "error_budget.txt");
    mark_done(dir, "lipschitz");
  });
}

void stage_perturb(const PipelineConfig& cfg, const fs::path& dir) {
  if (stage_done(dir, "perturb")) return;
  run_stage("perturb", [&] {
    const KoopmanModel model = KoopmanModel::load_checkpoint(dir / "model" / "checkpoint.txt");
    const ErrorBudget budget = ErrorBudget::load(dir / "budget" / "error_budget.txt");
    const QsrSupply qsr = make_qsr(cfg);

    LmiOptions lmi_opts;
    lmi_opts.eps_strict = cfg.eps_strict;
    lmi_opts.h_variant = cfg.h_variant_enum();

    SdpProblem prob;
    prob.lmi = build_lmi_system(qsr, budget, model.lift_dim(), lmi_opts);
    prob.lambda_a = cfg.lambda_a;
    prob.lambda_b = cfg.lambda_b;
    prob.lambda_c = cfg.lambda_c;
    prob.lambda_d = cfg.lambda_d;
    prob.a_ini = model.A;
    prob.b_ini = model.B;
    prob.c_ini = model.C;
    prob.d_ini = model.D;
    prob.bounds = cfg.bounds;

    write_text_file(dir / "sdp" / "lmi_dump.txt", prob.lmi.dump());

    SdpOptions opts;
    opts.method = cfg.sdp_method_enum();
    opts.feas_tol = cfg.tol_feas;
    opts.rel_gap = cfg.sdp_rel_gap;
    opts.gap_abs = cfg.sdp_gap_abs;
    opts.max_newton = cfg.sdp_max_newton;
    SdpSolution sol = solve_sdp(prob, opts);
    if (sol.status != SdpStatus::Optimal && opts.method == SdpMethod::Barrier) {
      // first-order fallback path
      SdpOptions fallback = opts;
      fallback.method = SdpMethod::Projection;
      const SdpSolution retry = solve_sdp(prob, fallback);
      if (retry.min_block_residual() > sol.min_block_residual()) sol = retry;
    }
    sol.save(dir / "sdp" / "solution.txt");
    sol.save_trace_csv(dir / "sdp" / "trace.csv");
    if (sol.status == SdpStatus::Infeasible) {
      throw InvalidInputError("perturbation program infeasible; most violated block: " +
                              sol.most_violated);
    }

    const RecoveredModel rec = recover_model(sol, cfg.bounds.p_min);
    KoopmanModel final_model = model;
    final_model.A = rec.A;
    final_model.B = rec.B;
    final_model.C = rec.C;
    final_model.D = rec.D;
    final_model.save_checkpoint(dir / "final" / "model_final.txt");

    Manifest m;
    m.set("p_condition", rec.p_condition);
    m.set("ill_conditioned", rec.ill_conditioned);
    m.set("rho", sol.rho);
    m.set("nu", sol.nu);
    m.set("n_c", sol.n_c);
    m.set("n_d", sol.n_d);
    m.set("c_norm", spectral_norm(rec.C));
    m.set("d_norm", spectral_norm(rec.D));
    m.set("objective", sol.objective);
    m.save(dir / "final" / "recovery.txt");
    if (rec.ill_conditioned) {
      std::cerr << "warning: P condition number " << rec.p_condition << " exceeds 1e8\n";
    }
    mark_done(dir, "perturb");
  });
}

namespace {

Manifest certificate_provenance() {
  Manifest p;
  p.set("qsr.q", std::string("config:qsr.q"));
  p.set("qsr.s", std::string("config:qsr.s"));
  p.set("qsr.r", std::string("config:qsr.r"));
  p.set("qsr.eta", std::string("config:qsr.eta"));
  p.set("qsr.tau", std::string("config:qsr.tau"));
  p.set("tol", std::string("config:verify.tol_feas"));
  p.set("rho_bar", std::string("artifact:final/recovery.txt:rho"));
  p.set("nu_bar", std::string("artifact:final/recovery.txt:nu"));
  p.set("c_norm", std::string("artifact:final/recovery.txt:c_norm"));
  p.set("d_norm", std::string("artifact:final/recovery.txt:d_norm"));
  const std::string from_budget = "artifact:budget/error_budget.txt:";
  for (const std::string key :
       {"delta_d", "delta_x", "delta_c", "delta_r", "l_phi_x", "l_psi_z", "l_psiphi_x",
        "l_g_x", "phi0_norm", "psi0_norm", "delta_1", "delta_2", "c_phi", "delta_b"}) {
    p.set("budget." + key, from_budget + key);
  }
  p.set("lipschitz_provenance",
        std::string("artifact:budget/error_budget.txt:lipschitz_provenance"));
  p.set("delta_x_convention",
        std::string("artifact:budget/error_budget.txt:delta_x_convention"));
  p.set("rho_min",
        std::string("derived(artifact:budget/error_budget.txt,artifact:final/recovery.txt)"));
  p.set("rho_min_display",
        std::string("derived(artifact:budget/error_budget.txt,artifact:final/recovery.txt)"));
  p.set("nu_min",
        std::string("derived(artifact:budget/error_budget.txt,artifact:final/recovery.txt)"));
  p.set("lmi_residual",
        std::string("derived(artifact:final/model_final.txt,artifact:sdp/solution.txt)"));
  p.set("p_min_eig", std::string("derived(artifact:sdp/solution.txt)"));
  p.set("transfer_valid", std::string("derived(artifact:cert/certificate.txt)"));
  p.set("failing_clause", std::string("derived(artifact:cert/certificate.txt)"));
  p.set("region", std::string("constant"));
  return p;
}

}  // namespace

void stage_verify(const PipelineConfig& cfg, const fs::path& dir) {
  if (stage_done(dir, "verify")) return;
  run_stage("verify", [&] {
    const KoopmanModel model = KoopmanModel::load_checkpoint(dir / "model" / "checkpoint.txt");
    const KoopmanModel final_model =
        KoopmanModel::load_checkpoint(dir / "final" / "model_final.txt");
    const ErrorBudget budget = ErrorBudget::load(dir / "budget" / "error_budget.txt");
    const QsrSupply qsr = make_qsr(cfg);

    // Re-read the SDP point (P, rho, nu).
    const std::string sol_text = read_text_file(dir / "sdp" / "solution.txt");
    const auto marker = sol_text.find("#matrices P X Y C D\n");
    if (marker == std::string::npos) throw IoError("sdp solution file is malformed");
    const Manifest sol_m = Manifest::parse(sol_text.substr(0, marker));
    const long N = final_model.lift_dim();
    // P is the first matrix after the marker; matrix_from_text reads exactly
    // N*N tokens.
    const Eigen::MatrixXd P = matrix_from_text(sol_text.substr(marker + 20), N, N);
    const double rho = sol_m.get_double("rho");
    const double nu = sol_m.get_double("nu");

    const DissipativityCertificate cert =
        certify(final_model.A, final_model.B, final_model.C, final_model.D, P, rho, nu, qsr,
                budget, cfg.tol_feas);
    cert.save(dir / "cert" / "certificate.txt");
    certificate_provenance().save(dir / "cert" / "provenance.txt");

    // Empirical dissipation check over random lifted trajectories.
    Rng rng(derive_seed(cfg.seed, "verify"));
    std::vector<LiftedRollout> rollouts;
    std::vector<Eigen::MatrixXd> input_seqs;
    for (long tr = 0; tr < cfg.check_trajectories; ++tr) {
      Eigen::VectorXd z0(N);
      for (long i = 0; i < N; ++i) z0[i] = rng.uniform(-1.0, 1.0);
      Eigen::MatrixXd u(final_model.input_dim(), cfg.check_length);
      for (long k = 0; k < cfg.check_length; ++k) {
        for (int i = 0; i < final_model.input_dim(); ++i) u(i, k) = rng.uniform(-1.0, 1.0);
      }
      rollouts.push_back(lifted_rollout_from(final_model, z0, u));
      input_seqs.push_back(std::move(u));
    }
    const DissipationViolationReport report = empirical_dissipation_check(
        final_model, P, rho, nu, qsr, rollouts, input_seqs, cfg.tol_feas);
    Manifest em;
    em.set("checked_steps", report.checked_steps);
    em.set("violations", report.violations);
    em.set("max_violation", report.max_violation);
    em.save(dir / "cert" / "empirical.txt");
    {
      CsvTable t;
      t.header = {"k", "margin"};
      for (std::size_t k = 0; k < report.margins.size(); ++k) {
        t.rows.push_back({static_cast<double>(k), report.margins[k]});
      }
      t.save(dir / "cert" / "empirical_margins.csv");
    }

    // Perturbation magnitudes (parameter space and objective space).
    const Eigen::MatrixXd x_bar = P * final_model.A;
    const Eigen::MatrixXd y_bar = P * final_model.B;
    const PerturbationReport pert =
        perturbation_report(model.A, model.B, model.C, model.D, final_model.A, final_model.B,
                            final_model.C, final_model.D, P, x_bar, y_bar);
    Manifest pm;
    pm.set("a_dist", pert.a_dist);
    pm.set("b_dist", pert.b_dist);
    pm.set("c_dist", pert.c_dist);
    pm.set("d_dist", pert.d_dist);
    pm.set("x_obj_dist", pert.x_obj_dist);
    pm.set("y_obj_dist", pert.y_obj_dist);
    pm.save(dir / "cert" / "perturbation.txt");

    // Held-out rollouts for the figures and the tracking check.
    const DiscreteSystem noisefree = [&] {
      DuffingSystem d = cfg.duffing;
      d.noise_bound = 0.0;
      return make_duffing(d);
    }();
    Eigen::Vector2d x0(cfg.test_x0_1, cfg.test_x0_2);
    const InputSignal u_test = sine_input(cfg.test_amp, cfg.test_freq);
    const Trajectory truth = simulate(noisefree, x0, u_test, cfg.test_steps, 0);
    truth.save_csv(dir / "rollouts" / "ground_truth.csv");

    const auto save_model_rollout = [&](const KoopmanModel& mdl, const fs::path& path) {
      const LiftedRollout roll = lifted_rollout(mdl, x0, truth.inputs);
      Trajectory t;
      t.states = roll.decoded_states;
      t.inputs = truth.inputs;
      t.outputs = roll.outputs;
      t.save_csv(path);
    };
    save_model_rollout(model, dir / "rollouts" / "unconstrained.csv");
    save_model_rollout(final_model, dir / "rollouts" / "dissipative.csv");

    mark_done(dir, "verify");
  });
}

void emit_plots(const fs::path& dir) {
  run_stage("plot", [&] {
    const fs::path rolls = dir / "rollouts";
    if (!fs::exists(rolls / "ground_truth.csv")) {
      throw IoError("plot: rollout artifacts missing; run the verify stage first");
    }
    const CsvTable truth = CsvTable::load(rolls / "ground_truth.csv");
    const CsvTable unconstrained = CsvTable::load(rolls / "unconstrained.csv");
    const CsvTable dissipative = CsvTable::load(rolls / "dissipative.csv");
    if (truth.rows.empty()) throw IoError("plot: empty trajectory");

    const auto column = [](const CsvTable& t, std::size_t col) {
      std::vector<double> v;
      v.reserve(t.rows.size());
      for (const auto& row : t.rows) v.push_back(row[col]);
      return v;
    };
    const std::vector<double> k = column(truth, 0);

    std::vector<PlotSeries> states;
    const char* colors[3] = {"#444444", "#1f77b4", "#d62728"};
    const char* names[3] = {"ground truth", "unconstrained", "dissipative"};
    const CsvTable* tables[3] = {&truth, &unconstrained, &dissipative};
    for (int dim = 0; dim < 2; ++dim) {
      for (int s = 0; s < 3; ++s) {
        PlotSeries ps;
        ps.label = std::string(names[s]) + " x" + std::to_string(dim + 1);
        ps.color = colors[s];
        ps.x = k;
        ps.y = column(*tables[s], 1 + dim);
        states.push_back(std::move(ps));
      }
    }
    write_svg_plot(dir / "figs" / "states.svg", "State trajectories", "step k", "state",
                   states);

    std::vector<PlotSeries> outputs;
    for (int s = 0; s < 3; ++s) {
      PlotSeries ps;
      ps.label = names[s];
      ps.color = colors[s];
      ps.x = k;
      ps.y = column(*tables[s], 4);  // k,x1,x2,u1,y1
      outputs.push_back(std::move(ps));
    }
    write_svg_plot(dir / "figs" / "output.svg", "Output prediction", "step k", "output",
                   outputs);

    const CsvTable margins = CsvTable::load(dir / "cert" / "empirical_margins.csv");
    PlotSeries ms;
    ms.label = "supply - storage increment";
    ms.color = "#2ca02c";
    ms.x = column(margins, 0);
    ms.y = column(margins, 1);
    write_svg_plot(dir / "figs" / "dissipation_margin.svg", "Dissipation inequality margin",
                   "step k", "margin", {ms});
  });
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const fs::path dir = ensure_run_dir(cfg);
  stage_simulate(cfg, dir);
  stage_train(cfg, dir);
  stage_evaluate(cfg, dir);
  stage_lipschitz(cfg, dir);
  stage_perturb(cfg, dir);
  stage_verify(cfg, dir);
  emit_plots(dir);

  PipelineResult result;
  result.run_dir = dir;
  result.certificate = DissipativityCertificate::load(dir / "cert" / "certificate.txt");
  result.transfer_valid = result.certificate.transfer_valid;
  return result;
}

std::vector<std::string> manifest_lint(const fs::path& dir) {
  std::vector<std::string> problems;
  const fs::path cert_path = dir / "cert" / "certificate.txt";
  const fs::path prov_path = dir / "cert" / "provenance.txt";
  if (!fs::exists(cert_path) || !fs::exists(prov_path)) {
    problems.push_back("certificate or provenance file missing");
    return problems;
  }
  const Manifest cert = Manifest::load(cert_path);
  const Manifest prov = Manifest::load(prov_path);
  const Manifest config = Manifest::load(dir / "config.cfg");

  const auto check_artifact_ref = [&](const std::string& ref, const std::string& key) {
    // artifact:<relpath>[:<manifest key>]
    const auto rest = ref.substr(9);
    const auto colon = rest.find(':');
    const std::string relpath = colon == std::string::npos ? rest : rest.substr(0, colon);
    if (!fs::exists(dir / relpath)) {
      problems.push_back(key + ": referenced artifact missing: " + relpath);
      return;
    }
    if (colon != std::string::npos) {
      const Manifest artifact = Manifest::load(dir / relpath);
      const std::string field = rest.substr(colon + 1);
      if (!artifact.has(field)) {
        problems.push_back(key + ": artifact " + relpath + " lacks key " + field);
      }
    }
  };

  for (const auto& [key, value] : cert.entries()) {
    if (!prov.has(key)) {
      problems.push_back("certificate key without provenance: " + key);
      continue;
    }
    const std::string& src = prov.get(key);
    if (src.rfind("config:", 0) == 0) {
      if (!config.has(src.substr(7))) {
        problems.push_back(key + ": provenance names unknown config key " + src.substr(7));
      }
    } else if (src.rfind("artifact:", 0) == 0) {
      check_artifact_ref(src, key);
    } else if (src.rfind("derived(", 0) == 0) {
      std::string inner = src.substr(8);
      if (!inner.empty() && inner.back() == ')') inner.pop_back();
      for (const auto& piece : split(inner, ',')) {
        if (piece.rfind("artifact:", 0) == 0) check_artifact_ref(piece, key);
      }
    } else if (src != "constant") {
      problems.push_back(key + ": unrecognized provenance form: " + src);
    }
    (void)value;
  }
  return problems;
}

}  // namespace koopcert
