// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/config.hpp"

#include "koopcert/errors.hpp"

namespace koopcert {

Manifest PipelineConfig::to_manifest() const {
  Manifest m;
  m.set("dynamics.a", duffing.a);
  m.set("dynamics.b", duffing.b);
  m.set("dynamics.c", duffing.c);
  m.set("dynamics.dt", duffing.dt);
  m.set("dynamics.noise_bound", duffing.noise_bound);
  m.set("data.num_trajectories", data.num_trajectories);
  m.set("data.steps_per_trajectory", data.steps_per_trajectory);
  m.set("data.amp_min", data.amp_range.lo);
  m.set("data.amp_max", data.amp_range.hi);
  m.set("data.freq_min", data.freq_range.lo);
  m.set("data.freq_max", data.freq_range.hi);
  m.set("data.init_min", data.init_box.front().lo);
  m.set("data.init_max", data.init_box.front().hi);
  m.set("data.split_ratio", data.split_ratio);
  m.set("data.u_eval", u_eval);
  m.set("train.lift_dim", static_cast<long>(dims.lift_dim));
  m.set("train.hidden_layers", static_cast<long>(dims.hidden.size()));
  m.set("train.hidden_width", static_cast<long>(dims.hidden.empty() ? 0 : dims.hidden[0]));
  m.set("train.lambda1", hyper.lambda1);
  m.set("train.lambda2", hyper.lambda2);
  m.set("train.lambda3", hyper.lambda3);
  m.set("train.lr0", hyper.lr0);
  m.set("train.decay", hyper.decay);
  m.set("train.decay_every", hyper.decay_every);
  m.set("train.max_epochs", hyper.max_epochs);
  m.set("train.batch_size", hyper.batch_size);
  m.set("train.squared_norms", hyper.squared_norms);
  m.set("eval.box_min", eval_box_min);
  m.set("eval.box_max", eval_box_max);
  m.set("eval.points_per_dim", eval_points_per_dim);
  m.set("eval.memory_cap", eval_memory_cap);
  m.set("budget.delta_x_convention", delta_x_convention);
  m.set("budget.lipschitz_provenance", lipschitz_provenance);
  m.set("budget.lipschitz_safety", lipschitz_safety);
  m.set("budget.lipschitz_samples", lipschitz_samples);
  m.set("qsr.q", q);
  m.set("qsr.s", s);
  m.set("qsr.r", r);
  m.set("qsr.eta", eta);
  m.set("qsr.tau", tau);
  m.set("sdp.lambda_a", lambda_a);
  m.set("sdp.lambda_b", lambda_b);
  m.set("sdp.lambda_c", lambda_c);
  m.set("sdp.lambda_d", lambda_d);
  m.set("sdp.eps_strict", eps_strict);
  m.set("sdp.rho_nu_cap", bounds.rho_nu_cap);
  m.set("sdp.slack_cap", bounds.slack_cap);
  m.set("sdp.p_min", bounds.p_min);
  m.set("sdp.p_trace_cap", bounds.p_trace_cap);
  m.set("sdp.rel_gap", sdp_rel_gap);
  m.set("sdp.gap_abs", sdp_gap_abs);
  m.set("sdp.max_newton", sdp_max_newton);
  m.set("sdp.method", sdp_method);
  m.set("sdp.h_variant", h_variant);
  m.set("verify.tol_feas", tol_feas);
  m.set("verify.check_trajectories", check_trajectories);
  m.set("verify.check_length", check_length);
  m.set("test.x0_1", test_x0_1);
  m.set("test.x0_2", test_x0_2);
  m.set("test.amp", test_amp);
  m.set("test.freq", test_freq);
  m.set("test.steps", test_steps);
  m.set("seed", static_cast<long>(seed));
  m.set("out.dir", out_dir);
  return m;
}

PipelineConfig PipelineConfig::from_manifest(const Manifest& m) {
  PipelineConfig c;
  for (const auto& [key, value] : m.entries()) {
    if (key == "dynamics.a") c.duffing.a = parse_double(value);
    else if (key == "dynamics.b") c.duffing.b = parse_double(value);
    else if (key == "dynamics.c") c.duffing.c = parse_double(value);
    else if (key == "dynamics.dt") c.duffing.dt = parse_double(value);
    else if (key == "dynamics.noise_bound") c.duffing.noise_bound = parse_double(value);
    else if (key == "data.num_trajectories") c.data.num_trajectories = parse_long(value);
    else if (key == "data.steps_per_trajectory") c.data.steps_per_trajectory = parse_long(value);
    else if (key == "data.amp_min") c.data.amp_range.lo = parse_double(value);
    else if (key == "data.amp_max") c.data.amp_range.hi = parse_double(value);
    else if (key == "data.freq_min") c.data.freq_range.lo = parse_double(value);
    else if (key == "data.freq_max") c.data.freq_range.hi = parse_double(value);
    else if (key == "data.init_min") {
      for (auto& iv : c.data.init_box) iv.lo = parse_double(value);
    } else if (key == "data.init_max") {
      for (auto& iv : c.data.init_box) iv.hi = parse_double(value);
    } else if (key == "data.split_ratio") c.data.split_ratio = parse_double(value);
    else if (key == "data.u_eval") c.u_eval = parse_double(value);
    else if (key == "train.lift_dim") c.dims.lift_dim = static_cast<int>(parse_long(value));
    else if (key == "train.hidden_layers") {
      const long n = parse_long(value);
      const int width = c.dims.hidden.empty() ? 32 : c.dims.hidden[0];
      c.dims.hidden.assign(n, width);
    } else if (key == "train.hidden_width") {
      const int width = static_cast<int>(parse_long(value));
      for (auto& w : c.dims.hidden) w = width;
    } else if (key == "train.lambda1") c.hyper.lambda1 = parse_double(value);
    else if (key == "train.lambda2") c.hyper.lambda2 = parse_double(value);
    else if (key == "train.lambda3") c.hyper.lambda3 = parse_double(value);
    else if (key == "train.lr0") c.hyper.lr0 = parse_double(value);
    else if (key == "train.decay") c.hyper.decay = parse_double(value);
    else if (key == "train.decay_every") c.hyper.decay_every = parse_long(value);
    else if (key == "train.max_epochs") c.hyper.max_epochs = parse_long(value);
    else if (key == "train.batch_size") c.hyper.batch_size = parse_long(value);
    else if (key == "train.squared_norms") c.hyper.squared_norms = value == "true";
    else if (key == "eval.box_min") c.eval_box_min = parse_double(value);
    else if (key == "eval.box_max") c.eval_box_max = parse_double(value);
    else if (key == "eval.points_per_dim") c.eval_points_per_dim = parse_long(value);
    else if (key == "eval.memory_cap") c.eval_memory_cap = parse_long(value);
    else if (key == "budget.delta_x_convention") c.delta_x_convention = value;
    else if (key == "budget.lipschitz_provenance") c.lipschitz_provenance = value;
    else if (key == "budget.lipschitz_safety") c.lipschitz_safety = parse_double(value);
    else if (key == "budget.lipschitz_samples") c.lipschitz_samples = parse_long(value);
    else if (key == "qsr.q") c.q = parse_double(value);
    else if (key == "qsr.s") c.s = parse_double(value);
    else if (key == "qsr.r") c.r = parse_double(value);
    else if (key == "qsr.eta") c.eta = parse_double(value);
    else if (key == "qsr.tau") c.tau = parse_double(value);
    else if (key == "sdp.lambda_a") c.lambda_a = parse_double(value);
    else if (key == "sdp.lambda_b") c.lambda_b = parse_double(value);
    else if (key == "sdp.lambda_c") c.lambda_c = parse_double(value);
    else if (key == "sdp.lambda_d") c.lambda_d = parse_double(value);
    else if (key == "sdp.eps_strict") c.eps_strict = parse_double(value);
    else if (key == "sdp.rho_nu_cap") c.bounds.rho_nu_cap = parse_double(value);
    else if (key == "sdp.slack_cap") c.bounds.slack_cap = parse_double(value);
    else if (key == "sdp.p_min") c.bounds.p_min = parse_double(value);
    else if (key == "sdp.p_trace_cap") c.bounds.p_trace_cap = parse_double(value);
    else if (key == "sdp.rel_gap") c.sdp_rel_gap = parse_double(value);
    else if (key == "sdp.gap_abs") c.sdp_gap_abs = parse_double(value);
    else if (key == "sdp.max_newton") c.sdp_max_newton = parse_long(value);
    else if (key == "sdp.method") c.sdp_method = value;
    else if (key == "sdp.h_variant") c.h_variant = value;
    else if (key == "verify.tol_feas") c.tol_feas = parse_double(value);
    else if (key == "verify.check_trajectories") c.check_trajectories = parse_long(value);
    else if (key == "verify.check_length") c.check_length = parse_long(value);
    else if (key == "test.x0_1") c.test_x0_1 = parse_double(value);
    else if (key == "test.x0_2") c.test_x0_2 = parse_double(value);
    else if (key == "test.amp") c.test_amp = parse_double(value);
    else if (key == "test.freq") c.test_freq = parse_double(value);
    else if (key == "test.steps") c.test_steps = parse_long(value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_long(value));
    else if (key == "out.dir") c.out_dir = value;
    else throw ConfigError("unknown configuration key: " + key);
  }
  c.validate();
  return c;
}

HVariant PipelineConfig::h_variant_enum() const {
  if (h_variant == "appendix") return HVariant::Appendix;
  if (h_variant == "display") return HVariant::Display;
  throw ConfigError("sdp.h_variant must be 'appendix' or 'display'");
}

SdpMethod PipelineConfig::sdp_method_enum() const {
  if (sdp_method == "barrier") return SdpMethod::Barrier;
  if (sdp_method == "projection") return SdpMethod::Projection;
  throw ConfigError("sdp.method must be 'barrier' or 'projection'");
}

void PipelineConfig::validate() const {
  hyper.validate();
  (void)h_variant_enum();
  (void)sdp_method_enum();
  if (delta_x_convention != "l2" && delta_x_convention != "half-spacing") {
    throw ConfigError("budget.delta_x_convention must be 'l2' or 'half-spacing'");
  }
  if (lipschitz_provenance != "certified" && lipschitz_provenance != "sampled") {
    throw ConfigError("budget.lipschitz_provenance must be 'certified' or 'sampled'");
  }
  if (lipschitz_safety < 1.0) {
    throw ConfigError("budget.lipschitz_safety must be >= 1");
  }
  if (eval_box_max <= eval_box_min) {
    throw ConfigError("eval box is empty");
  }
  if (q > 0.0) throw ConfigError("qsr.q must be <= 0");
  if (eta <= 0.0 || tau <= 0.0) throw ConfigError("qsr.eta and qsr.tau must be positive");
}

PipelineConfig desk_config() {
  PipelineConfig c;
  c.data.num_trajectories = 40;
  c.data.steps_per_trajectory = 600;
  c.dims.lift_dim = 20;
  c.hyper.max_epochs = 5000;
  c.eval_points_per_dim = 101;
  c.out_dir = "runs/duffing-desk";
  return c;
}

PipelineConfig paper_config() {
  PipelineConfig c;  // defaults carry the case-study values
  c.out_dir = "runs/duffing-paper";
  return c;
}

}  // namespace koopcert
