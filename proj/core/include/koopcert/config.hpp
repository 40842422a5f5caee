// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "koopcert/dataset.hpp"
#include "koopcert/dynamics.hpp"
#include "koopcert/sdp.hpp"
#include "koopcert/text_io.hpp"
#include "koopcert/trainer.hpp"

namespace koopcert {

/// Full pipeline configuration. Parsed from flat key=value text with
/// section prefixes (e.g. train.lr0=0.003); unknown keys are rejected so a
/// typo cannot silently fall back to a default.
struct PipelineConfig {
  // dynamics.*
  DuffingSystem duffing;
  // data.*
  TrainConfig data;
  double u_eval = 0.0;
  // train.*
  NetDims dims;
  TrainHyper hyper;
  // eval.*
  double eval_box_min = -4.0;
  double eval_box_max = 4.0;
  long eval_points_per_dim = 500;
  long eval_memory_cap = 4'000'000;
  // budget.*
  std::string delta_x_convention = "l2";          // or "half-spacing"
  std::string lipschitz_provenance = "certified";  // or "sampled"
  double lipschitz_safety = 1.1;  // always applied to the sampled L_g
  long lipschitz_samples = 10'000;
  // qsr.*
  double q = -0.01;
  double s = 0.5;
  double r = 0.0;
  double eta = 1.0;
  double tau = 1.0;
  // sdp.*
  double lambda_a = 100.0;
  double lambda_b = 4.0;
  double lambda_c = 1000.0;
  double lambda_d = 100.0;
  double eps_strict = 1e-9;
  SdpBounds bounds;
  double sdp_rel_gap = 1e-6;
  double sdp_gap_abs = 1e-7;
  long sdp_max_newton = 600;
  std::string sdp_method = "barrier";  // or "projection"
  std::string h_variant = "appendix";  // or "display"
  // verify.*
  double tol_feas = 1e-8;
  long check_trajectories = 100;
  long check_length = 200;
  // test.* (held-out rollout)
  double test_x0_1 = 2.4;
  double test_x0_2 = -1.6;
  double test_amp = 0.3;
  double test_freq = 0.7;
  long test_steps = 3001;
  // top level
  std::uint64_t seed = 1;
  std::string out_dir = "runs/duffing";

  Manifest to_manifest() const;
  static PipelineConfig from_manifest(const Manifest& m);

  HVariant h_variant_enum() const;
  SdpMethod sdp_method_enum() const;
  void validate() const;
};

/// The reduced-size configuration (desk scale): 40 trajectories x 600
/// steps, lift dimension 20, 5000 epochs, 101x101 evaluation grid.
PipelineConfig desk_config();

/// The full case-study configuration: 400 trajectories x 3001 steps, lift
/// dimension 50, 50000 epochs, 500x500 evaluation grid. Training at this
/// scale takes a long time on CPU.
PipelineConfig paper_config();

}  // namespace koopcert
