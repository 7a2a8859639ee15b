#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "meshonet/elliptic.hpp"
#include "meshonet/model.hpp"
#include "meshonet/train.hpp"

namespace meshonet {

// Flat key-value experiment description (`key = value`, '#' comments).
// Unknown keys are rejected. Every field below is a documented default.
struct ExperimentConfig {
  std::string family = "arch";
  std::string protocol = "interpolation";
  std::vector<double> train_params{0.1, 0.9};
  std::vector<double> test_params{0.5};
  int n_xi = 33;
  int n_eta = 33;
  int sensors = 128;

  // elliptic ground-truth solver
  double omega = 1.3;
  double tol = 1e-8;
  long max_iters = 0;  // 0 -> 100 * max(n_xi, n_eta)^2

  // model
  int k = 100;
  int q = 5;
  std::vector<int> branch_hidden{128, 128};
  std::vector<int> trunk_hidden{128, 128, 128};

  // training
  long iterations = 100000;
  int interior_batch = 256;
  double lr = 1e-3;
  double lr_decay = 1.0;
  long lr_decay_every = 0;
  long lr_hold = 0;
  double w_int = 1.0;
  double w_bnd = 1.0;
  std::uint64_t seed = 1;
  long eval_interval = 100;

  // refinement stage of `run`
  std::vector<int> refine_resolutions{33, 65, 129, 257};
  double elliptic_cutoff_seconds = 600.0;

  Split split() const;
  SolverConfig solver() const;
  ModelSpec model_spec() const;
  TrainConfig train_config() const;
  void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig load_config(const std::string& path);

}  // namespace meshonet
