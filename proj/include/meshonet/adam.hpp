#pragma once

#include <Eigen/Dense>

namespace meshonet {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;  // first-moment estimate
  Eigen::VectorXd v;  // second-moment estimate
  long step = 0;

  AdamState() = default;
  explicit AdamState(long n) : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// Standard bias-corrected Adam update, elementwise and deterministic.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, AdamState& state,
               const AdamConfig& cfg);

}  // namespace meshonet
