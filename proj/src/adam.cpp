#include "meshonet/adam.hpp"

#include <cmath>

#include "meshonet/errors.hpp"

namespace meshonet {

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, AdamState& state,
               const AdamConfig& cfg) {
  if (state.m.size() == 0) state = AdamState(params.size());
  if (params.size() != grad.size() || params.size() != state.m.size())
    throw ContractError("adam_step: parameter, gradient, and state sizes disagree");

  state.step += 1;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
  state.v.array() = cfg.beta2 * state.v.array() + (1.0 - cfg.beta2) * grad.array().square();
  const double mc = 1.0 - std::pow(cfg.beta1, double(state.step));
  const double vc = 1.0 - std::pow(cfg.beta2, double(state.step));
  params.array() -= cfg.lr * (state.m.array() / mc) / ((state.v.array() / vc).sqrt() + cfg.eps);
}

}  // namespace meshonet
