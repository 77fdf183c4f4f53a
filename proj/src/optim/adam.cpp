#include "silcal/optim/adam.hpp"

#include <cmath>

#include "silcal/common/errors.hpp"

namespace silcal::optim {

AdamState AdamState::init(Eigen::Index size, double lr) {
  if (size <= 0) throw InvalidParameterError("adam: empty parameter vector");
  if (!(lr > 0.0)) throw InvalidParameterError("adam: learning rate must be positive");
  AdamState s;
  s.m = Eigen::VectorXd::Zero(size);
  s.v = Eigen::VectorXd::Zero(size);
  s.lr = lr;
  return s;
}

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad) {
  if (params.size() != state.m.size() || grad.size() != state.m.size())
    throw InvalidParameterError("adam: dimension mismatch");
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i]))
      throw NonFiniteLossError("adam: non-finite gradient component",
                               static_cast<int>(i));
  }
  state.t += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v.array().matrix() +
            (1.0 - state.beta2) * grad.array().square().matrix();
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

}  // namespace silcal::optim
