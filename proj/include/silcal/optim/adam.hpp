#pragma once

#include <Eigen/Core>

namespace silcal::optim {

/// Standard bias-corrected Adam over a small dense parameter vector.
struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  long t = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(Eigen::Index size, double lr);
};

/// One descent step: params -= lr * m_hat / (sqrt(v_hat) + eps). Throws
/// NonFiniteLossError (carrying the component index) on a non-finite
/// gradient entry.
void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad);

}  // namespace silcal::optim
