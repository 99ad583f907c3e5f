#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hijackmap/nn/layers.hpp"

namespace hijackmap::nn {

/// Bias-corrected Adam moments and hyperparameters.
struct AdamState {
  std::size_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  /// Zero moments shaped like `params`.
  static AdamState for_params(std::span<const ParamRef> params, double lr = 1e-3);
};

/// One update:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps),  m_hat = m/(1-b1^t), v_hat = v/(1-b2^t)
/// All gradients are checked for finiteness before anything is modified; a
/// bad component throws TrainingError naming the parameter.
void adam_step(std::span<const ParamRef> params, std::span<const Tensor> grads, AdamState& state);

}  // namespace hijackmap::nn
