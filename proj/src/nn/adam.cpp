#include "hijackmap/nn/adam.hpp"

#include <cmath>
#include <string>

#include "hijackmap/errors.hpp"

namespace hijackmap::nn {

AdamState AdamState::for_params(std::span<const ParamRef> params, double lr) {
  AdamState s;
  s.lr = lr;
  for (const auto& p : params) {
    s.m.emplace_back(p.value->shape());
    s.v.emplace_back(p.value->shape());
  }
  return s;
}

void adam_step(std::span<const ParamRef> params, std::span<const Tensor> grads, AdamState& state) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " parameters, " +
                     std::to_string(grads.size()) + " gradients, " +
                     std::to_string(state.m.size()) + " moment slots");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    expect_shape(grads[k], params[k].value->shape(), params[k].name.c_str());
    for (std::size_t i = 0; i < grads[k].size(); ++i) {
      if (!std::isfinite(grads[k][i])) {
        throw TrainingError("non-finite gradient in " + params[k].name + " at element " +
                            std::to_string(i));
      }
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(state.beta1, t);
  const double correct2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k].value->data();
    auto m = state.m[k].data();
    auto v = state.v[k].data();
    const auto& g = grads[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      p[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

}  // namespace hijackmap::nn
