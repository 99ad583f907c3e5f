#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hijackmap/nn/network.hpp"
#include "hijackmap/nn/ops.hpp"

namespace hijackmap::nn {

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// |a - n| / max(1e-8, |a| + |n|)
double relative_error(double analytic, double numeric);

struct TensorCheck {
  std::string name;  // parameter name, or "input"
  std::size_t probes = 0;
  double max_rel_error = 0.0;
  double analytic_at_max = 0.0;
  double numeric_at_max = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double max_rel_error = 0.0;
  double tolerance = 0.0;

  bool passed() const { return max_rel_error < tolerance; }
  const TensorCheck* find(const std::string& name) const;
};

struct GradCheckOptions {
  double tolerance = 1e-4;
  double step = kFiniteDifferenceStep;
  /// Coordinates probed per tensor, chosen with `seed`; 0 probes every one.
  std::size_t probes_per_tensor = 0;
  std::uint64_t seed = 0;
};

/// Compares backprop gradients of loss(net(x), label) against central
/// differences for every parameter tensor of `net`.
GradCheckReport gradient_check(Network& net, const Tensor& x, double label, LossKind loss,
                               const GradCheckOptions& options = {});

/// Checks a single layer under the scalar objective sum(r * layer(x)) with a
/// random weighting r, covering both its parameters and (optionally) its input.
GradCheckReport check_layer(Layer& layer, const Tensor& x, Rng& rng, bool check_input,
                            const GradCheckOptions& options = {});

/// Checks loss_grad against central differences of loss_value in `out`.
GradCheckReport check_loss(LossKind kind, const std::vector<double>& out,
                           const std::vector<double>& target, const GradCheckOptions& options = {});

}  // namespace hijackmap::nn
