#include "hijackmap/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "hijackmap/random.hpp"

namespace hijackmap::nn {

namespace {

std::vector<std::size_t> probe_indices(std::size_t n, std::size_t probes, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (probes == 0 || probes >= n) return idx;
  rng.shuffle(std::span(idx));
  idx.resize(probes);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Central differences of `objective` w.r.t. selected entries of `target`,
// compared to `analytic`. Restores every perturbed entry.
TensorCheck compare(const std::string& name, Tensor& target, const Tensor& analytic,
                    const std::function<double()>& objective, const GradCheckOptions& options,
                    Rng& rng) {
  TensorCheck check{name};
  for (auto i : probe_indices(target.size(), options.probes_per_tensor, rng)) {
    const double saved = target[i];
    target[i] = saved + options.step;
    const double up = objective();
    target[i] = saved - options.step;
    const double down = objective();
    target[i] = saved;
    const double numeric = (up - down) / (2.0 * options.step);
    const double err = relative_error(analytic[i], numeric);
    ++check.probes;
    if (err >= check.max_rel_error) {
      check.max_rel_error = err;
      check.analytic_at_max = analytic[i];
      check.numeric_at_max = numeric;
    }
  }
  return check;
}

void add(GradCheckReport& report, TensorCheck check) {
  report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
  report.tensors.push_back(std::move(check));
}

}  // namespace

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

const TensorCheck* GradCheckReport::find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

GradCheckReport gradient_check(Network& net, const Tensor& x, double label, LossKind loss,
                               const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = options.tolerance;

  std::vector<Cache> caches;
  const Tensor out = net.forward(x, caches);
  const std::vector<double> y{label};
  Tensor g_out(out.shape(), loss_grad(loss, out.values(), y)[0]);
  auto grads = net.zero_grads();
  net.backward(g_out, caches, grads);

  auto objective = [&] { return loss_value(loss, net.forward(x).values(), y); };
  Rng rng(options.seed);
  auto params = net.params();
  for (std::size_t k = 0; k < params.size(); ++k) {
    add(report, compare(params[k].name, *params[k].value, grads[k], objective, options, rng));
  }
  return report;
}

GradCheckReport check_layer(Layer& layer, const Tensor& x, Rng& rng, bool check_input,
                            const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = options.tolerance;

  Cache cache;
  const Tensor y = layer.forward(x, &cache);
  Tensor weights(y.shape());
  for (auto& w : weights.data()) w = rng.uniform(-1.0, 1.0);

  auto params = layer.params();
  std::vector<Tensor> grads;
  for (auto& p : params) grads.emplace_back(p.value->shape());
  const Tensor dx = layer.backward(weights, cache, grads);

  Tensor probe_x = x;
  auto objective = [&] {
    const Tensor out = layer.forward(probe_x, nullptr);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += weights[i] * out[i];
    return s;
  };
  for (std::size_t k = 0; k < params.size(); ++k) {
    add(report, compare(params[k].name, *params[k].value, grads[k], objective, options, rng));
  }
  if (check_input) add(report, compare("input", probe_x, dx, objective, options, rng));
  return report;
}

GradCheckReport check_loss(LossKind kind, const std::vector<double>& out,
                           const std::vector<double>& target, const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = options.tolerance;
  Tensor probe({out.size()}, out);
  const Tensor analytic({out.size()}, loss_grad(kind, out, target));
  auto objective = [&] { return loss_value(kind, probe.values(), target); };
  Rng rng(options.seed);
  add(report, compare(kind == LossKind::bce ? "bce" : "mse", probe, analytic, objective, options,
                      rng));
  return report;
}

}  // namespace hijackmap::nn
