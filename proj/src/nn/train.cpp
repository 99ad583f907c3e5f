#include "hijackmap/nn/train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hijackmap/corpus/split.hpp"
#include "hijackmap/errors.hpp"
#include "hijackmap/nn/adam.hpp"
#include "hijackmap/random.hpp"

namespace hijackmap::nn {

namespace {

constexpr std::uint64_t kShuffleStream = 11;
constexpr std::uint64_t kHoldoutStream = 12;

double single_output(const Tensor& out) {
  if (out.size() != 1) {
    throw ShapeError("network must emit one probability, got shape " + shape_string(out.shape()));
  }
  return out[0];
}

}  // namespace

double predict(const Network& net, const Tensor& x) { return single_output(net.forward(x)); }

EvalStats evaluate(const Network& net, const Samples& data, LossKind loss) {
  if (data.empty()) throw InputError("cannot evaluate on an empty sample set");
  std::vector<double> probs(data.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    probs[i] = predict(net, data.inputs[i]);
    const int label = probs[i] >= 0.5 ? 1 : 0;
    if (label == static_cast<int>(data.labels[i])) ++correct;
  }
  return {loss_value(loss, probs, data.labels),
          static_cast<double>(correct) / static_cast<double>(data.size())};
}

std::size_t batches_per_epoch(std::size_t n, std::size_t batch_size) {
  return (n + batch_size - 1) / batch_size;
}

EpochTrace train(Network& net, const Samples& fit, const Samples& val, const TrainConfig& config) {
  if (fit.empty()) throw InputError("training set is empty");
  if (config.batch_size == 0) throw InputError("batch size must be positive");

  auto params = net.params();
  auto grads = net.zero_grads();
  AdamState adam = AdamState::for_params(params, config.learning_rate);
  Rng rng(derive_seed(config.seed, kShuffleStream));

  std::vector<std::size_t> order(fit.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Cache> caches;
  EpochTrace trace;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    const std::size_t n_batches = batches_per_epoch(fit.size(), config.batch_size);
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t begin = b * config.batch_size;
      const std::size_t end = std::min(begin + config.batch_size, fit.size());
      const double scale = 1.0 / static_cast<double>(end - begin);
      for (auto& g : grads) g.fill(0.0);
      double batch_loss = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t i = order[k];
        const Tensor out = net.forward(fit.inputs[i], caches);
        const double p = single_output(out);
        const double y = fit.labels[i];
        batch_loss += loss_value(config.loss, std::span(&p, 1), std::span(&y, 1)) * scale;
        Tensor g_out(out.shape(), loss_grad(config.loss, std::span(&p, 1), std::span(&y, 1))[0] * scale);
        net.backward(g_out, caches, grads);
      }
      if (!std::isfinite(batch_loss)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(b + 1));
      }
      adam_step(params, grads, adam);
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train = evaluate(net, fit, config.loss);
    if (!val.empty()) stats.val = evaluate(net, val, config.loss);
    trace.push_back(stats);
  }
  return trace;
}

EpochTrace train(Network& net, const Samples& data, const TrainConfig& config) {
  auto [fit_idx, val_idx] = corpus::validation_indices(
      data.size(), config.val_fraction, derive_seed(config.seed, kHoldoutStream));
  Samples fit, val;
  for (auto i : fit_idx) fit.push(data.inputs[i], data.labels[i]);
  for (auto i : val_idx) val.push(data.inputs[i], data.labels[i]);
  return train(net, fit, val, config);
}

}  // namespace hijackmap::nn
