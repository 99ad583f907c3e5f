#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hijackmap/nn/network.hpp"
#include "hijackmap/nn/ops.hpp"

namespace hijackmap::nn {

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::bce;
  double learning_rate = 1e-3;
};

/// Featurized binary-labeled examples; the network emits one probability each.
struct Samples {
  std::vector<Tensor> inputs;
  std::vector<double> labels;

  std::size_t size() const { return inputs.size(); }
  bool empty() const { return inputs.empty(); }
  void push(Tensor x, double y) {
    inputs.push_back(std::move(x));
    labels.push_back(y);
  }
};

struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  EvalStats train;
  std::optional<EvalStats> val;
};

using EpochTrace = std::vector<EpochStats>;

/// Probability of the positive class for one input.
double predict(const Network& net, const Tensor& x);

/// Mean loss and accuracy (threshold 0.5) over a non-empty sample set.
EvalStats evaluate(const Network& net, const Samples& data, LossKind loss);

/// ceil(n / batch_size); the last batch may be partial.
std::size_t batches_per_epoch(std::size_t n, std::size_t batch_size);

/// Mini-batch Adam on `fit`, reshuffled every epoch from `config.seed`.
/// After each epoch the full fit set (and `val`, when non-empty) is
/// re-evaluated and recorded. A non-finite batch loss throws TrainingError
/// naming the epoch and batch.
EpochTrace train(Network& net, const Samples& fit, const Samples& val, const TrainConfig& config);

/// Holds out the trailing ceil(val_fraction * n) samples of a seeded shuffle
/// and trains on the rest.
EpochTrace train(Network& net, const Samples& data, const TrainConfig& config);

}  // namespace hijackmap::nn
