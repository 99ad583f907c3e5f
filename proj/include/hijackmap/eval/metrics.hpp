#pragma once

#include <cstddef>
#include <span>

namespace hijackmap::eval {

/// Binary confusion counts with label 1 as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double loss = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Throws InputError on a length mismatch, an empty input, or a value
/// other than 0/1.
ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels);

/// Precision, recall and F1 are 0 whenever their denominator vanishes; F1 is
/// the harmonic mean 2PR/(P+R).
MetricsReport metrics_from_confusion(const ConfusionMatrix& c, double mean_loss);

}  // namespace hijackmap::eval
