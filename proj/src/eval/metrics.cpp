#include "hijackmap/eval/metrics.hpp"

#include <string>

#include "hijackmap/errors.hpp"

namespace hijackmap::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw InputError("confusion: " + std::to_string(predictions.size()) + " predictions vs " +
                     std::to_string(labels.size()) + " labels");
  }
  if (predictions.empty()) throw InputError("confusion: no predictions");
  ConfusionMatrix c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    const int y = labels[i];
    if ((p != 0 && p != 1) || (y != 0 && y != 1)) {
      throw InputError("confusion: values must be 0 or 1 (index " + std::to_string(i) + ")");
    }
    if (p == 1 && y == 1) ++c.tp;
    else if (p == 1) ++c.fp;
    else if (y == 1) ++c.fn;
    else ++c.tn;
  }
  return c;
}

MetricsReport metrics_from_confusion(const ConfusionMatrix& c, double mean_loss) {
  MetricsReport m;
  m.loss = mean_loss;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  const double sum = m.precision + m.recall;
  m.f1 = sum > 0.0 ? 2.0 * m.precision * m.recall / sum : 0.0;
  return m;
}

}  // namespace hijackmap::eval
