#pragma once

// Published comparison numbers for the three families, and the confusion
// counts over a 130-post test set (29 relevant) that produce them.

#include <vector>

#include "hijackmap/eval/comparison.hpp"
#include "hijackmap/eval/metrics.hpp"
#include "hijackmap/models/architecture.hpp"

namespace fixture {

using hijackmap::eval::ComparisonRow;
using hijackmap::eval::ComparisonTable;
using hijackmap::eval::ConfusionMatrix;
using hijackmap::models::ArchitectureId;
using hijackmap::models::Family;

inline constexpr std::size_t kTestSize = 130;
inline constexpr std::size_t kTestRelevant = 29;

inline ComparisonRow row(ArchitectureId id, double ta, double tl, double va, double vl, double p,
                         double r, double f) {
  ComparisonRow out{id};
  out.train_acc = ta;
  out.train_loss = tl;
  out.val_acc = va;
  out.val_loss = vl;
  out.precision = p;
  out.recall = r;
  out.f1 = f;
  return out;
}

inline ComparisonTable cnn_table() {
  return {Family::cnn,
          {row(ArchitectureId::cnn(1), 0.9899, 0.0507, 0.9500, 0.2140, 0.9545, 0.7241, 0.8235),
           row(ArchitectureId::cnn(2), 0.9966, 0.0370, 0.9833, 0.1800, 0.9565, 0.7586, 0.8462),
           row(ArchitectureId::cnn(3), 0.9831, 0.0690, 0.9167, 0.3404, 0.9231, 0.8276, 0.8727)}};
}

inline ComparisonTable mlfnn_table() {
  return {Family::mlfnn,
          {row(ArchitectureId::mlfnn(2), 0.9865, 0.3207, 0.9333, 0.4598, 1.0, 0.7241, 0.8400),
           row(ArchitectureId::mlfnn(3), 0.9899, 0.0692, 0.9500, 0.2303, 0.9524, 0.6897, 0.8000),
           row(ArchitectureId::mlfnn(4), 0.9899, 0.0397, 0.9500, 0.1858, 0.9546, 0.7241, 0.8235)}};
}

inline ComparisonTable tinyformer_table() {
  return {Family::tinyformer,
          {row(ArchitectureId::tinyformer(2e-5), 0.7399, 0.6168, 0.8500, 0.5771, 0.2857, 0.0699,
               0.1111),
           row(ArchitectureId::tinyformer(3e-5), 0.7432, 0.5515, 0.9000, 0.4742, 0.0, 0.0, 0.0),
           row(ArchitectureId::tinyformer(4e-5), 0.7466, 0.5498, 0.9000, 0.4659, 0.1667, 0.0345,
               0.0571),
           row(ArchitectureId::tinyformer(5e-5), 0.7432, 0.5544, 0.9000, 0.4517, 0.0, 0.0, 0.0)}};
}

/// tp/fp/fn per row; tn fills the rest of the 130 test posts.
inline ConfusionMatrix counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  return {tp, fp, fn, kTestSize - tp - fp - fn};
}

struct CountCase {
  ArchitectureId id;
  ConfusionMatrix counts;
  double precision, recall, f1;
  double recall_tolerance = 0.0005;
};

inline std::vector<CountCase> count_cases() {
  return {
      {ArchitectureId::cnn(1), counts(21, 1, 8), 0.9545, 0.7241, 0.8235},
      {ArchitectureId::cnn(2), counts(22, 1, 7), 0.9565, 0.7586, 0.8462},
      {ArchitectureId::cnn(3), counts(24, 2, 5), 0.9231, 0.8276, 0.8727},
      {ArchitectureId::mlfnn(2), counts(21, 0, 8), 1.0, 0.7241, 0.8400},
      {ArchitectureId::mlfnn(3), counts(20, 1, 9), 0.9524, 0.6897, 0.8000},
      {ArchitectureId::mlfnn(4), counts(21, 1, 8), 0.9546, 0.7241, 0.8235},
      // 0.0699 is not reachable with 29 positives; 2/29 = 0.0690.
      {ArchitectureId::tinyformer(2e-5), counts(2, 5, 27), 0.2857, 0.0699, 0.1111, 0.001},
      {ArchitectureId::tinyformer(3e-5), counts(0, 0, 29), 0.0, 0.0, 0.0},
      {ArchitectureId::tinyformer(4e-5), counts(1, 5, 28), 0.1667, 0.0345, 0.0571},
      {ArchitectureId::tinyformer(5e-5), counts(0, 0, 29), 0.0, 0.0, 0.0},
  };
}

}  // namespace fixture
