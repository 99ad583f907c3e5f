#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hijackmap/corpus/dataset.hpp"

namespace hijackmap::corpus {

/// Train/test partition request.
///
/// With `stratified` set, every record must be labeled and the number of
/// relevant records in each part is fixed: either by `train_relevant` /
/// `test_relevant`, or, when those are absent, by rounding the dataset's
/// relevant fraction.
struct SplitSpec {
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::uint64_t seed = 0;
  bool stratified = false;
  std::optional<std::size_t> train_relevant;
  std::optional<std::size_t> test_relevant;
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Seeded shuffle-then-take (per class when stratified). Members of each
/// part keep their original relative order.
Split split_dataset(const Dataset& ds, const SplitSpec& spec);

/// Index form of the validation hold-out: shuffles 0..n-1 with `seed` and
/// returns (fit, val) where val is the trailing ceil(fraction * n) indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> validation_indices(
    std::size_t n, double fraction, std::uint64_t seed);

/// Number of held-out records for n records at `fraction`, i.e. ceil(fraction * n).
std::size_t validation_size(std::size_t n, double fraction);

struct ValidationSplit {
  Dataset fit;
  Dataset val;
};

ValidationSplit validation_partition(const Dataset& train, double fraction, std::uint64_t seed);

}  // namespace hijackmap::corpus
