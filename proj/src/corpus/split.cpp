#include "hijackmap/corpus/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hijackmap/errors.hpp"
#include "hijackmap/random.hpp"

namespace hijackmap::corpus {

namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

Dataset gather(const Dataset& ds, std::vector<std::size_t> indices, const std::string& tag) {
  std::sort(indices.begin(), indices.end());
  Dataset out(ds.provenance().empty() ? tag : ds.provenance() + "#" + tag);
  for (auto i : indices) out.add(ds[i]);
  return out;
}

std::size_t rounded_share(std::size_t part, std::size_t whole, std::size_t count) {
  if (whole == 0) return 0;
  return static_cast<std::size_t>(std::llround(static_cast<double>(count) * part / whole));
}

}  // namespace

Split split_dataset(const Dataset& ds, const SplitSpec& spec) {
  if (spec.train_count + spec.test_count > ds.size()) {
    throw InputError("split requests " + std::to_string(spec.train_count + spec.test_count) +
                     " records but the dataset has " + std::to_string(ds.size()));
  }
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> test_idx;

  if (!spec.stratified) {
    auto order = iota_indices(ds.size());
    Rng rng(spec.seed);
    rng.shuffle(std::span(order));
    train_idx.assign(order.begin(), order.begin() + spec.train_count);
    test_idx.assign(order.begin() + spec.train_count,
                    order.begin() + spec.train_count + spec.test_count);
  } else {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (!ds[i].label) {
        throw InputError("stratified split needs labels; record \"" + ds[i].id + "\" has none");
      }
      (*ds[i].label == 1 ? pos : neg).push_back(i);
    }
    const std::size_t train_pos =
        spec.train_relevant.value_or(rounded_share(spec.train_count, ds.size(), pos.size()));
    const std::size_t test_pos =
        spec.test_relevant.value_or(rounded_share(spec.test_count, ds.size(), pos.size()));
    if (train_pos > spec.train_count || test_pos > spec.test_count) {
      throw InputError("relevant counts exceed the requested part sizes");
    }
    const std::size_t train_neg = spec.train_count - train_pos;
    const std::size_t test_neg = spec.test_count - test_pos;
    if (train_pos + test_pos > pos.size()) {
      throw InputError("not enough relevant (label 1) records: have " +
                     std::to_string(pos.size()) + ", split needs " +
                     std::to_string(train_pos + test_pos));
    }
    if (train_neg + test_neg > neg.size()) {
      throw InputError("not enough irrelevant (label 0) records: have " +
                     std::to_string(neg.size()) + ", split needs " +
                     std::to_string(train_neg + test_neg));
    }
    Rng rng(spec.seed);
    rng.shuffle(std::span(pos));
    rng.shuffle(std::span(neg));
    auto take = [](const std::vector<std::size_t>& from, std::size_t offset, std::size_t n,
                   std::vector<std::size_t>& to) {
      to.insert(to.end(), from.begin() + offset, from.begin() + offset + n);
    };
    take(pos, 0, train_pos, train_idx);
    take(neg, 0, train_neg, train_idx);
    take(pos, train_pos, test_pos, test_idx);
    take(neg, train_neg, test_neg, test_idx);
  }
  return {gather(ds, std::move(train_idx), "train"), gather(ds, std::move(test_idx), "test")};
}

std::size_t validation_size(std::size_t n, double fraction) {
  if (!(fraction >= 0.0) || fraction >= 1.0) {
    throw InputError("validation fraction must lie in [0, 1), got " + std::to_string(fraction));
  }
  // The slack absorbs representation error such as 0.2 * 10 = 2.0000000000000004.
  const double exact = fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> validation_indices(
    std::size_t n, double fraction, std::uint64_t seed) {
  const std::size_t val = validation_size(n, fraction);
  auto order = iota_indices(n);
  Rng rng(seed);
  rng.shuffle(std::span(order));
  std::vector<std::size_t> fit(order.begin(), order.end() - static_cast<std::ptrdiff_t>(val));
  std::vector<std::size_t> held(order.end() - static_cast<std::ptrdiff_t>(val), order.end());
  return {std::move(fit), std::move(held)};
}

ValidationSplit validation_partition(const Dataset& train, double fraction, std::uint64_t seed) {
  if (train.empty()) throw InputError("validation partition of an empty dataset");
  auto [fit, val] = validation_indices(train.size(), fraction, seed);
  // Both parts keep the shuffled order.
  ValidationSplit out{Dataset(train.provenance() + "#fit"), Dataset(train.provenance() + "#val")};
  for (auto i : fit) out.fit.add(train[i]);
  for (auto i : val) out.val.add(train[i]);
  return out;
}

}  // namespace hijackmap::corpus
