#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "hijackmap/eval/comparison.hpp"
#include "hijackmap/geo/gazetteer.hpp"
#include "hijackmap/models/architecture.hpp"
#include "hijackmap/nn/train.hpp"

namespace hijackmap::cli {

namespace fs = std::filesystem;

/// Everything a command may need. Built from defaults, then a config file,
/// then command-line flags.
struct RunConfig {
  fs::path store;
  fs::path test_store;  // optional pre-split test set; empty means split `store`
  fs::path stoplist;
  fs::path gazetteer;
  fs::path checkpoint;
  fs::path vectorizer;  // defaults to vectorizer.tsv beside the checkpoint
  fs::path out_dir = "out";

  nn::TrainConfig train;

  // Train/test partition of `store`; zero counts mean a proportional split.
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::optional<std::size_t> train_relevant;
  std::optional<std::size_t> test_relevant;

  geo::LatLon center{-33.9249, 18.4241};
  double radius_km = 50.0;

  eval::SelectionRule cnn_rule = eval::SelectionRule::val_first;
  eval::SelectionRule mlfnn_rule = eval::SelectionRule::val_first;
  eval::SelectionRule tinyformer_rule = eval::SelectionRule::f1_first;

  std::string geocoder_url;  // empty disables remote lookups

  eval::SelectionRule rule_for(models::Family family) const;
};

/// Defaults with the stoplist and gazetteer pointing at the bundled data files.
RunConfig default_config();

/// Applies `key = value` lines (`#` starts a comment) on top of `base`.
/// Relative paths are resolved against `base_dir`. Unknown keys and
/// malformed values throw InputError naming the line.
RunConfig parse_config(std::istream& in, const fs::path& base_dir, RunConfig base);
RunConfig load_config(const fs::path& path, RunConfig base);

/// Throws InputError unless `path` names an existing regular file.
void require_file(const fs::path& path, const std::string& what);

}  // namespace hijackmap::cli
