#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hijackmap/corpus/dataset.hpp"
#include "hijackmap/eval/comparison.hpp"
#include "hijackmap/models/model.hpp"
#include "hijackmap/nn/train.hpp"
#include "hijackmap/textprep/text.hpp"
#include "hijackmap/textprep/tfidf.hpp"

namespace hijackmap::eval {

/// Featurized fit/validation/test sets. The vectorizer is fitted on the fit
/// split only; the token table shares its vocabulary.
struct PreparedData {
  textprep::TfidfModel tfidf;
  models::TokenTable tokens;
  nn::Samples fit_vectors, val_vectors, test_vectors;
  nn::Samples fit_tokens, val_tokens, test_tokens;
};

/// Holds out the validation share of `train` (seeded by `seed`), fits the
/// vectorizer and featurizes all three sets. Every record must be labeled.
PreparedData prepare_data(const corpus::Dataset& train, const corpus::Dataset& test,
                          const textprep::Stoplist& stoplist, double val_fraction,
                          std::uint64_t seed);

struct FamilyRun {
  ComparisonTable table;
  /// Trained models aligned with table.rows; empty where the build failed.
  std::vector<std::optional<models::Model>> models;
};

/// Builds, trains and scores every catalog variant of `family`. Tinyformer
/// variants train at their own grid learning rate. Training failures are
/// recorded on the row and the remaining variants still run.
FamilyRun run_family(const PreparedData& data, models::Family family,
                     const nn::TrainConfig& config);

/// prepare_data followed by run_family.
FamilyRun run_experiment(const corpus::Dataset& train, const corpus::Dataset& test,
                         models::Family family, const nn::TrainConfig& config,
                         const textprep::Stoplist& stoplist);

}  // namespace hijackmap::eval
