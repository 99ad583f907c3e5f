#include "hijackmap/eval/experiment.hpp"

#include <optional>

#include "hijackmap/corpus/split.hpp"
#include "hijackmap/errors.hpp"
#include "hijackmap/eval/metrics.hpp"
#include "hijackmap/random.hpp"

namespace hijackmap::eval {

namespace {

constexpr std::uint64_t kPartitionStream = 1;
constexpr std::uint64_t kInitStream = 100;
constexpr std::uint64_t kTrainStream = 200;

std::vector<textprep::TokenSeq> tokenize_all(const corpus::Dataset& ds,
                                             const textprep::Stoplist& stoplist) {
  std::vector<textprep::TokenSeq> docs;
  docs.reserve(ds.size());
  for (const auto& r : ds.records()) docs.push_back(textprep::preprocess(r.text, stoplist));
  return docs;
}

double label_of(const corpus::TweetRecord& r) {
  if (!r.label) throw InputError("record " + r.id + " has no label");
  return static_cast<double>(*r.label);
}

void featurize(const corpus::Dataset& ds, const std::vector<textprep::TokenSeq>& docs,
               const PreparedData& prep, nn::Samples& vectors, nn::Samples& tokens) {
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const double y = label_of(ds.records()[i]);
    vectors.push(models::to_tensor(textprep::transform_tfidf(prep.tfidf, docs[i])), y);
    tokens.push(models::to_tensor(models::encode_tokens(docs[i], prep.tokens)), y);
  }
}

ComparisonRow score(models::Model& model, const PreparedData& data, const nn::TrainConfig& base) {
  const bool tokens = model.input.kind == models::InputKind::token_ids;
  const auto& fit = tokens ? data.fit_tokens : data.fit_vectors;
  const auto& val = tokens ? data.val_tokens : data.val_vectors;
  const auto& test = tokens ? data.test_tokens : data.test_vectors;

  nn::TrainConfig cfg = base;
  cfg.seed = derive_seed(base.seed, kTrainStream + model.id.catalog_index());
  if (model.id.family() == models::Family::tinyformer) cfg.learning_rate = model.id.learning_rate();

  ComparisonRow row{model.id};
  nn::train(model.net, fit, val, cfg);

  const auto train_stats = nn::evaluate(model.net, fit, cfg.loss);
  row.train_acc = train_stats.accuracy;
  row.train_loss = train_stats.loss;
  if (!val.empty()) {
    const auto val_stats = nn::evaluate(model.net, val, cfg.loss);
    row.val_acc = val_stats.accuracy;
    row.val_loss = val_stats.loss;
  }
  if (!test.empty()) {
    std::vector<int> preds, labels;
    for (std::size_t i = 0; i < test.size(); ++i) {
      preds.push_back(models::decide(nn::predict(model.net, test.inputs[i])));
      labels.push_back(static_cast<int>(test.labels[i]));
    }
    const auto m = metrics_from_confusion(confusion(preds, labels), 0.0);
    row.precision = m.precision;
    row.recall = m.recall;
    row.f1 = m.f1;
  }
  return row;
}

}  // namespace

PreparedData prepare_data(const corpus::Dataset& train, const corpus::Dataset& test,
                          const textprep::Stoplist& stoplist, double val_fraction,
                          std::uint64_t seed) {
  const auto parts =
      corpus::validation_partition(train, val_fraction, derive_seed(seed, kPartitionStream));
  const auto fit_docs = tokenize_all(parts.fit, stoplist);
  const auto val_docs = tokenize_all(parts.val, stoplist);
  const auto test_docs = tokenize_all(test, stoplist);

  PreparedData prep;
  prep.tfidf = textprep::fit_tfidf(fit_docs);
  prep.tokens = models::TokenTable::from_tfidf(prep.tfidf);
  featurize(parts.fit, fit_docs, prep, prep.fit_vectors, prep.fit_tokens);
  featurize(parts.val, val_docs, prep, prep.val_vectors, prep.val_tokens);
  featurize(test, test_docs, prep, prep.test_vectors, prep.test_tokens);
  return prep;
}

FamilyRun run_family(const PreparedData& data, models::Family family,
                     const nn::TrainConfig& config) {
  FamilyRun run;
  run.table.family = family;
  for (const auto& id : models::family_catalog(family)) {
    const std::uint64_t init_seed = derive_seed(config.seed, kInitStream + id.catalog_index());
    ComparisonRow row{id};
    std::optional<models::Model> model;
    try {
      model = family == models::Family::tinyformer
                  ? models::build_architecture(id, models::kMaxLen, init_seed, data.tokens.size())
                  : models::build_architecture(id, data.tfidf.size(), init_seed);
      row = score(*model, data, config);
    } catch (const Error& e) {
      row = ComparisonRow{id};
      row.error = e.what();
    }
    run.table.rows.push_back(std::move(row));
    run.models.push_back(std::move(model));
  }
  return run;
}

FamilyRun run_experiment(const corpus::Dataset& train, const corpus::Dataset& test,
                         models::Family family, const nn::TrainConfig& config,
                         const textprep::Stoplist& stoplist) {
  return run_family(prepare_data(train, test, stoplist, config.val_fraction, config.seed), family,
                    config);
}

}  // namespace hijackmap::eval
