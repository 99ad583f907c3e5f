#include <iostream>

#include <CLI11.hpp>

#include "hijackmap/cli/commands.hpp"
#include "hijackmap/errors.hpp"

namespace hijackmap::cli {

namespace {

// Paths given on the command line stay relative to the working directory.
void override_path(fs::path& dst, const CLI::Option* opt, const std::string& value) {
  if (opt->count() > 0) dst = value;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classify hijacking-incident tweets and map the places they mention", "hijackmap"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "key = value configuration file");
  auto* seed_opt = app.add_option("--seed", seed, "Base seed for every random stream");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");

  std::string store, test_store, checkpoint, vectorizer, gazetteer, geocoder;
  std::size_t epochs = 0;

  IngestArgs ingest_args;
  std::string ingest_input;
  auto* ingest = app.add_subcommand("ingest", "Append deduplicated records to the store");
  ingest->add_option("input", ingest_input, "Line-delimited JSON records")->required();
  auto* ingest_store = ingest->add_option("--store", store, "Store file");
  ingest->add_flag("--lenient", ingest_args.lenient, "Skip malformed lines instead of failing");

  SynthArgs synth_args;
  std::string synth_output, synth_gazetteer;
  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic labeled corpus");
  synth->add_option("--relevant", synth_args.relevant, "Relevant record count");
  synth->add_option("--irrelevant", synth_args.irrelevant, "Irrelevant record count");
  synth->add_option("--output", synth_output, "Output record file")->required();
  synth->add_option("--gazetteer-out", synth_gazetteer, "Also write the matching gazetteer");

  std::string family = "all";
  auto* experiment = app.add_subcommand("experiment", "Train and compare architecture variants");
  experiment->add_option("family", family, "cnn, mlfnn, tinyformer or all")
      ->check(CLI::IsMember({"cnn", "mlfnn", "tinyformer", "all"}));
  auto* exp_store = experiment->add_option("--store", store, "Labeled record store");
  auto* exp_test = experiment->add_option("--test-store", test_store, "Separate labeled test set");
  auto* exp_epochs = experiment->add_option("--epochs", epochs, "Training epochs");

  ClassifyArgs classify_args;
  std::string classify_input, classify_output;
  auto* classify = app.add_subcommand("classify", "Label records with a trained checkpoint");
  auto* cls_ckpt = classify->add_option("--checkpoint", checkpoint, "Checkpoint file");
  auto* cls_vec = classify->add_option("--vectorizer", vectorizer, "Vectorizer manifest");
  classify->add_option("--input", classify_input, "Records to classify")->required();
  classify->add_option("--output", classify_output, "Classified records")->required();

  MapArgs map_args;
  std::string map_input;
  double radius = 0.0;
  auto* map = app.add_subcommand("map", "Build the point map of relevant tweets");
  map->add_option("--input", map_input, "Classified records")->required();
  auto* map_gaz = map->add_option("--gazetteer", gazetteer, "name,lat,lon gazetteer");
  auto* map_geo = map->add_option("--geocoder-url", geocoder, "Remote geocoder base URL");
  auto* map_radius = map->add_option("--radius-km", radius, "Search radius around the center");

  std::vector<const char*> argv{"hijackmap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig config = default_config();
    if (!config_path.empty()) config = load_config(config_path, std::move(config));
    if (seed_opt->count() > 0) config.train.seed = seed;
    override_path(config.out_dir, out_opt, out_dir);

    if (ingest->parsed()) {
      override_path(config.store, ingest_store, store);
      ingest_args.input = ingest_input;
      cmd_ingest(config, ingest_args, out, err);
    } else if (synth->parsed()) {
      synth_args.output = synth_output;
      synth_args.gazetteer_out = synth_gazetteer;
      cmd_synth(config, synth_args, out);
    } else if (experiment->parsed()) {
      override_path(config.store, exp_store, store);
      override_path(config.test_store, exp_test, test_store);
      if (exp_epochs->count() > 0) config.train.epochs = epochs;
      cmd_experiment(config, family, out);
    } else if (classify->parsed()) {
      override_path(config.checkpoint, cls_ckpt, checkpoint);
      override_path(config.vectorizer, cls_vec, vectorizer);
      classify_args.input = classify_input;
      classify_args.output = classify_output;
      cmd_classify(config, classify_args, out);
    } else if (map->parsed()) {
      override_path(config.gazetteer, map_gaz, gazetteer);
      if (map_geo->count() > 0) config.geocoder_url = geocoder;
      if (map_radius->count() > 0) {
        if (!(radius > 0.0)) throw InputError("--radius-km must be positive");
        config.radius_km = radius;
      }
      map_args.input = map_input;
      cmd_map(config, map_args, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hijackmap::cli
