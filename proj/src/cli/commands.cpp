#include "hijackmap/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "hijackmap/corpus/dataset.hpp"
#include "hijackmap/corpus/split.hpp"
#include "hijackmap/corpus/synthetic.hpp"
#include "hijackmap/errors.hpp"
#include "hijackmap/eval/experiment.hpp"
#include "hijackmap/geo/map.hpp"
#include "hijackmap/geo/resolver.hpp"
#include "hijackmap/models/checkpoint.hpp"
#include "hijackmap/textprep/text.hpp"
#include "hijackmap/textprep/tfidf.hpp"

namespace hijackmap::cli {

namespace {

// Share of the corpus held out for testing when no counts are configured
// (130 of 426 records).
constexpr double kDefaultTestShare = 130.0 / 426.0;

corpus::Dataset load_dataset(const fs::path& path, const std::string& what) {
  require_file(path, what);
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + what + " " + path.string());
  try {
    return corpus::ingest_records(in, {false, path.string()}).dataset;
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw Error("cannot write " + path.string());
}

std::vector<models::Family> families_for(const std::string& name) {
  if (name == "all") {
    return {models::Family::cnn, models::Family::mlfnn, models::Family::tinyformer};
  }
  return {models::parse_family(name)};
}

corpus::Split split_store(const corpus::Dataset& store, const RunConfig& config) {
  const std::size_t n = store.size();
  const std::size_t relevant = store.count_label(1);
  const std::size_t irrelevant = store.count_label(0);
  if (relevant + irrelevant != n) throw InputError("store contains unlabeled records");
  if (relevant == 0 || irrelevant == 0) {
    throw InputError("stratified split needs both classes, but the store has " +
                     std::to_string(relevant) + " relevant and " + std::to_string(irrelevant) +
                     " irrelevant records");
  }
  corpus::SplitSpec spec;
  spec.seed = config.train.seed;
  spec.stratified = true;
  spec.train_relevant = config.train_relevant;
  spec.test_relevant = config.test_relevant;
  spec.train_count = config.train_count;
  spec.test_count = config.test_count;
  if (spec.train_count == 0 && spec.test_count == 0) {
    spec.test_count = static_cast<std::size_t>(std::llround(kDefaultTestShare * n));
  }
  if (spec.train_count == 0) spec.train_count = n - std::min(n, spec.test_count);
  if (spec.test_count == 0) spec.test_count = n - std::min(n, spec.train_count);
  return corpus::split_dataset(store, spec);
}

std::string setting_lines(const RunConfig& c, std::size_t n_train, std::size_t n_test) {
  std::ostringstream s;
  s << "seed=" << c.train.seed << '\n'
    << "epochs=" << c.train.epochs << '\n'
    << "batch_size=" << c.train.batch_size << '\n'
    << "val_fraction=" << c.train.val_fraction << '\n'
    << "learning_rate=" << c.train.learning_rate << '\n'
    << "train_records=" << n_train << '\n'
    << "test_records=" << n_test << '\n';
  return s.str();
}

}  // namespace

void cmd_ingest(const RunConfig& config, const IngestArgs& args, std::ostream& out,
                std::ostream& err) {
  require_file(args.input, "input");
  if (config.store.empty()) throw InputError("no store configured (use --store)");

  corpus::Dataset existing;
  if (fs::exists(config.store)) existing = load_dataset(config.store, "store");

  std::ifstream in(args.input);
  if (!in) throw InputError("cannot read input " + args.input.string());
  const auto result = corpus::ingest_records(in, {args.lenient, args.input.string()});
  for (const auto& e : result.errors) {
    err << "skipped line " << e.line << ": " << e.message << '\n';
  }

  std::string appended;
  std::size_t added = 0;
  std::size_t deduped = result.deduped;
  for (const auto& r : result.dataset) {
    if (existing.contains(r.id)) {
      ++deduped;
      continue;
    }
    appended += corpus::serialize_record(r) + '\n';
    ++added;
  }
  if (config.store.has_parent_path()) fs::create_directories(config.store.parent_path());
  std::ofstream store(config.store, std::ios::binary | std::ios::app);
  store << appended;
  if (!store) throw Error("cannot append to store " + config.store.string());

  out << "read " << result.lines_read << " added " << added << " deduped " << deduped;
  if (!result.errors.empty()) out << " skipped " << result.errors.size();
  out << '\n';
}

void cmd_synth(const RunConfig& config, const SynthArgs& args, std::ostream& out) {
  if (args.output.empty()) throw InputError("synth needs --output");
  const auto ds =
      corpus::generate_synthetic_corpus(config.train.seed, args.relevant, args.irrelevant);
  std::ostringstream records;
  corpus::write_records(records, ds);
  write_file(args.output, records.str());
  out << "wrote " << ds.size() << " records (" << ds.count_label(1) << " relevant) to "
      << args.output.string() << '\n';

  if (!args.gazetteer_out.empty()) {
    std::vector<geo::GazetteerEntry> entries;
    for (const auto& p : corpus::synthetic_places()) entries.push_back({p.name, p.lat, p.lon});
    write_file(args.gazetteer_out, geo::write_gazetteer(geo::Gazetteer(std::move(entries))));
    out << "wrote gazetteer to " << args.gazetteer_out.string() << '\n';
  }
}

void cmd_experiment(const RunConfig& config, const std::string& family, std::ostream& out) {
  const auto families = families_for(family);
  require_file(config.stoplist, "stoplist");
  const auto store = load_dataset(config.store, "store");

  corpus::Split split;
  if (!config.test_store.empty()) {
    split.train = store;
    split.test = load_dataset(config.test_store, "test store");
  } else {
    split = split_store(store, config);
  }
  if (split.train.count_label(1) == 0 || split.train.count_label(0) == 0) {
    throw InputError("training data must contain both relevant and irrelevant records");
  }

  const auto stoplist = textprep::load_stoplist_file(config.stoplist.string());
  const auto data = eval::prepare_data(split.train, split.test, stoplist,
                                       config.train.val_fraction, config.train.seed);
  const std::string manifest = data.tfidf.manifest();
  const std::string hash = textprep::fingerprint(manifest);

  fs::create_directories(config.out_dir);
  write_file(config.out_dir / "vectorizer.tsv", manifest);

  std::string text;
  std::string kv = setting_lines(config, split.train.size(), split.test.size());
  kv += "vectorizer=" + hash + "\n";
  std::vector<eval::ComparisonRow> preferred_rows;
  for (const auto f : families) {
    auto run = eval::run_family(data, f, config.train);
    const auto rule = config.rule_for(f);
    const std::string name(models::family_name(f));
    std::size_t pick = 0;
    try {
      const auto id = eval::select_preferred(run.table, rule);
      while (!(run.table.rows[pick].id == id)) ++pick;
    } catch (const InputError&) {
      throw TrainingError("every " + name + " variant failed to train");
    }
    const auto& row = run.table.rows[pick];
    preferred_rows.push_back(row);

    std::ostringstream ckpt;
    models::save_checkpoint(ckpt, *run.models[pick], hash);
    write_file(config.out_dir / (row.id.str() + ".hjnn"), ckpt.str());

    if (!text.empty()) text += "\n";
    text += eval::render_table(run.table);
    text += "\npreferred " + name + ": " + row.id.str() + " (" +
            std::string(eval::rule_name(rule)) + ")\n";
    kv += eval::render_key_values(run.table);
    kv += name + ".rule=" + std::string(eval::rule_name(rule)) + "\n";
    kv += name + ".preferred=" + row.id.str() + "\n";
  }
  const auto winner = eval::select_among(preferred_rows, eval::SelectionRule::f1_first);
  text += "\nwinner: " + winner.str() + "\n";
  kv += "winner=" + winner.str() + "\n";

  write_file(config.out_dir / "report.txt", text);
  write_file(config.out_dir / "report.kv", kv);
  out << text;
}

void cmd_classify(const RunConfig& config, const ClassifyArgs& args, std::ostream& out) {
  require_file(config.checkpoint, "checkpoint");
  const fs::path vectorizer = config.vectorizer.empty()
                                  ? config.checkpoint.parent_path() / "vectorizer.tsv"
                                  : config.vectorizer;
  require_file(vectorizer, "vectorizer manifest");
  require_file(args.input, "input");
  require_file(config.stoplist, "stoplist");
  if (args.output.empty()) throw InputError("classify needs --output");

  const std::string manifest = read_file(vectorizer);
  const std::string hash = textprep::fingerprint(manifest);
  std::ifstream ckpt_in(config.checkpoint, std::ios::binary);
  auto loaded = models::load_checkpoint(ckpt_in);
  if (loaded.vectorizer_hash != hash) {
    throw ConsistencyError("checkpoint " + config.checkpoint.string() +
                           " was trained with vectorizer " + loaded.vectorizer_hash + ", but " +
                           vectorizer.string() + " has fingerprint " + hash);
  }
  std::istringstream manifest_in(manifest);
  const auto tfidf = textprep::TfidfModel::from_manifest(manifest_in);
  const auto tokens = models::TokenTable::from_tfidf(tfidf);
  const auto stoplist = textprep::load_stoplist_file(config.stoplist.string());
  const auto records = load_dataset(args.input, "input");
  const auto& model = loaded.model;

  std::string lines;
  std::size_t positive = 0;
  for (const auto& r : records) {
    const auto doc = textprep::preprocess(r.text, stoplist);
    const auto c = model.input.kind == models::InputKind::token_ids
                       ? models::classify(model, models::encode_tokens(doc, tokens))
                       : models::classify(model, textprep::transform_tfidf(tfidf, doc));
    auto j = nlohmann::ordered_json::parse(corpus::serialize_record(r));
    j["probability"] = c.probability;
    j["predicted_label"] = c.label;
    lines += j.dump() + "\n";
    positive += static_cast<std::size_t>(c.label);
  }
  write_file(args.output, lines);
  out << "classified " << records.size() << " records with " << model.id.str() << ", "
      << positive << " predicted relevant\n";
}

void cmd_map(const RunConfig& config, const MapArgs& args, std::ostream& out) {
  require_file(args.input, "classified input");
  require_file(config.gazetteer, "gazetteer");
  const auto gazetteer = geo::load_gazetteer_file(config.gazetteer.string());

  std::ifstream in(args.input);
  if (!in) throw InputError("cannot read " + args.input.string());
  std::vector<corpus::TweetRecord> relevant;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = args.input.string() + " line " + std::to_string(line_no) + ": ";
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError(where + "not a JSON object");
    const auto it = j.find("predicted_label");
    if (it == j.end() || !it->is_number_integer()) {
      throw InputError(where + "missing integer predicted_label (run classify first)");
    }
    try {
      auto record = corpus::parse_record(line);
      if (it->get<int>() == 1) relevant.push_back(std::move(record));
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }

  std::unique_ptr<geo::HttpGeocoder> remote;
  if (!config.geocoder_url.empty()) remote = std::make_unique<geo::HttpGeocoder>(config.geocoder_url);
  geo::CoordinateResolver resolver(gazetteer, remote.get());
  const auto built = geo::build_map(relevant, gazetteer, resolver, config.center, config.radius_km);

  fs::create_directories(config.out_dir);
  write_file(config.out_dir / "points.geojson", geo::emit_geojson(built.map));
  write_file(config.out_dir / "map.html", geo::emit_html_map(built.map));

  const auto& s = built.summary;
  out << "relevant " << s.tweets << " resolved " << (s.mentions - s.unresolved)
      << " within-radius " << s.plotted << " unresolved-dropped " << s.unresolved
      << " outside-radius " << s.outside_radius << " places " << built.map.points.size() << '\n';
}

}  // namespace hijackmap::cli
