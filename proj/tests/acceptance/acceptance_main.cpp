// Runs the nine acceptance criteria and prints one PASS/FAIL line each.
// Exits 1 if any criterion fails.

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/attention_probe.hpp"
#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "../support/scratch.hpp"
#include "hijackmap/cli/commands.hpp"
#include "hijackmap/cli/config.hpp"
#include "hijackmap/corpus/dataset.hpp"
#include "hijackmap/corpus/synthetic.hpp"
#include "hijackmap/eval/comparison.hpp"
#include "hijackmap/eval/experiment.hpp"
#include "hijackmap/eval/metrics.hpp"
#include "hijackmap/geo/gazetteer.hpp"
#include "hijackmap/geo/map.hpp"
#include "hijackmap/nn/gradcheck.hpp"
#include "hijackmap/nn/layers.hpp"
#include "hijackmap/nn/ops.hpp"
#include "hijackmap/random.hpp"
#include "hijackmap/textprep/tfidf.hpp"

namespace fs = std::filesystem;
using namespace hijackmap;
using models::ArchitectureId;
using models::Family;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 ----------------------------------------------------------------------

Outcome metrics_oracle() {
  Outcome o;
  int cells = 0;
  for (const auto& k : fixture::count_cases()) {
    const auto m = eval::metrics_from_confusion(k.counts, 0.0);
    const std::string id = k.id.str();
    o.require(std::abs(m.precision - k.precision) <= 0.0005,
              id + " precision " + fmt("%.4f", m.precision));
    o.require(std::abs(m.recall - k.recall) <= k.recall_tolerance,
              id + " recall " + fmt("%.4f", m.recall));
    o.require(std::abs(m.f1 - k.f1) <= 0.0005, id + " f1 " + fmt("%.4f", m.f1));
    o.require(k.counts.total() == fixture::kTestSize, id + " counts do not sum to 130");
    o.require(k.counts.tp + k.counts.fn == fixture::kTestRelevant, id + " positives != 29");
    cells += 3;
  }
  if (o.pass) o.detail = std::to_string(cells) + " cells within tolerance";
  return o;
}

// 2 ----------------------------------------------------------------------

Outcome selection_oracle() {
  Outcome o;
  const auto cnn = eval::select_preferred(fixture::cnn_table(), eval::SelectionRule::val_first);
  const auto mlfnn =
      eval::select_preferred(fixture::mlfnn_table(), eval::SelectionRule::val_first);
  const auto tiny =
      eval::select_preferred(fixture::tinyformer_table(), eval::SelectionRule::f1_first);
  o.require(cnn == ArchitectureId::cnn(2), "cnn picked " + cnn.str());
  o.require(mlfnn == ArchitectureId::mlfnn(4), "mlfnn picked " + mlfnn.str());
  o.require(tiny == ArchitectureId::tinyformer(2e-5), "tinyformer picked " + tiny.str());
  if (o.pass) o.detail = cnn.str() + ", " + mlfnn.str() + ", " + tiny.str();
  return o;
}

// 3 ----------------------------------------------------------------------

nn::Tensor random_tensor(nn::Shape shape, Rng& rng) {
  nn::Tensor t(std::move(shape));
  for (auto& v : t.data()) v = rng.uniform(-1.0, 1.0);
  return t;
}

Outcome gradient_suite() {
  Outcome o;
  Rng rng(2024);
  nn::GradCheckOptions opts;
  opts.tolerance = 1e-4;
  opts.probes_per_tensor = 20;
  opts.seed = 3;
  double worst = 0.0;
  auto record = [&](const std::string& name, const nn::GradCheckReport& r) {
    worst = std::max(worst, r.max_rel_error);
    o.require(r.passed(), name + " rel error " + fmt("%.3g", r.max_rel_error));
  };

  nn::Dense dense(8, 5, nn::Activation::sigmoid);
  dense.init(rng);
  record("dense", nn::check_layer(dense, random_tensor({8}, rng), rng, true, opts));

  nn::Conv1D conv(3, 4, 5);
  conv.init(rng);
  record("conv1d", nn::check_layer(conv, random_tensor({16, 3}, rng), rng, true, opts));

  nn::MaxPool1D pool(2, 2);
  record("maxpool1d", nn::check_layer(pool, random_tensor({20, 3}, rng), rng, true, opts));

  probe::AttentionProbe attention(4);
  record("attention", nn::check_layer(attention, random_tensor({5, 12}, rng), rng, true, opts));

  nn::MultiHeadAttention mha(8, 4);
  mha.init(rng);
  record("multi-head", nn::check_layer(mha, random_tensor({6, 8}, rng), rng, true, opts));

  std::vector<double> out(20), target(20);
  for (std::size_t i = 0; i < 20; ++i) {
    out[i] = rng.uniform(0.05, 0.95);
    target[i] = static_cast<double>(rng.below(2));
  }
  record("bce", nn::check_loss(nn::LossKind::bce, out, target, opts));
  for (auto& t : target) t = rng.uniform(0.0, 1.0);
  record("mse", nn::check_loss(nn::LossKind::mse, out, target, opts));

  if (o.pass) o.detail = "7 checks, max relative error " + fmt("%.3g", worst);
  return o;
}

// 4 ----------------------------------------------------------------------

Outcome tfidf_oracle() {
  Outcome o;
  Rng rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto docs = oracle::random_corpus(rng, 10, 15);
    std::vector<textprep::TokenSeq> corpus;
    for (const auto& d : docs) corpus.push_back({d});
    const auto model = textprep::fit_tfidf(corpus);
    for (const auto& d : docs) {
      const auto got = model.transform({d});
      const auto want = oracle::tfidf_row(docs, d);
      if (got.size() != want.size()) {
        o.require(false, "width mismatch in corpus " + std::to_string(trial));
        continue;
      }
      for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    }
  }
  o.require(worst <= 1e-9, "max deviation " + fmt("%.3g", worst));
  if (o.pass) o.detail = "100 corpora, max deviation " + fmt("%.3g", worst);
  return o;
}

// 5 and 6 share one training run over the synthetic corpora ----------------

struct SyntheticRuns {
  eval::FamilyRun cnn, mlfnn, tinyformer;
};

const SyntheticRuns& synthetic_runs() {
  static const SyntheticRuns runs = [] {
    const auto train = corpus::generate_synthetic_corpus(7, 76, 220);
    const auto test = corpus::generate_synthetic_corpus(8, 29, 101);
    const auto stoplist = textprep::load_stoplist_file(cli::default_config().stoplist.string());
    nn::TrainConfig cfg;
    cfg.batch_size = 32;
    cfg.epochs = 20;
    cfg.val_fraction = 0.2;
    cfg.seed = 42;
    const auto data = eval::prepare_data(train, test, stoplist, cfg.val_fraction, cfg.seed);
    return SyntheticRuns{eval::run_family(data, Family::cnn, cfg),
                         eval::run_family(data, Family::mlfnn, cfg),
                         eval::run_family(data, Family::tinyformer, cfg)};
  }();
  return runs;
}

const eval::ComparisonRow* find_row(const eval::ComparisonTable& t, const ArchitectureId& id) {
  for (const auto& r : t.rows) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

Outcome overfit_capability() {
  Outcome o;
  const auto& runs = synthetic_runs();
  std::string detail;
  for (const auto& [table, id] :
       {std::pair{&runs.cnn.table, ArchitectureId::cnn(2)},
        std::pair{&runs.mlfnn.table, ArchitectureId::mlfnn(4)}}) {
    const auto* row = find_row(*table, id);
    if (!row || row->error) {
      o.require(false, id.str() + " did not train" + (row ? ": " + *row->error : ""));
      continue;
    }
    o.require(row->train_acc >= 0.99, id.str() + " train acc " + fmt("%.4f", row->train_acc));
    o.require(row->f1 >= 0.80, id.str() + " test F1 " + fmt("%.4f", row->f1));
    detail += (detail.empty() ? "" : ", ") + id.str() + " train acc " +
              fmt("%.4f", row->train_acc) + " F1 " + fmt("%.4f", row->f1);
  }
  if (o.pass) o.detail = detail;
  return o;
}

Outcome directional_replication() {
  Outcome o;
  const auto& runs = synthetic_runs();
  const auto cnn_id = eval::select_preferred(runs.cnn.table, eval::default_rule(Family::cnn));
  const auto mlfnn_id =
      eval::select_preferred(runs.mlfnn.table, eval::default_rule(Family::mlfnn));
  const double cnn_f1 = find_row(runs.cnn.table, cnn_id)->f1;
  const double mlfnn_f1 = find_row(runs.mlfnn.table, mlfnn_id)->f1;

  std::optional<double> best;
  std::string best_id;
  for (const auto& r : runs.tinyformer.table.rows) {
    if (r.error) continue;
    if (!best || r.f1 > *best) best = r.f1, best_id = r.id.str();
  }
  if (!best) {
    o.require(false, "every tinyformer variant failed to train");
    return o;
  }
  o.require(*best < cnn_f1, "tinyformer F1 " + fmt("%.4f", *best) + " not below " +
                                cnn_id.str() + " " + fmt("%.4f", cnn_f1));
  o.require(*best < mlfnn_f1, "tinyformer F1 " + fmt("%.4f", *best) + " not below " +
                                  mlfnn_id.str() + " " + fmt("%.4f", mlfnn_f1));
  if (o.pass) {
    o.detail = best_id + " F1 " + fmt("%.4f", *best) + " < " + cnn_id.str() + " " +
               fmt("%.4f", cnn_f1) + " and " + mlfnn_id.str() + " " + fmt("%.4f", mlfnn_f1);
  }
  return o;
}

// 7 and 9 share a scratch directory of CLI artifacts ----------------------

struct CliSession {
  scratch::Dir dir;
  std::string log;

  int run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    log += "$ hijackmap";
    for (const auto& a : args) log += " " + a;
    log += "\n" + out.str() + err.str() + "exit " + std::to_string(code) + "\n";
    return code;
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

CliSession& session() {
  static CliSession s;
  return s;
}

std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (ext == ".kv" || ext == ".hjnn" || ext == ".tsv" || ext == ".txt") {
      out[e.path().filename().string()] = scratch::read_file(e.path());
    }
  }
  return out;
}

std::optional<std::string> kv_value(const std::string& kv, const std::string& key) {
  std::istringstream in(kv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return std::nullopt;
}

Outcome determinism() {
  Outcome o;
  auto& s = session();
  o.require(s.run({"--seed", "42", "synth", "--relevant", "105", "--irrelevant", "321",
                   "--output", s.path("store.jsonl"), "--gazetteer-out", s.path("gaz.csv")}) == 0,
            "synth failed");
  for (const char* run : {"run1", "run2"}) {
    o.require(s.run({"--seed", "42", "--out", s.path(run), "experiment", "all", "--store",
                     s.path("store.jsonl")}) == 0,
              std::string("experiment ") + run + " failed");
  }
  if (!o.pass) return o;
  const auto a = artifacts(s.dir / "run1");
  const auto b = artifacts(s.dir / "run2");
  std::size_t checkpoints = 0;
  for (const auto& [name, bytes] : a) checkpoints += name.ends_with(".hjnn") ? 1 : 0;
  o.require(a.contains("report.kv"), "report.kv missing");
  o.require(checkpoints == 3, std::to_string(checkpoints) + " checkpoints written");
  o.require(a.size() == b.size(), "runs wrote different file sets");
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    o.require(it != b.end() && it->second == bytes, name + " differs between runs");
  }
  if (o.pass) {
    o.detail = std::to_string(a.size()) + " files identical, winner " +
               kv_value(a.at("report.kv"), "winner").value_or("?");
  }
  return o;
}

// 8 ----------------------------------------------------------------------

Outcome geo_invariants() {
  Outcome o;
  Rng rng(808);
  std::size_t points = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const geo::LatLon center{rng.uniform(-70, 70), rng.uniform(-175, 175)};
    const double radius = rng.uniform(0.5, 400.0);
    std::vector<geo::GazetteerEntry> entries;
    const std::size_t n = rng.below(12) + 1;
    for (std::size_t i = 0; i < n; ++i) {
      entries.push_back({"place" + std::to_string(i), center.lat + rng.uniform(-5, 5),
                         center.lon + rng.uniform(-5, 5)});
    }
    const geo::Gazetteer gaz(entries);
    std::vector<corpus::TweetRecord> tweets;
    const std::size_t t = rng.below(15);
    for (std::size_t i = 0; i < t; ++i) {
      tweets.push_back({std::to_string(i), "hijacking near " + entries[rng.below(n)].name,
                        "2020-01-01T00:00:00Z", 1});
    }
    const auto built = geo::build_map(tweets, gaz, center, radius);
    for (const auto& p : built.map.points) {
      ++points;
      // Law of cosines as an independent distance.
      const double r = std::numbers::pi / 180.0;
      const double c = std::sin(center.lat * r) * std::sin(p.lat * r) +
                       std::cos(center.lat * r) * std::cos(p.lat * r) * std::cos((p.lon - center.lon) * r);
      const double d = 6371.0 * std::acos(std::clamp(c, -1.0, 1.0));
      o.require(geo::haversine_km(center, {p.lat, p.lon}) <= radius,
                "trial " + std::to_string(trial) + " plotted " + p.name + " outside radius");
      o.require(d <= radius + 1e-6, "trial " + std::to_string(trial) + " independent distance");
    }
  }
  const double spot = geo::haversine_km({0, 0}, {0, 1});
  o.require(std::abs(spot - 111.195) <= 0.001, "haversine (0,0)-(0,1) = " + fmt("%.6f", spot));
  if (o.pass) {
    o.detail = "1000 maps, " + std::to_string(points) + " points inside; (0,0)-(0,1) = " +
               fmt("%.4f", spot) + " km";
  }
  return o;
}

// 9 ----------------------------------------------------------------------

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool names_place(const std::string& text, const std::string& place) {
  const std::string hay = lower(text);
  for (std::size_t at = hay.find(place); at != std::string::npos; at = hay.find(place, at + 1)) {
    const bool left = at == 0 || !std::isalnum(static_cast<unsigned char>(hay[at - 1]));
    const std::size_t end = at + place.size();
    const bool right = end == hay.size() || !std::isalnum(static_cast<unsigned char>(hay[end]));
    if (left && right) return true;
  }
  return false;
}

Outcome end_to_end() {
  Outcome o;
  auto& s = session();
  if (!fs::exists(s.dir / "run1" / "report.kv")) {
    o.require(false, "no experiment output to classify with");
    return o;
  }
  const auto kv = scratch::read_file(s.dir / "run1" / "report.kv");
  const auto cnn = kv_value(kv, "cnn.preferred");
  o.require(cnn.has_value(), "report.kv lacks cnn.preferred");
  if (!o.pass) return o;

  // Fresh posts the models never saw.
  const auto incoming = corpus::generate_synthetic_corpus(9, 30, 70);
  {
    std::ofstream f(s.path("incoming.jsonl"), std::ios::binary);
    corpus::write_records(f, incoming);
  }
  o.require(s.run({"classify", "--checkpoint", (s.dir / "run1" / (*cnn + ".hjnn")).string(),
                   "--input", s.path("incoming.jsonl"), "--output",
                   s.path("classified.jsonl")}) == 0,
            "classify failed");
  o.require(s.run({"--out", s.path("map"), "map", "--input", s.path("classified.jsonl"),
                   "--gazetteer", s.path("gaz.csv")}) == 0,
            "map failed");
  if (!o.pass) return o;

  std::vector<std::string> relevant_texts;
  std::istringstream lines(scratch::read_file(s.path("classified.jsonl")));
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j.at("predicted_label") == 1 && j.value("label", 0) == 1) {
      relevant_texts.push_back(j.at("text"));
    }
  }

  std::set<std::string> gazetteer;
  std::istringstream gaz(scratch::read_file(s.path("gaz.csv")));
  while (std::getline(gaz, line)) {
    const auto c2 = line.rfind(',');
    gazetteer.insert(line.substr(0, line.rfind(',', c2 - 1)));
  }

  const auto bytes = scratch::read_file(s.dir / "map" / "points.geojson");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const std::exception& e) {
    o.require(false, std::string("GeoJSON does not parse: ") + e.what());
    return o;
  }
  o.require(doc.at("type") == "FeatureCollection", "not a FeatureCollection");
  const auto& features = doc.at("features");
  o.require(!features.empty(), "no features plotted");
  for (const auto& f : features) {
    const std::string name = f.at("properties").at("name");
    o.require(gazetteer.contains(name), name + " is not a gazetteer entry");
    bool named = false;
    for (const auto& t : relevant_texts) named = named || names_place(t, name);
    o.require(named, name + " is not named by any relevant post");
  }
  const auto round = geo::emit_geojson(geo::parse_geojson(bytes));
  o.require(round == bytes, "GeoJSON does not round-trip byte for byte");
  if (o.pass) {
    o.detail = std::to_string(features.size()) + " features from " +
               std::to_string(relevant_texts.size()) + " relevant posts, classified with " + *cnn;
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "metrics oracle", metrics_oracle},
      {2, "selection oracle", selection_oracle},
      {3, "gradient suite", gradient_suite},
      {4, "tf-idf oracle", tfidf_oracle},
      {5, "overfit capability", overfit_capability},
      {6, "tinyformer trails cnn and mlfnn", directional_replication},
      {7, "determinism", determinism},
      {8, "geo invariants", geo_invariants},
      {9, "end to end", end_to_end},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.number << "] " << c.name << ": "
              << o.detail << " (" << fmt("%.1f", secs) << " s)" << std::endl;
  }
  if (failures > 0) {
    std::cout << "\nCLI log:\n" << session().log;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
