#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hijackmap/corpus/dataset.hpp"
#include "hijackmap/corpus/split.hpp"
#include "hijackmap/corpus/synthetic.hpp"
#include "hijackmap/errors.hpp"
#include "hijackmap/random.hpp"

using namespace hijackmap;
using namespace hijackmap::corpus;

namespace {

std::string line(const std::string& id, const std::string& text, int label = -1) {
  std::string s = R"({"id":")" + id + R"(","text":")" + text +
                  R"(","created_at":"2022-03-01T08:00:00Z")";
  if (label >= 0) s += ",\"label\":" + std::to_string(label);
  return s + "}\n";
}

IngestResult ingest(const std::string& text, bool lenient = false) {
  std::istringstream in(text);
  return ingest_records(in, {lenient, "test"});
}

Dataset labeled(std::size_t relevant, std::size_t irrelevant) {
  Dataset ds;
  for (std::size_t i = 0; i < relevant + irrelevant; ++i) {
    ds.add({"r" + std::to_string(i), "text " + std::to_string(i), "2022-03-01T08:00:00Z",
            i < relevant ? 1 : 0});
  }
  return ds;
}

std::set<std::string> ids(const Dataset& ds) {
  std::set<std::string> out;
  for (const auto& r : ds) out.insert(r.id);
  return out;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("ingest keeps well-formed lines in order") {
  const auto r = ingest(line("a", "one") + line("b", "two", 1));
  REQUIRE(r.dataset.size() == 2);
  CHECK(r.dataset[0].id == "a");
  CHECK_FALSE(r.dataset[0].label.has_value());
  CHECK(r.dataset[1].label == 1);
  CHECK(r.lines_read == 2);
  CHECK(r.deduped == 0);
}

TEST_CASE("duplicate ids keep the first occurrence") {
  const auto r = ingest(line("a", "first") + line("a", "second"));
  REQUIRE(r.dataset.size() == 1);
  CHECK(r.dataset[0].text == "first");
  CHECK(r.deduped == 1);
}

TEST_CASE("426 well-formed lines give 426 records") {
  std::string text;
  for (int i = 0; i < 426; ++i) text += line("t" + std::to_string(i), "tweet", i % 4 == 0);
  CHECK(ingest(text).dataset.size() == 426);
}

TEST_CASE("empty source is an empty dataset") {
  CHECK(ingest("").dataset.empty());
  CHECK(ingest("\n\n").dataset.empty());
}

TEST_CASE("malformed lines are fatal unless lenient") {
  const std::string text = line("a", "ok") + "{not json}\n" + line("b", "ok");
  try {
    ingest(text);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  const auto r = ingest(text, true);
  CHECK(r.dataset.size() == 2);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 2);
}

TEST_CASE("record field rules") {
  CHECK_THROWS_AS(ingest(R"({"id":"","text":"x","created_at":"2022-03-01T08:00:00Z"})"),
                  InputError);
  CHECK_THROWS_AS(ingest(R"({"id":"a","text":"   ","created_at":"2022-03-01T08:00:00Z"})"),
                  InputError);
  CHECK_THROWS_AS(ingest(R"({"id":"a","text":"x","created_at":"yesterday"})"), InputError);
  CHECK_THROWS_AS(ingest(line("a", "x", 2)), InputError);
  CHECK_THROWS_AS(ingest(line("a", std::string(1001, 'x'))), InputError);
  CHECK_NOTHROW(ingest(line("a", std::string(1000, 'x'))));
  // Two-byte characters count once each.
  std::string accented;
  for (int i = 0; i < 1000; ++i) accented += "\xC3\xA9";
  CHECK_NOTHROW(ingest(line("a", accented)));
}

TEST_CASE("ingest, serialize, ingest round-trips") {
  const auto first = generate_synthetic_corpus(3, 10, 10);
  std::ostringstream out;
  write_records(out, first);
  CHECK(ingest(out.str()).dataset == first);

  Dataset odd;
  odd.add({"q\"1", "line\nbreak and \"quotes\" \xE2\x9C\x93", "2022-03-01T08:00:00+02:00", {}});
  std::ostringstream out2;
  write_records(out2, odd);
  CHECK(ingest(out2.str()).dataset == odd);
}

TEST_CASE("stratified split reproduces the 296/130 partition counts") {
  const auto ds = labeled(105, 321);
  SplitSpec spec{296, 130, 11, true, 76, 29};
  const auto s = split_dataset(ds, spec);
  CHECK(s.train.size() == 296);
  CHECK(s.test.size() == 130);
  CHECK(s.train.count_label(1) == 76);
  CHECK(s.train.count_label(0) == 220);
  CHECK(s.test.count_label(1) == 29);
  CHECK(s.test.count_label(0) == 101);
}

TEST_CASE("split with train_count 0") {
  const auto ds = labeled(5, 5);
  const auto s = split_dataset(ds, {0, 10, 3, false, {}, {}});
  CHECK(s.train.empty());
  CHECK(ids(s.test) == ids(ds));
}

TEST_CASE("split is deterministic per seed") {
  const auto ds = labeled(30, 70);
  const SplitSpec spec{60, 40, 5, true, 18, 12};
  const auto a = split_dataset(ds, spec);
  const auto b = split_dataset(ds, spec);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
}

TEST_CASE("split names the deficient class") {
  const auto ds = labeled(10, 90);
  try {
    split_dataset(ds, {50, 50, 1, true, 8, 8});
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("relevant (label 1)") != std::string::npos);
  }
  try {
    split_dataset(labeled(90, 10), {50, 50, 1, true, 40, 40});
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("irrelevant (label 0)") != std::string::npos);
  }
  CHECK_THROWS_AS(split_dataset(ds, {90, 20, 1, false, {}, {}}), InputError);
}

TEST_CASE("property: random splits are disjoint and keep exact class counts") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t pos = rng.below(40) + 1;
    const std::size_t neg = rng.below(40) + 1;
    const auto ds = labeled(pos, neg);
    const std::size_t train_pos = rng.below(pos + 1);
    const std::size_t test_pos = rng.below(pos - train_pos + 1);
    const std::size_t train_neg = rng.below(neg + 1);
    const std::size_t test_neg = rng.below(neg - train_neg + 1);
    const bool stratified = rng.below(2) == 1;
    SplitSpec spec{train_pos + train_neg, test_pos + test_neg, rng.next(), stratified, {}, {}};
    if (stratified) {
      spec.train_relevant = train_pos;
      spec.test_relevant = test_pos;
    }
    const auto s = split_dataset(ds, spec);
    const auto a = ids(s.train);
    const auto b = ids(s.test);
    CHECK(a.size() == spec.train_count);
    CHECK(b.size() == spec.test_count);
    for (const auto& id : a) CHECK_FALSE(b.contains(id));
    if (stratified) {
      CHECK(s.train.count_label(1) == train_pos);
      CHECK(s.test.count_label(1) == test_pos);
    }
  }
}

TEST_CASE("validation partition sizes") {
  CHECK(validation_size(296, 0.2) == 60);
  CHECK(validation_size(10, 0.2) == 2);
  CHECK(validation_size(10, 0.0) == 0);
  CHECK_THROWS_AS(validation_size(10, 1.0), InputError);
  CHECK_THROWS_AS(validation_size(10, -0.1), InputError);

  const auto ds = labeled(76, 220);
  const auto p = validation_partition(ds, 0.2, 9);
  CHECK(p.fit.size() == 236);
  CHECK(p.val.size() == 60);
  const auto none = validation_partition(ds, 0.0, 9);
  CHECK(none.val.empty());
  CHECK(ids(none.fit) == ids(ds));
  CHECK_THROWS_AS(validation_partition(Dataset{}, 0.2, 1), InputError);
  CHECK_THROWS_AS(validation_partition(ds, 1.0, 1), InputError);
}

TEST_CASE("validation partition is the trailing segment of a seeded shuffle") {
  const auto [fit, val] = validation_indices(10, 0.3, 77);
  const auto [fit2, val2] = validation_indices(10, 0.3, 77);
  CHECK(fit == fit2);
  CHECK(val == val2);
  std::vector<std::size_t> order(10);
  for (std::size_t i = 0; i < 10; ++i) order[i] = i;
  Rng rng(77);
  rng.shuffle(std::span(order));
  CHECK(val == std::vector<std::size_t>(order.begin() + 7, order.end()));
}

TEST_CASE("property: 1000 random validation sizes") {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng.below(2000) + 1;
    const double fraction = rng.uniform() * 0.999;
    const auto [fit, val] = validation_indices(n, fraction, rng.next());
    // Independent exact check: val is the least k with k >= fraction * n.
    const std::size_t k = val.size();
    CHECK(fit.size() + k == n);
    CHECK(static_cast<double>(k) >= fraction * static_cast<double>(n) - 1e-9);
    if (k > 0) CHECK(static_cast<double>(k - 1) < fraction * static_cast<double>(n) - 1e-9);
  }
}

TEST_CASE("synthetic corpus") {
  const auto ds = generate_synthetic_corpus(7, 76, 220);
  CHECK(ds.size() == 296);
  CHECK(ds.count_label(1) == 76);
  CHECK(generate_synthetic_corpus(7, 0, 0).empty());

  std::ostringstream a, b;
  write_records(a, generate_synthetic_corpus(7, 5, 5));
  write_records(b, generate_synthetic_corpus(7, 5, 5));
  CHECK(a.str() == b.str());

  for (const auto& r : ds) {
    CHECK_NOTHROW(validate_record(r));
    if (r.label != 1) continue;
    std::string lower = r.text;
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    CHECK(lower.find("hijacking") != std::string::npos);
    int places = 0;
    for (const auto& p : synthetic_places()) {
      if (lower.find(p.name) != std::string::npos) ++places;
    }
    CHECK(places == 1);
  }
}

}  // TEST_SUITE
