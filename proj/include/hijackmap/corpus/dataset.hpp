#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace hijackmap::corpus {

/// One ingested post. `label` is 1 for a relevant incident report, 0 otherwise.
struct TweetRecord {
  std::string id;
  std::string text;
  std::string created_at;  // RFC 3339, UTC
  std::optional<int> label;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

/// Throws InputError describing the first violated field invariant.
void validate_record(const TweetRecord& record);

/// Insertion-ordered collection of records with unique ids.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::string provenance) : provenance_(std::move(provenance)) {}

  /// Appends unless the id is already present. Returns false for a duplicate.
  bool add(TweetRecord record);

  bool contains(const std::string& id) const { return ids_.contains(id); }

  const std::vector<TweetRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }
  const TweetRecord& operator[](std::size_t i) const { return records_[i]; }

  const std::string& provenance() const { return provenance_; }

  /// Number of records carrying the given label.
  std::size_t count_label(int label) const;

  friend bool operator==(const Dataset& a, const Dataset& b) { return a.records_ == b.records_; }

 private:
  std::vector<TweetRecord> records_;
  std::unordered_set<std::string> ids_;
  std::string provenance_;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  Dataset dataset;
  std::size_t lines_read = 0;  // non-blank lines
  std::size_t deduped = 0;
  std::vector<LineError> errors;  // only populated in lenient mode
};

struct IngestOptions {
  bool lenient = false;
  std::string provenance;
};

/// Reads line-delimited JSON records. Blank lines are ignored; duplicate ids
/// keep the first occurrence. A malformed line throws InputError naming the
/// line unless `lenient` is set, in which case it is recorded and skipped.
IngestResult ingest_records(std::istream& source, const IngestOptions& options = {});

/// Parses and validates one record line; unknown keys are ignored.
TweetRecord parse_record(const std::string& line);

/// One record per line, keys in the order id, text, created_at, label.
std::string serialize_record(const TweetRecord& record);
void write_records(std::ostream& out, const Dataset& dataset);

}  // namespace hijackmap::corpus
