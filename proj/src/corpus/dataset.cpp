#include "hijackmap/corpus/dataset.hpp"

#include <istream>
#include <ostream>
#include <regex>

#include <json.hpp>

#include "hijackmap/errors.hpp"

namespace hijackmap::corpus {

namespace {

constexpr std::size_t kMaxTextChars = 1000;

std::size_t utf8_length(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

bool is_rfc3339(const std::string& s) {
  static const std::regex pattern(
      R"(^\d{4}-\d{2}-\d{2}[Tt]\d{2}:\d{2}:\d{2}(\.\d+)?([Zz]|[+-]\d{2}:\d{2})$)");
  return std::regex_match(s, pattern);
}

TweetRecord parse_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("record is not a JSON object");

  auto string_field = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw InputError(std::string("missing field \"") + key + "\"");
    if (!it->is_string()) throw InputError(std::string("field \"") + key + "\" is not a string");
    return it->get<std::string>();
  };

  TweetRecord r;
  r.id = string_field("id");
  r.text = string_field("text");
  r.created_at = string_field("created_at");
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw InputError("field \"label\" is not an integer");
    r.label = it->get<int>();
  }
  validate_record(r);
  return r;
}

}  // namespace

void validate_record(const TweetRecord& r) {
  if (r.id.empty()) throw InputError("empty id");
  if (blank(r.text)) throw InputError("text is empty after trimming");
  if (utf8_length(r.text) > kMaxTextChars) throw InputError("text longer than 1000 characters");
  if (!is_rfc3339(r.created_at)) {
    throw InputError("created_at \"" + r.created_at + "\" is not an RFC 3339 timestamp");
  }
  if (r.label && *r.label != 0 && *r.label != 1) {
    throw InputError("label must be 0 or 1, got " + std::to_string(*r.label));
  }
}

TweetRecord parse_record(const std::string& line) { return parse_line(line); }

bool Dataset::add(TweetRecord record) {
  if (!ids_.insert(record.id).second) return false;
  records_.push_back(std::move(record));
  return true;
}

std::size_t Dataset::count_label(int label) const {
  std::size_t n = 0;
  for (const auto& r : records_) {
    if (r.label == label) ++n;
  }
  return n;
}

IngestResult ingest_records(std::istream& source, const IngestOptions& options) {
  IngestResult result;
  result.dataset = Dataset(options.provenance);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    ++result.lines_read;
    TweetRecord record;
    try {
      record = parse_line(line);
    } catch (const InputError& e) {
      if (!options.lenient) {
        throw InputError("line " + std::to_string(line_no) + ": " + e.what());
      }
      result.errors.push_back({line_no, e.what()});
      continue;
    }
    if (!result.dataset.add(std::move(record))) ++result.deduped;
  }
  return result;
}

std::string serialize_record(const TweetRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["created_at"] = r.created_at;
  if (r.label) j["label"] = *r.label;
  return j.dump();
}

void write_records(std::ostream& out, const Dataset& dataset) {
  for (const auto& r : dataset) out << serialize_record(r) << '\n';
}

}  // namespace hijackmap::corpus
