#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hijackmap/textprep/text.hpp"

namespace hijackmap::textprep {

/// Fitted TF-IDF vocabulary.
///
/// Columns are assigned in lexicographic term order. Weights use the
/// smoothed inverse document frequency
///
///     idf(t) = ln((1 + n_docs) / (1 + doc_freq(t))) + 1
///
/// and transformed rows are raw counts times idf, L2-normalized.
class TfidfModel {
 public:
  struct Term {
    std::string text;
    std::size_t doc_freq = 0;
    double idf = 0.0;
  };

  TfidfModel() = default;
  TfidfModel(std::vector<Term> terms, std::size_t n_docs);

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::optional<std::size_t> index_of(const std::string& term) const;

  /// Dense L2-normalized feature row (all zeros when nothing matched).
  std::vector<double> transform(const TokenSeq& doc) const;

  /// Tab-separated audit manifest: a `# tfidf n_docs=N terms=V` header, then
  /// one `term<TAB>index<TAB>doc_freq<TAB>idf` row per column.
  std::string manifest() const;
  static TfidfModel from_manifest(std::istream& in);

  friend bool operator==(const TfidfModel& a, const TfidfModel& b);

 private:
  std::vector<Term> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t n_docs_ = 0;
};

double smooth_idf(std::size_t n_docs, std::size_t doc_freq);

/// Throws InputError for an empty corpus or one without any tokens.
TfidfModel fit_tfidf(std::span<const TokenSeq> corpus);

inline std::vector<double> transform_tfidf(const TfidfModel& model, const TokenSeq& doc) {
  return model.transform(doc);
}

/// FNV-1a 64-bit digest of `bytes`, as 16 lowercase hex digits.
std::string fingerprint(std::string_view bytes);

}  // namespace hijackmap::textprep
