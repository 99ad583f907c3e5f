#include "hijackmap/textprep/tfidf.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "hijackmap/errors.hpp"

namespace hijackmap::textprep {

double smooth_idf(std::size_t n_docs, std::size_t doc_freq) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(doc_freq))) +
         1.0;
}

TfidfModel::TfidfModel(std::vector<Term> terms, std::size_t n_docs)
    : terms_(std::move(terms)), n_docs_(n_docs) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1].text < terms_[i].text)) {
      throw InputError("vocabulary is not strictly sorted at \"" + terms_[i].text + "\"");
    }
    index_.emplace(terms_[i].text, i);
  }
}

std::optional<std::size_t> TfidfModel::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> TfidfModel::transform(const TokenSeq& doc) const {
  std::vector<double> row(terms_.size(), 0.0);
  for (const auto& tok : doc.tokens) {
    if (auto it = index_.find(tok); it != index_.end()) row[it->second] += 1.0;
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] *= terms_[i].idf;
    norm2 += row[i] * row[i];
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : row) v *= inv;
  }
  return row;
}

std::string TfidfModel::manifest() const {
  std::ostringstream out;
  out << "# tfidf n_docs=" << n_docs_ << " terms=" << terms_.size() << '\n';
  char idf[40];
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    std::snprintf(idf, sizeof idf, "%.17g", terms_[i].idf);
    out << terms_[i].text << '\t' << i << '\t' << terms_[i].doc_freq << '\t' << idf << '\n';
  }
  return out.str();
}

TfidfModel TfidfModel::from_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("vectorizer manifest is empty");
  std::size_t n_docs = 0;
  std::size_t n_terms = 0;
  if (std::sscanf(line.c_str(), "# tfidf n_docs=%zu terms=%zu", &n_docs, &n_terms) != 2) {
    throw InputError("vectorizer manifest has a bad header: " + line);
  }
  std::vector<Term> terms;
  terms.reserve(n_terms);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream fields(line);
    Term t;
    std::size_t index = 0;
    if (!(fields >> t.text >> index >> t.doc_freq >> t.idf) || index != terms.size()) {
      throw InputError("vectorizer manifest row " + std::to_string(row) + " is malformed");
    }
    terms.push_back(std::move(t));
  }
  if (terms.size() != n_terms) {
    throw InputError("vectorizer manifest declares " + std::to_string(n_terms) + " terms but has " +
                     std::to_string(terms.size()));
  }
  return TfidfModel(std::move(terms), n_docs);
}

bool operator==(const TfidfModel& a, const TfidfModel& b) {
  if (a.n_docs_ != b.n_docs_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (x.text != y.text || x.doc_freq != y.doc_freq || x.idf != y.idf) return false;
  }
  return true;
}

TfidfModel fit_tfidf(std::span<const TokenSeq> corpus) {
  if (corpus.empty()) throw InputError("cannot fit TF-IDF on an empty corpus");
  std::map<std::string, std::size_t> doc_freq;
  for (const auto& doc : corpus) {
    std::set<std::string_view> seen(doc.tokens.begin(), doc.tokens.end());
    for (auto term : seen) ++doc_freq[std::string(term)];
  }
  if (doc_freq.empty()) throw InputError("cannot fit TF-IDF: corpus contains no tokens");
  std::vector<TfidfModel::Term> terms;
  terms.reserve(doc_freq.size());
  for (auto& [text, df] : doc_freq) {
    terms.push_back({text, df, smooth_idf(corpus.size(), df)});
  }
  return TfidfModel(std::move(terms), corpus.size());
}

std::string fingerprint(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace hijackmap::textprep
