#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hijackmap::textprep {

using Stoplist = std::unordered_set<std::string>;

/// Ordered lowercase terms with no whitespace and no stoplist members.
struct TokenSeq {
  std::vector<std::string> tokens;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

/// Trims, lowercases (ASCII), drops URL and @mention terms, and collapses
/// whitespace runs to single spaces.
std::string clean_text(std::string_view raw);

/// Splits on whitespace, strips punctuation from token edges (inner hyphens
/// and apostrophes survive), then drops empty tokens and stoplist members.
TokenSeq tokenize(std::string_view cleaned, const Stoplist& stoplist);

/// clean_text followed by tokenize.
TokenSeq preprocess(std::string_view raw, const Stoplist& stoplist);

/// One term per line; blank lines and lines starting with '#' are skipped.
Stoplist load_stoplist(std::istream& in);
Stoplist load_stoplist_file(const std::string& path);

}  // namespace hijackmap::textprep
