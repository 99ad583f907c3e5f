#include "hijackmap/textprep/text.hpp"

#include <cctype>
#include <fstream>
#include <istream>

#include "hijackmap/errors.hpp"

namespace hijackmap::textprep {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

template <typename Fn>
void for_each_word(std::string_view s, Fn&& fn) {
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) fn(s.substr(start, i - start));
  }
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for_each_word(raw, [&](std::string_view word) {
    std::string lower(word);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower.starts_with("http") || lower.starts_with("@")) return;
    if (!out.empty()) out += ' ';
    out += lower;
  });
  return out;
}

TokenSeq tokenize(std::string_view cleaned, const Stoplist& stoplist) {
  TokenSeq seq;
  for_each_word(cleaned, [&](std::string_view word) {
    while (!word.empty() && is_punct(word.front())) word.remove_prefix(1);
    while (!word.empty() && is_punct(word.back())) word.remove_suffix(1);
    if (word.empty()) return;
    std::string token(word);
    if (stoplist.contains(token)) return;
    seq.tokens.push_back(std::move(token));
  });
  return seq;
}

TokenSeq preprocess(std::string_view raw, const Stoplist& stoplist) {
  return tokenize(clean_text(raw), stoplist);
}

Stoplist load_stoplist(std::istream& in) {
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    const auto cleaned = clean_text(line);
    if (cleaned.empty() || cleaned.front() == '#') continue;
    out.insert(cleaned);
  }
  return out;
}

Stoplist load_stoplist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stoplist " + path);
  return load_stoplist(in);
}

}  // namespace hijackmap::textprep
