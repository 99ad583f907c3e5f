#include "hijackmap/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

#include "hijackmap/errors.hpp"

#ifndef HIJACKMAP_DATA_DIR
#define HIJACKMAP_DATA_DIR "data"
#endif

namespace hijackmap::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("\"" + text + "\" is not a valid number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw InputError("\"" + text + "\" is not finite");
  }
  return v;
}

}  // namespace

eval::SelectionRule RunConfig::rule_for(models::Family family) const {
  switch (family) {
    case models::Family::cnn: return cnn_rule;
    case models::Family::mlfnn: return mlfnn_rule;
    case models::Family::tinyformer: return tinyformer_rule;
  }
  return eval::SelectionRule::val_first;
}

RunConfig default_config() {
  RunConfig c;
  const fs::path data = HIJACKMAP_DATA_DIR;
  c.stoplist = data / "stopwords_en.txt";
  c.gazetteer = data / "gazetteer_capetown.csv";
  return c;
}

RunConfig parse_config(std::istream& in, const fs::path& base_dir, RunConfig c) {
  auto path = [&](fs::path& dst) {
    return [&dst, &base_dir](const std::string& v) {
      const fs::path p(v);
      dst = p.is_absolute() ? p : base_dir / p;
    };
  };
  auto size = [](std::size_t& dst) {
    return [&dst](const std::string& v) { dst = parse_number<std::size_t>(v); };
  };
  auto optional_size = [](std::optional<std::size_t>& dst) {
    return [&dst](const std::string& v) { dst = parse_number<std::size_t>(v); };
  };
  auto real = [](double& dst) {
    return [&dst](const std::string& v) { dst = parse_number<double>(v); };
  };
  auto rule = [](eval::SelectionRule& dst) {
    return [&dst](const std::string& v) { dst = eval::parse_rule(v); };
  };

  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"store", path(c.store)},
      {"test_store", path(c.test_store)},
      {"stoplist", path(c.stoplist)},
      {"gazetteer", path(c.gazetteer)},
      {"checkpoint", path(c.checkpoint)},
      {"vectorizer", path(c.vectorizer)},
      {"out", path(c.out_dir)},
      {"seed", [&c](const std::string& v) { c.train.seed = parse_number<std::uint64_t>(v); }},
      {"batch_size", size(c.train.batch_size)},
      {"epochs", size(c.train.epochs)},
      {"val_fraction", real(c.train.val_fraction)},
      {"learning_rate", real(c.train.learning_rate)},
      {"train_count", size(c.train_count)},
      {"test_count", size(c.test_count)},
      {"train_relevant", optional_size(c.train_relevant)},
      {"test_relevant", optional_size(c.test_relevant)},
      {"center_lat", real(c.center.lat)},
      {"center_lon", real(c.center.lon)},
      {"radius_km", real(c.radius_km)},
      {"rule.cnn", rule(c.cnn_rule)},
      {"rule.mlfnn", rule(c.mlfnn_rule)},
      {"rule.tinyformer", rule(c.tinyformer_rule)},
      {"geocoder_url", [&c](const std::string& v) { c.geocoder_url = v; }},
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw InputError(where + "unknown key \"" + key + "\"");
    try {
      it->second(value);
    } catch (const InputError& e) {
      throw InputError(where + key + ": " + e.what());
    }
  }
  if (!geo::valid_coordinate(c.center.lat, c.center.lon)) {
    throw InputError("config: center is outside coordinate bounds");
  }
  if (!(c.radius_km > 0.0)) throw InputError("config: radius_km must be positive");
  return c;
}

RunConfig load_config(const fs::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path.string());
  return parse_config(in, path.parent_path(), std::move(base));
}

void require_file(const fs::path& path, const std::string& what) {
  if (path.empty()) throw InputError(what + " path is not set");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw InputError(what + " not found: " + path.string());
}

}  // namespace hijackmap::cli
