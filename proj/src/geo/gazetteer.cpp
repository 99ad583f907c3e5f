#include "hijackmap/geo/gazetteer.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <unordered_set>

#include "hijackmap/errors.hpp"

namespace hijackmap::geo {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

bool valid_coordinate(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

Gazetteer::Gazetteer(std::vector<GazetteerEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    auto& e = entries_[i];
    e.name = lower(e.name);
    if (e.name.empty()) throw InputError("gazetteer entry " + std::to_string(i + 1) + " has no name");
    if (!valid_coordinate(e.lat, e.lon)) {
      throw InputError("gazetteer entry \"" + e.name + "\" has out-of-range coordinates");
    }
    if (!index_.emplace(e.name, i).second) {
      throw InputError("duplicate gazetteer name \"" + e.name + "\"");
    }
  }
}

std::optional<LatLon> Gazetteer::find(const std::string& name) const {
  const auto it = index_.find(lower(name));
  if (it == index_.end()) return std::nullopt;
  const auto& e = entries_[it->second];
  return LatLon{e.lat, e.lon};
}

Gazetteer load_gazetteer(std::istream& in) {
  std::vector<GazetteerEntry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto where = "gazetteer row " + std::to_string(row) + ": ";
    const auto c2 = line.rfind(',');
    const auto c1 = c2 == std::string::npos || c2 == 0 ? std::string::npos : line.rfind(',', c2 - 1);
    if (c1 == std::string::npos) throw InputError(where + "expected name,lat,lon");
    const std::string_view view(line);
    GazetteerEntry e;
    e.name = lower(trim(view.substr(0, c1)));
    const auto lat = parse_double(view.substr(c1 + 1, c2 - c1 - 1));
    const auto lon = parse_double(view.substr(c2 + 1));
    if (e.name.empty()) throw InputError(where + "empty name");
    if (!lat || !lon) throw InputError(where + "coordinates are not numbers");
    if (*lat < -90.0 || *lat > 90.0) throw InputError(where + "latitude out of [-90, 90]");
    if (*lon < -180.0 || *lon > 180.0) throw InputError(where + "longitude out of [-180, 180]");
    if (!seen.insert(e.name).second) throw InputError(where + "duplicate name \"" + e.name + "\"");
    e.lat = *lat;
    e.lon = *lon;
    entries.push_back(std::move(e));
  }
  return Gazetteer(std::move(entries));
}

Gazetteer load_gazetteer_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open gazetteer " + path);
  return load_gazetteer(in);
}

std::string write_gazetteer(const Gazetteer& gazetteer) {
  std::string out;
  char buf[64];
  for (const auto& e : gazetteer.entries()) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", e.lat, e.lon);
    out += e.name + buf;
  }
  return out;
}

std::vector<std::string> extract_locations(std::string_view text, const Gazetteer& gazetteer) {
  std::vector<const GazetteerEntry*> by_length;
  for (const auto& e : gazetteer.entries()) by_length.push_back(&e);
  std::stable_sort(by_length.begin(), by_length.end(),
                   [](const auto* a, const auto* b) { return a->name.size() > b->name.size(); });

  const std::string hay = lower(text);
  std::vector<std::string> found;
  std::unordered_set<std::string> seen;
  std::size_t i = 0;
  while (i < hay.size()) {
    if (i > 0 && word_char(hay[i - 1])) {
      ++i;
      continue;
    }
    const GazetteerEntry* hit = nullptr;
    for (const auto* e : by_length) {
      const auto n = e->name.size();
      if (hay.compare(i, n, e->name) != 0) continue;
      if (i + n < hay.size() && word_char(hay[i + n])) continue;
      hit = e;
      break;
    }
    if (!hit) {
      ++i;
      continue;
    }
    if (seen.insert(hit->name).second) found.push_back(hit->name);
    i += hit->name.size();
  }
  return found;
}

double haversine_km(const LatLon& a, const LatLon& b) {
  const double dlat = radians(b.lat - a.lat);
  const double dlon = radians(b.lon - a.lon);
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(radians(a.lat)) * std::cos(radians(b.lat)) * std::sin(dlon / 2) *
                       std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(s)));
}

}  // namespace hijackmap::geo
