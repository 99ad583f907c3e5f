#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hijackmap::geo {

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct GazetteerEntry {
  std::string name;  // lowercase
  double lat = 0.0;
  double lon = 0.0;
};

class Gazetteer {
 public:
  Gazetteer() = default;
  /// Lowercases names. Throws InputError on a duplicate name or
  /// out-of-range coordinate.
  explicit Gazetteer(std::vector<GazetteerEntry> entries);

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  /// Case-insensitive exact-name lookup.
  std::optional<LatLon> find(const std::string& name) const;

 private:
  std::vector<GazetteerEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Headerless `name,lat,lon` rows. Names are trimmed and lowercased; blank
/// lines are skipped. Errors name the 1-based row.
Gazetteer load_gazetteer(std::istream& in);
Gazetteer load_gazetteer_file(const std::string& path);

std::string write_gazetteer(const Gazetteer& gazetteer);

/// Gazetteer names found in `text`: case-insensitive, on word boundaries,
/// longest name first at each position, each name once, in order of first
/// appearance.
std::vector<std::string> extract_locations(std::string_view text, const Gazetteer& gazetteer);

inline constexpr double kEarthRadiusKm = 6371.0;

double haversine_km(const LatLon& a, const LatLon& b);

bool valid_coordinate(double lat, double lon);

}  // namespace hijackmap::geo
