#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hijackmap/corpus/dataset.hpp"
#include "hijackmap/geo/gazetteer.hpp"
#include "hijackmap/geo/resolver.hpp"

namespace hijackmap::geo {

struct GeoPoint {
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  std::size_t mentions = 1;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

inline constexpr LatLon kDefaultCenter{-33.9249, 18.4241};
inline constexpr double kDefaultRadiusKm = 50.0;

struct MapDocument {
  LatLon center = kDefaultCenter;
  double radius_km = kDefaultRadiusKm;
  std::vector<GeoPoint> points;  // sorted by name

  friend bool operator==(const MapDocument&, const MapDocument&) = default;
};

/// Counts for the run summary. Mentions are (tweet, place) pairs.
struct MapSummary {
  std::size_t tweets = 0;
  std::size_t tweets_with_place = 0;
  std::size_t mentions = 0;
  std::size_t unresolved = 0;
  std::size_t outside_radius = 0;
  std::size_t plotted = 0;
};

struct MapBuild {
  MapDocument map;
  MapSummary summary;
};

/// Extracts, resolves and radius-filters place mentions from tweets already
/// judged relevant, then aggregates mention counts per place. Throws
/// InputError when radius_km is not positive.
MapBuild build_map(std::span<const corpus::TweetRecord> relevant, const Gazetteer& gazetteer,
                   CoordinateResolver& resolver, LatLon center = kDefaultCenter,
                   double radius_km = kDefaultRadiusKm);

/// Gazetteer-only resolution.
MapBuild build_map(std::span<const corpus::TweetRecord> relevant, const Gazetteer& gazetteer,
                   LatLon center = kDefaultCenter, double radius_km = kDefaultRadiusKm);

/// Compact RFC 7946 FeatureCollection, one Point feature per GeoPoint with
/// properties {name, mentions}. Deterministic bytes.
std::string emit_geojson(const MapDocument& map);

/// Inverse of emit_geojson. The collection does not carry center or radius,
/// so those are supplied by the caller. Throws InputError on malformed input.
MapDocument parse_geojson(const std::string& bytes, LatLon center = kDefaultCenter,
                          double radius_km = kDefaultRadiusKm);

inline constexpr const char* kLeafletScript = "https://unpkg.com/leaflet@1.9.4/dist/leaflet.js";
inline constexpr const char* kLeafletStyle = "https://unpkg.com/leaflet@1.9.4/dist/leaflet.css";

/// Self-contained page drawing one circle marker per point (radius grows
/// with mentions) over the search radius. The GeoJSON is embedded verbatim;
/// without scripts the page shows it as a plain listing.
std::string emit_html_map(const MapDocument& map);

}  // namespace hijackmap::geo
