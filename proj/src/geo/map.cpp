#include "hijackmap/geo/map.hpp"

#include <cstdio>
#include <map>

#include <json.hpp>

#include "hijackmap/errors.hpp"

namespace hijackmap::geo {

namespace {

using ordered = nlohmann::ordered_json;

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Keeps a literal "</" from closing the surrounding script element.
std::string script_safe(std::string s) {
  for (std::size_t at = s.find("</"); at != std::string::npos; at = s.find("</", at + 3)) {
    s.replace(at, 2, "<\\/");
  }
  return s;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

MapBuild build_map(std::span<const corpus::TweetRecord> relevant, const Gazetteer& gazetteer,
                   CoordinateResolver& resolver, LatLon center, double radius_km) {
  if (!(radius_km > 0.0)) throw InputError("map radius must be positive");
  MapBuild out;
  out.map.center = center;
  out.map.radius_km = radius_km;
  std::map<std::string, GeoPoint> points;
  for (const auto& tweet : relevant) {
    ++out.summary.tweets;
    const auto names = extract_locations(tweet.text, gazetteer);
    if (!names.empty()) ++out.summary.tweets_with_place;
    for (const auto& name : names) {
      ++out.summary.mentions;
      const auto where = resolver.resolve(name);
      if (!where) {
        ++out.summary.unresolved;
        continue;
      }
      if (haversine_km(*where, center) > radius_km) {
        ++out.summary.outside_radius;
        continue;
      }
      ++out.summary.plotted;
      auto [it, fresh] = points.try_emplace(name, GeoPoint{name, where->lat, where->lon, 1});
      if (!fresh) ++it->second.mentions;
    }
  }
  for (auto& [name, p] : points) out.map.points.push_back(std::move(p));
  return out;
}

MapBuild build_map(std::span<const corpus::TweetRecord> relevant, const Gazetteer& gazetteer,
                   LatLon center, double radius_km) {
  CoordinateResolver resolver(gazetteer);
  return build_map(relevant, gazetteer, resolver, center, radius_km);
}

std::string emit_geojson(const MapDocument& map) {
  ordered doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = ordered::array();
  for (const auto& p : map.points) {
    ordered feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}};
    feature["properties"] = {{"name", p.name}, {"mentions", p.mentions}};
    doc["features"].push_back(std::move(feature));
  }
  return doc.dump();
}

MapDocument parse_geojson(const std::string& bytes, LatLon center, double radius_km) {
  const auto doc = nlohmann::json::parse(bytes, nullptr, false);
  if (doc.is_discarded()) throw InputError("GeoJSON is not valid JSON");
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw InputError("GeoJSON is not a FeatureCollection");
  }
  MapDocument map;
  map.center = center;
  map.radius_km = radius_km;
  std::size_t i = 0;
  for (const auto& f : doc["features"]) {
    const auto where = "feature " + std::to_string(i++) + ": ";
    try {
      const auto& coords = f.at("geometry").at("coordinates");
      if (f.at("geometry").at("type") != "Point" || !coords.is_array() || coords.size() != 2) {
        throw InputError(where + "expected a Point");
      }
      GeoPoint p;
      p.lon = coords[0].get<double>();
      p.lat = coords[1].get<double>();
      p.name = f.at("properties").at("name").get<std::string>();
      p.mentions = f.at("properties").at("mentions").get<std::size_t>();
      if (p.mentions == 0) throw InputError(where + "mentions must be positive");
      map.points.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + e.what());
    }
  }
  return map;
}

std::string emit_html_map(const MapDocument& map) {
  const std::string geojson = emit_geojson(map);
  std::string listing = geojson;
  if (!map.points.empty()) listing = nlohmann::json::parse(geojson).dump(2);

  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Hijacking incident map</title>\n";
  html += "<link rel=\"stylesheet\" href=\"" + std::string(kLeafletStyle) + "\">\n";
  html += "<script src=\"" + std::string(kLeafletScript) + "\"></script>\n";
  html += "<style>html,body{margin:0;height:100%}#map{height:100%}"
          "#listing{margin:1em;font-family:monospace}</style>\n";
  html += "</head>\n<body>\n<div id=\"map\"></div>\n";
  html += "<pre id=\"listing\">" + html_escape(listing) + "</pre>\n";
  html += "<script type=\"application/geo+json\" id=\"points\">" + script_safe(geojson) +
          "</script>\n";
  html += "<script>\n";
  html += "(function () {\n";
  html += "  if (typeof L === 'undefined') return;\n";
  html += "  document.getElementById('listing').style.display = 'none';\n";
  html += "  var center = [" + number(map.center.lat) + ", " + number(map.center.lon) + "];\n";
  html += "  var radiusKm = " + number(map.radius_km) + ";\n";
  html += "  var map = L.map('map').setView(center, 10);\n";
  html += "  L.tileLayer('https://{s}.tile.openstreetmap.org/{z}/{x}/{y}.png', {\n";
  html += "    attribution: '&copy; OpenStreetMap contributors'\n";
  html += "  }).addTo(map);\n";
  html += "  L.circle(center, {radius: radiusKm * 1000, fill: false, weight: 1}).addTo(map);\n";
  html += "  var data = JSON.parse(document.getElementById('points').textContent);\n";
  html += "  L.geoJSON(data, {\n";
  html += "    pointToLayer: function (feature, latlng) {\n";
  html += "      var n = feature.properties.mentions;\n";
  html += "      return L.circleMarker(latlng, {radius: 4 + 3 * Math.sqrt(n), color: '#c0392b'});\n";
  html += "    },\n";
  html += "    onEachFeature: function (feature, layer) {\n";
  html += "      layer.bindPopup(feature.properties.name + ': ' + feature.properties.mentions);\n";
  html += "    }\n";
  html += "  }).addTo(map);\n";
  html += "})();\n";
  html += "</script>\n</body>\n</html>\n";
  return html;
}

}  // namespace hijackmap::geo
