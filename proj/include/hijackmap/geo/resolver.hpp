#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "hijackmap/geo/gazetteer.hpp"

namespace hijackmap::geo {

/// Remote place-name lookup. Implementations report failures as nullopt.
class Geocoder {
 public:
  virtual ~Geocoder() = default;
  virtual std::optional<LatLon> lookup(const std::string& name) = 0;
};

struct HttpGeocoderOptions {
  std::chrono::milliseconds timeout{5000};
  std::chrono::milliseconds min_interval{1000};
};

/// GET <base_url>?q=<name>&format=json; the first element of the returned
/// array supplies decimal-string "lat" and "lon". Requests are serialized and
/// spaced at least min_interval apart. Any failure logs a warning to
/// std::clog and yields nullopt.
class HttpGeocoder : public Geocoder {
 public:
  explicit HttpGeocoder(std::string base_url, HttpGeocoderOptions options = {});

  std::optional<LatLon> lookup(const std::string& name) override;
  std::size_t request_count() const;

 private:
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  HttpGeocoderOptions options_;
  mutable std::mutex mutex_;
  std::size_t requests_ = 0;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
};

/// Parses a geocoder response body; nullopt unless it is a non-empty array
/// whose first object has numeric-string lat/lon within bounds.
std::optional<LatLon> parse_geocoder_response(const std::string& body);

std::string url_encode(const std::string& text);

/// Gazetteer first, then the remote geocoder (if any). Remote outcomes,
/// including misses, are cached for the resolver's lifetime.
class CoordinateResolver {
 public:
  explicit CoordinateResolver(const Gazetteer& gazetteer, Geocoder* remote = nullptr)
      : gazetteer_(gazetteer), remote_(remote) {}

  std::optional<LatLon> resolve(const std::string& name);

 private:
  const Gazetteer& gazetteer_;
  Geocoder* remote_;
  std::mutex mutex_;
  std::map<std::string, std::optional<LatLon>> cache_;
};

}  // namespace hijackmap::geo
