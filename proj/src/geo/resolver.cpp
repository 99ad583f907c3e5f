#include "hijackmap/geo/resolver.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "hijackmap/errors.hpp"

namespace hijackmap::geo {

namespace {

std::optional<double> decimal(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) return std::nullopt;
  const auto& s = v.get_ref<const std::string&>();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out)) {
    return std::nullopt;
  }
  return out;
}

void warn(const std::string& name, const std::string& why) {
  std::clog << "warning: geocoder lookup for \"" << name << "\" failed: " << why << '\n';
}

}  // namespace

std::string url_encode(const std::string& text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::optional<LatLon> parse_geocoder_response(const std::string& body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_array() || doc.empty() || !doc[0].is_object()) {
    return std::nullopt;
  }
  const auto& first = doc[0];
  if (!first.contains("lat") || !first.contains("lon")) return std::nullopt;
  const auto lat = decimal(first["lat"]);
  const auto lon = decimal(first["lon"]);
  if (!lat || !lon || !valid_coordinate(*lat, *lon)) return std::nullopt;
  return LatLon{*lat, *lon};
}

HttpGeocoder::HttpGeocoder(std::string base_url, HttpGeocoderOptions options)
    : options_(options) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw InputError("geocoder URL needs a scheme: " + base_url);
  }
  const auto scheme = base_url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw InputError("geocoder URL scheme must be http or https: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  origin_ = base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : base_url.substr(path_start);
}

std::size_t HttpGeocoder::request_count() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::optional<LatLon> HttpGeocoder::lookup(const std::string& name) {
  std::lock_guard lock(mutex_);
  if (last_request_) {
    const auto next = *last_request_ + options_.min_interval;
    std::this_thread::sleep_until(next);
  }
  last_request_ = std::chrono::steady_clock::now();
  ++requests_;

  httplib::Client client(origin_);
  const auto secs = options_.timeout.count() / 1000;
  const auto usecs = (options_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const auto target = path_ + (path_.find('?') == std::string::npos ? "?" : "&") +
                      "q=" + url_encode(name) + "&format=json";
  const auto res = client.Get(target);
  if (!res) {
    warn(name, httplib::to_string(res.error()));
    return std::nullopt;
  }
  if (res->status < 200 || res->status >= 300) {
    warn(name, "HTTP status " + std::to_string(res->status));
    return std::nullopt;
  }
  auto point = parse_geocoder_response(res->body);
  if (!point) warn(name, "no usable result in response");
  return point;
}

std::optional<LatLon> CoordinateResolver::resolve(const std::string& name) {
  if (auto hit = gazetteer_.find(name)) return hit;
  if (!remote_) return std::nullopt;
  std::lock_guard lock(mutex_);
  if (const auto it = cache_.find(name); it != cache_.end()) return it->second;
  auto result = remote_->lookup(name);
  cache_.emplace(name, result);
  return result;
}

}  // namespace hijackmap::geo
