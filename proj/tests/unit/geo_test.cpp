#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "hijackmap/errors.hpp"
#include "hijackmap/geo/gazetteer.hpp"
#include "hijackmap/geo/map.hpp"
#include "hijackmap/geo/resolver.hpp"
#include "hijackmap/random.hpp"

using namespace hijackmap;
using namespace hijackmap::geo;
using corpus::TweetRecord;

namespace {

Gazetteer gaz(const std::string& csv) {
  std::istringstream in(csv);
  return load_gazetteer(in);
}

TweetRecord tweet(const std::string& id, const std::string& text) {
  return {id, text, "2020-01-01T00:00:00Z", 1};
}

// Independent great-circle distance via the spherical law of cosines.
double cosine_law_km(LatLon a, LatLon b) {
  const double r = std::numbers::pi / 180.0;
  const double c = std::sin(a.lat * r) * std::sin(b.lat * r) +
                   std::cos(a.lat * r) * std::cos(b.lat * r) * std::cos((b.lon - a.lon) * r);
  return 6371.0 * std::acos(std::clamp(c, -1.0, 1.0));
}

/// Serves GET /search from a background thread on an ephemeral port.
class FakeGeocoder {
 public:
  explicit FakeGeocoder(httplib::Server::Handler handler) {
    server_.Get("/search", [this, handler](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      last_query = req.get_param_value("q");
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeGeocoder() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/search"; }

  std::atomic<int> hits{0};
  std::string last_query;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

HttpGeocoderOptions fast() {
  HttpGeocoderOptions o;
  o.min_interval = std::chrono::milliseconds(0);
  o.timeout = std::chrono::milliseconds(2000);
  return o;
}

}  // namespace

TEST_SUITE("geo") {

TEST_CASE("gazetteer loading") {
  const auto one = gaz("Claremont , -33.98,18.46\n");
  REQUIRE(one.size() == 1);
  CHECK(one.entries()[0].name == "claremont");
  CHECK(one.find("claremont") == LatLon{-33.98, 18.46});
  CHECK(one.find("CLAREMONT") == LatLon{-33.98, 18.46});
  CHECK_FALSE(one.find("khayelitsha").has_value());

  CHECK(gaz("").empty());
  CHECK(gaz("\n\n").empty());
  CHECK(gaz("cape town, central,-33.92,18.42\n").find("cape town, central").has_value());

  CHECK_THROWS_WITH_AS(gaz("x,95,0\n"), doctest::Contains("row 1"), InputError);
  CHECK_THROWS_AS(gaz("x,0,181\n"), InputError);
  CHECK_THROWS_WITH_AS(gaz("a,1,1\nb,oops,1\n"), doctest::Contains("row 2"), InputError);
  CHECK_THROWS_AS(gaz("a,1\n"), InputError);
  CHECK_THROWS_AS(gaz("a,1,1\nA,2,2\n"), InputError);
  CHECK_THROWS_AS(load_gazetteer_file("/nonexistent/g.csv"), InputError);

  const auto many = gaz("claremont,-33.98,18.46\nkhayelitsha,-34.04,18.68\n");
  CHECK(write_gazetteer(gaz(write_gazetteer(many))) == write_gazetteer(many));
  CHECK(gaz(write_gazetteer(many)).find("khayelitsha") == LatLon{-34.04, 18.68});
}

TEST_CASE("place extraction") {
  const auto g = gaz("claremont,-33.98,18.46\nkhayelitsha,-34.04,18.68\n");
  CHECK(extract_locations("Attempted hijacking in Claremont this morning", g) ==
        std::vector<std::string>{"claremont"});
  CHECK(extract_locations("nothing to see", g).empty());
  CHECK(extract_locations("claremonts are not claremont-ish", g) ==
        std::vector<std::string>{"claremont"});
  CHECK(extract_locations("khayelitsha then claremont then khayelitsha", g) ==
        std::vector<std::string>{"khayelitsha", "claremont"});

  const auto nested = gaz("cape,-34.0,18.5\ncape town,-33.92,18.42\n");
  CHECK(extract_locations("a hijacking in cape town today", nested) ==
        std::vector<std::string>{"cape town"});
  CHECK(extract_locations("cape point and cape town", nested) ==
        std::vector<std::string>{"cape", "cape town"});
}

TEST_CASE("haversine") {
  CHECK(haversine_km({1, 2}, {1, 2}) == 0.0);
  CHECK(std::abs(haversine_km({0, 0}, {0, 1}) - std::numbers::pi / 180.0 * 6371.0) < 1e-9);
  CHECK(std::abs(haversine_km({0, 0}, {0, 1}) - 111.195) <= 0.001);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const LatLon a{rng.uniform(-80, 80), rng.uniform(-179, 179)};
    const LatLon b{rng.uniform(-80, 80), rng.uniform(-179, 179)};
    CHECK(haversine_km(a, b) == doctest::Approx(haversine_km(b, a)).epsilon(1e-12));
    CHECK(haversine_km(a, b) == doctest::Approx(cosine_law_km(a, b)).epsilon(1e-6));
  }
}

TEST_CASE("resolution from the gazetteer") {
  const auto g = gaz("claremont,-33.98,18.46\n");
  CoordinateResolver r(g);
  CHECK(r.resolve("claremont") == LatLon{-33.98, 18.46});
  CHECK_FALSE(r.resolve("atlantis").has_value());
}

TEST_CASE("build_map aggregation and radius") {
  const auto g = gaz("claremont,-33.98,18.46\nfar north,-33.4249,18.4241\natlantis,10,10\n");
  const std::vector<TweetRecord> three = {tweet("1", "hijacking in Claremont"),
                                          tweet("2", "claremont again"),
                                          tweet("3", "CLAREMONT, third time")};
  const auto m = build_map(three, g);
  REQUIRE(m.map.points.size() == 1);
  CHECK(m.map.points[0] == GeoPoint{"claremont", -33.98, 18.46, 3});
  CHECK(m.summary.mentions == 3);
  CHECK(m.summary.plotted == 3);

  // 0.5 degrees due north is about 55.6 km, outside the 50 km default.
  const std::vector<TweetRecord> north = {tweet("4", "hijacking at far north")};
  const auto n = build_map(north, g);
  CHECK(n.map.points.empty());
  CHECK(n.summary.outside_radius == 1);
  CHECK(build_map(north, g, kDefaultCenter, 60.0).map.points.size() == 1);

  const std::vector<TweetRecord> none = {tweet("5", "no places here")};
  const auto e = build_map(none, g);
  CHECK(e.map.points.empty());
  CHECK(e.summary.tweets_with_place == 0);
  CHECK(e.map.center == kDefaultCenter);
  CHECK(e.map.radius_km == kDefaultRadiusKm);

  CHECK_THROWS_AS(build_map(none, g, kDefaultCenter, 0.0), InputError);
}

TEST_CASE("property: 1000 random maps stay inside the radius") {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const LatLon center{rng.uniform(-60, 60), rng.uniform(-170, 170)};
    const double radius = rng.uniform(1.0, 300.0);
    std::vector<GazetteerEntry> entries;
    const std::size_t n = rng.below(8) + 1;
    for (std::size_t i = 0; i < n; ++i) {
      entries.push_back({"p" + std::to_string(i), center.lat + rng.uniform(-4, 4),
                         center.lon + rng.uniform(-4, 4)});
    }
    const Gazetteer g(entries);
    std::vector<TweetRecord> tweets;
    const std::size_t t = rng.below(10);
    std::size_t named = 0;
    for (std::size_t i = 0; i < t; ++i) {
      const std::size_t k = rng.below(n + 2);
      const std::string place = k < n ? entries[k].name : "nowhere";
      named += k < n ? 1 : 0;
      tweets.push_back(tweet(std::to_string(i), "hijacking at " + place));
    }
    const auto m = build_map(tweets, g, center, radius);
    std::size_t total = 0;
    for (const auto& p : m.map.points) {
      CHECK(haversine_km(center, {p.lat, p.lon}) <= radius);
      CHECK(p.mentions >= 1);
      total += p.mentions;
    }
    CHECK(total == m.summary.plotted);
    CHECK(m.summary.plotted + m.summary.outside_radius == named);
    CHECK(std::is_sorted(m.map.points.begin(), m.map.points.end(),
                         [](const GeoPoint& a, const GeoPoint& b) { return a.name < b.name; }));
  }
}

TEST_CASE("geojson") {
  MapDocument empty{kDefaultCenter, kDefaultRadiusKm, {}};
  CHECK(emit_geojson(empty) == R"({"type":"FeatureCollection","features":[]})");
  CHECK(parse_geojson(emit_geojson(empty)) == empty);

  MapDocument one{kDefaultCenter, kDefaultRadiusKm, {{"claremont", -33.98, 18.46, 2}}};
  const auto text = emit_geojson(one);
  const auto j = nlohmann::json::parse(text);
  REQUIRE(j["features"].size() == 1);
  CHECK(j["features"][0]["geometry"]["type"] == "Point");
  CHECK(j["features"][0]["geometry"]["coordinates"][0] == 18.46);
  CHECK(j["features"][0]["geometry"]["coordinates"][1] == -33.98);
  CHECK(j["features"][0]["properties"]["name"] == "claremont");
  CHECK(j["features"][0]["properties"]["mentions"] == 2);
  CHECK(parse_geojson(text) == one);
  CHECK(emit_geojson(parse_geojson(text)) == text);

  CHECK_THROWS_AS(parse_geojson("{"), InputError);
  CHECK_THROWS_AS(parse_geojson(R"({"type":"Feature"})"), InputError);
}

TEST_CASE("html map") {
  MapDocument empty{kDefaultCenter, kDefaultRadiusKm, {}};
  const auto e = emit_html_map(empty);
  CHECK(e.rfind("<!DOCTYPE html>", 0) == 0);
  CHECK(e.find("</html>") != std::string::npos);
  CHECK(e.find(emit_geojson(empty)) != std::string::npos);

  MapDocument one{kDefaultCenter, kDefaultRadiusKm, {{"claremont", -33.98, 18.46, 2}}};
  const auto h = emit_html_map(one);
  CHECK(h.find("claremont") != std::string::npos);
  CHECK(h.find("-33.98") != std::string::npos);
  CHECK(h.find("18.46") != std::string::npos);
  CHECK(h.find(emit_geojson(one)) != std::string::npos);
  CHECK(h.find(kLeafletScript) != std::string::npos);

  MapDocument nasty{kDefaultCenter, kDefaultRadiusKm, {{"</script><b>", -33.98, 18.46, 1}}};
  const auto n = emit_html_map(nasty);
  CHECK(n.find("</script><b>") == std::string::npos);
}

TEST_CASE("geocoder response parsing and url encoding") {
  CHECK(parse_geocoder_response(R"([{"lat":"-33.98","lon":"18.46"}])") == LatLon{-33.98, 18.46});
  CHECK(parse_geocoder_response(R"([{"lat":-33.5,"lon":18.5},{"lat":"0","lon":"0"}])") ==
        LatLon{-33.5, 18.5});
  CHECK_FALSE(parse_geocoder_response("[]").has_value());
  CHECK_FALSE(parse_geocoder_response("not json").has_value());
  CHECK_FALSE(parse_geocoder_response(R"([{"lat":"x","lon":"1"}])").has_value());
  CHECK_FALSE(parse_geocoder_response(R"([{"lat":"91","lon":"1"}])").has_value());
  CHECK(url_encode("cape town") == "cape%20town");
  CHECK(url_encode("a-b_c.d~") == "a-b_c.d~");
  CHECK(url_encode("é&=") == "%C3%A9%26%3D");
  CHECK_THROWS_AS(HttpGeocoder("ftp://example.org"), InputError);
}

TEST_CASE("remote geocoder with cache") {
  FakeGeocoder server([](const httplib::Request& req, httplib::Response& res) {
    if (req.get_param_value("q") == "bellville") {
      res.set_content(R"([{"lat":"-33.90","lon":"18.63"}])", "application/json");
    } else {
      res.set_content("[]", "application/json");
    }
  });
  HttpGeocoder remote(server.url(), fast());
  const auto g = gaz("claremont,-33.98,18.46\n");
  CoordinateResolver r(g, &remote);

  CHECK(r.resolve("claremont") == LatLon{-33.98, 18.46});
  CHECK(server.hits == 0);
  CHECK(r.resolve("bellville") == LatLon{-33.90, 18.63});
  CHECK(server.hits == 1);
  CHECK(server.last_query == "bellville");
  CHECK(r.resolve("bellville") == LatLon{-33.90, 18.63});
  CHECK(server.hits == 1);
  CHECK(remote.request_count() == 1);

  CHECK_FALSE(r.resolve("atlantis").has_value());
  CHECK_FALSE(r.resolve("atlantis").has_value());
  CHECK(server.hits == 2);
}

TEST_CASE("remote failures degrade to unresolved") {
  FakeGeocoder server([](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
    res.set_content(R"([{"lat":"1","lon":"1"}])", "application/json");
  });
  HttpGeocoder remote(server.url(), fast());
  CHECK_FALSE(remote.lookup("bellville").has_value());
  CHECK(server.hits == 1);

  // Nothing listens on port 9 of the loopback interface.
  HttpGeocoderOptions quick = fast();
  quick.timeout = std::chrono::milliseconds(300);
  HttpGeocoder dead("http://127.0.0.1:9/search", quick);
  CHECK_FALSE(dead.lookup("bellville").has_value());
}

}  // TEST_SUITE
