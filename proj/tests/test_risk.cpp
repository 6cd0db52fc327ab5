#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "riskvec/errors.hpp"
#include "riskvec/geo.hpp"
#include "riskvec/meanvec.hpp"
#include "riskvec/risk.hpp"
#include "riskvec/rng.hpp"

using namespace riskvec;

namespace {

std::string feature(const std::string& geometry, const std::string& props) {
  return "{\"type\":\"Feature\",\"properties\":" + props +
         ",\"geometry\":" + geometry + "}";
}

std::string collection(const std::vector<std::string>& features) {
  std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i) out += ",";
    out += features[i];
  }
  return out + "]}";
}

std::string box(double lon0, double lat0, double lon1, double lat1) {
  auto p = [](double lon, double lat) {
    return "[" + std::to_string(lon) + "," + std::to_string(lat) + "]";
  };
  return "{\"type\":\"Polygon\",\"coordinates\":[[" + p(lon0, lat0) + "," +
         p(lon1, lat0) + "," + p(lon1, lat1) + "," + p(lon0, lat1) + "," +
         p(lon0, lat0) + "]]}";
}

// Level 1 square with a level 3 square overlapping its west half; two
// overlapping flood bands along the west edge reaching south of the zone.
risk::RiskSurface demo_surface(risk::RiskScheme scheme) {
  std::string evac = collection({
      feature(box(-74.00, 40.60, -73.90, 40.70), "{\"zone_level\":1}"),
      feature(box(-73.96, 40.62, -73.92, 40.66), "{\"zone_level\":3}"),
  });
  std::string flood = collection({
      feature(box(-74.00, 40.55, -73.94, 40.70), "{}"),
      feature(box(-74.00, 40.60, -73.95, 40.70), "{}"),
  });
  return risk::RiskSurface::from_geojson(evac, flood, scheme);
}

}  // namespace

TEST_CASE("rbq formula gives the worked values exactly") {
  CHECK(risk::rbq(3, 2, 6.0, 6.0) == 36.0);
  CHECK(risk::rbq(3, 2, 22.0, 20.0) == 440.0);
  CHECK(risk::rbq(0, 0, 5.0, 5.0) == 0.0);
  CHECK(risk::rbq(4, 0, 2.0, 3.0) == -24.0);
}

TEST_CASE("rbq sign follows 2*r_dest - r_origin") {
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    int ro = static_cast<int>(rng.index(5));
    int rd = static_cast<int>(rng.index(5));
    double d = rng.uniform(0.001, 50.0);
    double s = rng.uniform(0.001, 30.0);
    double v = risk::rbq(ro, rd, d, s);
    int lever = 2 * rd - ro;
    if (lever > 0) CHECK(v > 0.0);
    if (lever < 0) CHECK(v < 0.0);
    if (lever == 0) CHECK(v == 0.0);
  }
}

TEST_CASE("rbq rejects out-of-range inputs") {
  CHECK_THROWS_AS(risk::rbq(-1, 0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(risk::rbq(0, 5, 1.0, 1.0), Error);
  CHECK_THROWS_AS(risk::rbq(0, 0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(risk::rbq(0, 0, 1.0, -1.0), Error);
  CHECK_NOTHROW(risk::rbq(0, 4, 0.0, 0.0));
}

TEST_CASE("scheme tokens round-trip and reject unknowns") {
  CHECK(risk::parse_scheme("pilot-0-4") == risk::RiskScheme::pilot_0_4);
  CHECK(risk::parse_scheme("figure1-1-4") == risk::RiskScheme::figure1_1_4);
  CHECK(risk::scheme_token(risk::RiskScheme::pilot_0_4) == "pilot-0-4");
  CHECK(risk::scheme_token(risk::RiskScheme::figure1_1_4) == "figure1-1-4");
  CHECK_THROWS_AS(risk::parse_scheme("pilot"), Error);
}

TEST_CASE("grading takes the max zone and applies flood once") {
  auto surface = demo_surface(risk::RiskScheme::pilot_0_4);
  CHECK(surface.zone_count() == 2);
  CHECK(surface.flood_count() == 2);

  // Zone 1 only, dry.
  CHECK(risk_at(surface, geo::make_point(40.69, -73.91)) == 1);
  // Overlap of levels 1 and 3, dry: max wins.
  CHECK(risk_at(surface, geo::make_point(40.64, -73.93)) == 3);
  // Zone 1 under both flood bands: +1 applied once.
  CHECK(risk_at(surface, geo::make_point(40.68, -73.97)) == 2);
  // Flood outside any zone.
  CHECK(risk_at(surface, geo::make_point(40.57, -73.97)) == 1);
  // Open water.
  CHECK(risk_at(surface, geo::make_point(40.50, -73.50)) == 0);
}

TEST_CASE("alternative grading shifts base by one and ignores flood") {
  auto surface = demo_surface(risk::RiskScheme::figure1_1_4);
  CHECK(risk_at(surface, geo::make_point(40.69, -73.91)) == 2);
  CHECK(risk_at(surface, geo::make_point(40.64, -73.93)) == 4);
  CHECK(risk_at(surface, geo::make_point(40.68, -73.97)) == 2);  // flooded, ignored
  CHECK(risk_at(surface, geo::make_point(40.57, -73.97)) == 1);  // flood only
  CHECK(risk_at(surface, geo::make_point(40.50, -73.50)) == 1);
}

TEST_CASE("risk is constant across a zone interior") {
  auto surface = demo_surface(risk::RiskScheme::pilot_0_4);
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    // Inside zone 1, east of the overlap and flood bands.
    double lat = rng.uniform(40.67, 40.69);
    double lon = rng.uniform(-73.915, -73.905);
    CHECK(risk_at(surface, geo::make_point(lat, lon)) == 1);
  }
}

TEST_CASE("multipolygon zones grade in every part") {
  std::string evac = collection({feature(
      "{\"type\":\"MultiPolygon\",\"coordinates\":["
      "[[[-74.0,40.6],[-73.95,40.6],[-73.95,40.65],[-74.0,40.65],[-74.0,40.6]]],"
      "[[[-73.8,40.6],[-73.75,40.6],[-73.75,40.65],[-73.8,40.65],[-73.8,40.6]]]"
      "]}",
      "{\"zone_level\":2}")});
  auto surface =
      risk::RiskSurface::from_geojson(evac, "", risk::RiskScheme::pilot_0_4);
  CHECK(surface.zone_count() == 2);
  CHECK(risk_at(surface, geo::make_point(40.62, -73.97)) == 2);
  CHECK(risk_at(surface, geo::make_point(40.62, -73.77)) == 2);
  CHECK(risk_at(surface, geo::make_point(40.62, -73.87)) == 0);
}

TEST_CASE("surface loading rejects bad zone metadata and bad rings") {
  auto evac_with = [&](const std::string& props) {
    return collection({feature(box(-74.0, 40.6, -73.9, 40.7), props)});
  };
  auto load = [&](const std::string& evac) {
    return risk::RiskSurface::from_geojson(evac, "",
                                           risk::RiskScheme::pilot_0_4);
  };
  CHECK_THROWS_WITH_AS(load(evac_with("{}")),
                       doctest::Contains("zone_level"), Error);
  CHECK_THROWS_AS(load(evac_with("{\"zone_level\":0}")), Error);
  CHECK_THROWS_AS(load(evac_with("{\"zone_level\":4}")), Error);
  CHECK_THROWS_AS(load(evac_with("{\"zone_level\":2.5}")), Error);

  std::string unclosed = collection({feature(
      "{\"type\":\"Polygon\",\"coordinates\":[[[-74.0,40.6],[-73.9,40.6],"
      "[-73.9,40.7],[-74.0,40.7]]]}",
      "{\"zone_level\":1}")});
  CHECK_THROWS_WITH_AS(load(unclosed), doctest::Contains("unclosed"), Error);

  std::string not_polygon = collection({feature(
      "{\"type\":\"Point\",\"coordinates\":[-74.0,40.6]}",
      "{\"zone_level\":1}")});
  CHECK_THROWS_AS(load(not_polygon), Error);
}

TEST_CASE("user grading evaluates the mean-vector endpoint, not the last fix") {
  // East 4 mi in 1 h, then north 0.2 mi in 2 h. The directional average
  // weighs both legs equally, so the resultant endpoint overshoots the
  // final fix to the east by about 2 mi.
  auto start = geo::make_point(40.70, -74.00);
  auto second = geo::forward_point(start, 90.0, 4.0);
  auto last = geo::forward_point(second, 0.0, 0.2);
  auto traj = geo::build_trajectory(
      "u1", {{0, start}, {3600, second}, {3600 * 3, last}});
  auto mv = vec::user_mean_vector(traj);

  // Tight level 3 box around the last fix, level 2 box around the endpoint.
  std::string evac = collection({
      feature(box(last.lon - 0.01, last.lat - 0.01, last.lon + 0.01,
                  last.lat + 0.01),
              "{\"zone_level\":3}"),
      feature(box(mv.endpoint.lon - 0.01, mv.endpoint.lat - 0.01,
                  mv.endpoint.lon + 0.01, mv.endpoint.lat + 0.01),
              "{\"zone_level\":2}"),
  });
  auto surface =
      risk::RiskSurface::from_geojson(evac, "", risk::RiskScheme::pilot_0_4);
  REQUIRE(risk_at(surface, last) == 3);
  REQUIRE(risk_at(surface, mv.endpoint) == 2);

  auto rec = risk::user_rbq(traj, mv, surface);
  CHECK(rec.user_id == "u1");
  CHECK(rec.r_origin == risk_at(surface, mv.origin));
  CHECK(rec.r_origin == 0);
  CHECK(rec.r_dest == 2);
  CHECK(rec.distance_mi == traj.total_distance_mi);
  CHECK(rec.speed_mph == traj.average_speed_mph);
  CHECK(rec.rbq ==
        risk::rbq(rec.r_origin, rec.r_dest, rec.distance_mi, rec.speed_mph));
  CHECK(rec.rbq > 0.0);
}

TEST_CASE("summary reports order statistics") {
  auto rec = [](double v) {
    risk::RbqRecord r;
    r.rbq = v;
    return r;
  };
  auto s4 = risk::rbq_summary({rec(5), rec(-3), rec(10), rec(2)});
  CHECK(s4.n == 4);
  CHECK(s4.min == -3.0);
  CHECK(s4.max == 10.0);
  CHECK(s4.mean == 3.5);
  CHECK(s4.median == 3.5);

  auto s3 = risk::rbq_summary({rec(5), rec(-3), rec(10)});
  CHECK(s3.median == 5.0);
  CHECK(s3.mean == 4.0);

  CHECK_THROWS_AS(risk::rbq_summary({}), Error);

  auto j = risk::summary_json(s4);
  CHECK(j.find("\"median\"") != std::string::npos);
  CHECK(j.find("3.5") != std::string::npos);
}

TEST_CASE("rbq csv round-trips awkward doubles bit for bit") {
  std::vector<risk::RbqRecord> records;
  Rng rng(93);
  for (int i = 0; i < 50; ++i) {
    risk::RbqRecord r;
    r.user_id = "user_" + std::to_string(i);
    r.r_origin = static_cast<int>(rng.index(5));
    r.r_dest = static_cast<int>(rng.index(5));
    r.distance_mi = rng.uniform(0.0, 40.0) / 3.0;
    r.speed_mph = rng.uniform(0.0, 20.0) / 7.0;
    r.rbq = risk::rbq(r.r_origin, r.r_dest, r.distance_mi, r.speed_mph);
    records.push_back(r);
  }
  auto text = risk::rbq_csv(records);
  auto back = risk::rbq_from_csv(text);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].user_id == records[i].user_id);
    CHECK(back[i].r_origin == records[i].r_origin);
    CHECK(back[i].r_dest == records[i].r_dest);
    CHECK(back[i].distance_mi == records[i].distance_mi);
    CHECK(back[i].speed_mph == records[i].speed_mph);
    CHECK(back[i].rbq == records[i].rbq);
  }

  CHECK_THROWS_AS(risk::rbq_from_csv("wrong,header\n"), Error);
  CHECK_THROWS_AS(
      risk::rbq_from_csv("user_id,r_origin,r_dest,distance_mi,speed_mph,rbq\n"
                         "u,1,2\n"),
      Error);
}
