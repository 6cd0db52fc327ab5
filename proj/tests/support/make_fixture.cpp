// Generates the worked-example fixture: two users whose trajectories come
// out at exactly (d=6, s=6) and (d=22, s=20) after every floating-point
// rounding in the pipeline, so the quotient checks in the tests can demand
// bit-exact 36 and 440. Run manually; the outputs are committed.
//
//   riskvec_make_fixture <output-dir>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskvec/geo.hpp"
#include "riskvec/ingest.hpp"
#include "riskvec/meanvec.hpp"
#include "riskvec/risk.hpp"
#include "riskvec/rng.hpp"
#include "riskvec/timeutil.hpp"

using namespace riskvec;
using nlohmann::json;

namespace {

// Smallest-interval bisection on lon, then an ulp scan for an exact hit.
std::optional<double> solve_exact_lon(
    const std::function<double(double)>& f, double target, double lo,
    double hi) {
  if (f(lo) >= target || f(hi) <= target) return std::nullopt;
  while (true) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  double lon = lo;
  for (int i = 0; i < 256; ++i) {
    if (f(lon) == target) return lon;
    lon = std::nextafter(lon, 1e9);
  }
  return std::nullopt;
}

// Bisection only; returns the lower bound of the collapsed interval.
double solve_approx_lon(const std::function<double(double)>& f, double target,
                        double lo, double hi) {
  while (true) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return lo;
    if (f(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
}

json post(const std::string& id, const std::string& user, std::int64_t t,
          const geo::GeoPoint& p, const std::string& text) {
  json j;
  j["id"] = id;
  j["user"] = user;
  j["ts"] = timeutil::format_rfc3339(t);
  j["lat"] = p.lat;
  j["lon"] = p.lon;
  j["text"] = text;
  j["reply_to"] = nullptr;
  return j;
}

json zone_box(double lon0, double lat0, double lon1, double lat1, int level) {
  json ring = json::array();
  ring.push_back({lon0, lat0});
  ring.push_back({lon1, lat0});
  ring.push_back({lon1, lat1});
  ring.push_back({lon0, lat1});
  ring.push_back({lon0, lat0});
  json f;
  f["type"] = "Feature";
  f["properties"]["zone_level"] = level;
  f["geometry"]["type"] = "Polygon";
  f["geometry"]["coordinates"] = json::array({ring});
  return f;
}

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "make_fixture: " << msg << "\n";
  std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) die("usage: riskvec_make_fixture <output-dir>");
  std::filesystem::path outdir = argv[1];
  std::filesystem::create_directories(outdir);

  // --- user 1: one hop of exactly 6 miles in exactly one hour -----------
  geo::GeoPoint o1 = geo::make_point(40.72, -74.00);
  std::optional<geo::GeoPoint> dest1;
  for (int k = 0; k < 40000 && !dest1; ++k) {
    double lat = 40.72 + (k % 2 == 0 ? 1.0 : -1.0) * ((k + 1) / 2) * 1e-12;
    auto f = [&](double lon) {
      return geo::haversine_distance(o1, geo::GeoPoint{lat, lon});
    };
    auto lon = solve_exact_lon(f, 6.0, -73.95, -73.82);
    if (lon) dest1 = geo::GeoPoint{lat, *lon};
  }
  if (!dest1) die("no exact 6.0 mile destination found");

  // --- user 2: six hops, 22 miles total, duration dividing to 20 mph ----
  // Six positive second counts summing to 3960 whose hour conversions add
  // up, in order, to a double that divides 22.0 to exactly 20.0.
  std::vector<std::int64_t> durs;
  {
    Rng rng = Rng::derive(4242, "durations");
    for (int trial = 0; trial < 2000000 && durs.empty(); ++trial) {
      std::vector<std::int64_t> d(6);
      std::int64_t sum5 = 0;
      for (int i = 0; i < 5; ++i) {
        d[i] = 300 + static_cast<std::int64_t>(rng.index(381));
        sum5 += d[i];
      }
      d[5] = 3960 - sum5;
      if (d[5] < 300) continue;
      double acc = 0.0;
      for (int i = 0; i < 6; ++i)
        acc += static_cast<double>(d[i]) / 3600.0;
      if (22.0 / acc == 20.0 && 22.0 * (22.0 / acc) == 440.0) durs = d;
    }
  }
  if (durs.empty()) die("no duration composition found");

  geo::GeoPoint o2 = geo::make_point(40.60, -73.99);
  std::vector<geo::GeoPoint> path = {o2};
  const double targets[5] = {4.0, 4.0, 4.0, 4.0, 3.0};
  const double wiggles[5] = {5e-4, -4e-4, 3e-4, -6e-4, 2e-4};
  double acc_dist = 0.0;
  for (int i = 0; i < 5; ++i) {
    const geo::GeoPoint& prev = path.back();
    double lat = prev.lat + wiggles[i];
    auto f = [&](double lon) {
      return geo::haversine_distance(prev, geo::GeoPoint{lat, lon});
    };
    double lon = solve_approx_lon(f, targets[i], prev.lon + 0.002,
                                  prev.lon + 0.15);
    geo::GeoPoint next{lat, lon};
    acc_dist += geo::haversine_distance(prev, next);
    path.push_back(next);
  }

  std::optional<geo::GeoPoint> final2;
  {
    const geo::GeoPoint& p5 = path.back();
    double s5 = acc_dist;
    for (int k = 0; k < 40000 && !final2; ++k) {
      double lat = 40.60 + (k % 2 == 0 ? 1.0 : -1.0) * ((k + 1) / 2) * 1e-12;
      auto f = [&](double lon) {
        return s5 + geo::haversine_distance(p5, geo::GeoPoint{lat, lon});
      };
      auto lon = solve_exact_lon(f, 22.0, p5.lon + 0.002, p5.lon + 0.15);
      if (lon) final2 = geo::GeoPoint{lat, *lon};
    }
  }
  if (!final2) die("no exact 22.0 mile closing hop found");
  path.push_back(*final2);

  // --- assemble posts ----------------------------------------------------
  std::int64_t t1 = timeutil::parse_rfc3339("2012-10-29T12:00:00Z");
  std::int64_t t2 = timeutil::parse_rfc3339("2012-10-29T08:00:00Z");
  std::vector<json> posts;
  posts.push_back(post("w1", "user-1", t1, o1, "driving out to the bridge"));
  posts.push_back(
      post("w2", "user-1", t1 + 3600, *dest1, "parked by the bridge"));

  const char* texts2[7] = {
      "driving east ahead of the tide", "mile four and holding",
      "mile eight and holding",         "mile twelve and rolling",
      "mile sixteen and rolling",       "mile nineteen and rolling",
      "made the far side by noon"};
  std::int64_t clock = t2;
  for (int i = 0; i < 7; ++i) {
    posts.push_back(post("x" + std::to_string(i + 1), "user-2", clock,
                         path[static_cast<std::size_t>(i)], texts2[i]));
    if (i < 6) clock += durs[static_cast<std::size_t>(i)];
  }

  // --- verify through the library exactly as the pipeline will ----------
  auto mk_points = [&](const std::string& user) {
    std::vector<geo::TimedPoint> pts;
    for (const auto& p : posts)
      if (p["user"] == user)
        pts.push_back({timeutil::parse_rfc3339(p["ts"].get<std::string>()),
                       geo::make_point(p["lat"].get<double>(),
                                       p["lon"].get<double>())});
    return pts;
  };
  auto traj1 = geo::build_trajectory("user-1", mk_points("user-1"));
  auto traj2 = geo::build_trajectory("user-2", mk_points("user-2"));
  if (traj1.total_distance_mi != 6.0 || traj1.average_speed_mph != 6.0)
    die("user-1 trajectory not exact");
  if (traj2.total_distance_mi != 22.0 || traj2.average_speed_mph != 20.0)
    die("user-2 trajectory not exact");

  auto mv1 = vec::user_mean_vector(traj1);
  auto mv2 = vec::user_mean_vector(traj2);

  // --- risk surface: level 2 at each origin, level 1 at each endpoint ---
  json evac;
  evac["type"] = "FeatureCollection";
  evac["features"] = json::array();
  evac["features"].push_back(zone_box(-74.005, 40.715, -73.995, 40.725, 2));
  evac["features"].push_back(zone_box(mv1.endpoint.lon - 0.01,
                                      mv1.endpoint.lat - 0.005,
                                      mv1.endpoint.lon + 0.01,
                                      mv1.endpoint.lat + 0.005, 1));
  evac["features"].push_back(zone_box(-73.995, 40.595, -73.985, 40.605, 2));
  evac["features"].push_back(zone_box(mv2.endpoint.lon - 0.01,
                                      mv2.endpoint.lat - 0.005,
                                      mv2.endpoint.lon + 0.01,
                                      mv2.endpoint.lat + 0.005, 1));

  auto surface = risk::RiskSurface::from_geojson(
      evac.dump(), "", risk::RiskScheme::figure1_1_4);
  auto rec1 = risk::user_rbq(traj1, mv1, surface);
  auto rec2 = risk::user_rbq(traj2, mv2, surface);
  if (rec1.r_origin != 3 || rec1.r_dest != 2)
    die("user-1 risk levels wrong");
  if (rec2.r_origin != 3 || rec2.r_dest != 2)
    die("user-2 risk levels wrong");
  if (rec1.rbq != 36.0) die("user-1 rbq not exactly 36");
  if (rec2.rbq != 440.0) die("user-2 rbq not exactly 440");

  // --- write, then re-parse the written bytes and verify once more ------
  {
    std::ofstream out(outdir / "posts.jsonl");
    for (const auto& p : posts) out << p.dump() << "\n";
  }
  {
    std::ofstream out(outdir / "evac.geojson");
    out << evac.dump(2) << "\n";
  }
  {
    std::ofstream out(outdir / "pipeline.cfg");
    out << "# worked example: two users graded on the 1..4 surface\n"
        << "posts=posts.jsonl\n"
        << "evac=evac.geojson\n"
        << "risk_scheme=figure1-1-4\n"
        << "out_dir=out\n";
  }

  auto parsed = ingest::parse_posts_file(outdir / "posts.jsonl");
  if (!parsed.issues.empty()) die("written posts do not parse cleanly");
  std::vector<geo::TimedPoint> pts1, pts2;
  for (const auto& p : parsed.posts) {
    if (!p.location) die("location lost in round trip");
    if (p.user_id == "user-1") pts1.push_back({p.timestamp, *p.location});
    if (p.user_id == "user-2") pts2.push_back({p.timestamp, *p.location});
  }
  auto rt1 = geo::build_trajectory("user-1", pts1);
  auto rt2 = geo::build_trajectory("user-2", pts2);
  auto rr1 = risk::user_rbq(rt1, vec::user_mean_vector(rt1), surface);
  auto rr2 = risk::user_rbq(rt2, vec::user_mean_vector(rt2), surface);
  if (rr1.rbq != 36.0 || rr2.rbq != 440.0)
    die("round-tripped files lose exactness");

  std::cout << "user-1: d=" << rt1.total_distance_mi
            << " s=" << rt1.average_speed_mph << " rbq=" << rr1.rbq << "\n";
  std::cout << "user-2: d=" << rt2.total_distance_mi
            << " s=" << rt2.average_speed_mph << " rbq=" << rr2.rbq << "\n";
  std::cout << "fixture written to " << outdir.string() << "\n";
  return 0;
}
