#include "riskvec/geo.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "riskvec/errors.hpp"

namespace riskvec::geo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double deg2rad(double d) { return d * (kPi / 180.0); }
double rad2deg(double r) { return r * (180.0 / kPi); }

double normalize_deg(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  if (d >= 360.0) d = 0.0;
  return d;
}

std::int64_t round5(double deg) {
  return std::llround(deg * 1e5);
}

}  // namespace

GeoPoint make_point(double lat, double lon) {
  if (!(lat >= -90.0 && lat <= 90.0))
    throw validation_error("latitude out of range: " + std::to_string(lat));
  if (!std::isfinite(lon))
    throw validation_error("longitude not finite");
  double l = std::fmod(lon, 360.0);
  if (l > 180.0) l -= 360.0;
  if (l <= -180.0) l += 360.0;
  return GeoPoint{lat, l};
}

bool same_location(const GeoPoint& a, const GeoPoint& b) {
  return round5(a.lat) == round5(b.lat) && round5(a.lon) == round5(b.lon);
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) {
  double la1 = deg2rad(a.lat), la2 = deg2rad(b.lat);
  double dla = deg2rad(b.lat - a.lat), dlo = deg2rad(b.lon - a.lon);
  double s1 = std::sin(dla / 2.0), s2 = std::sin(dlo / 2.0);
  double h = s1 * s1 + std::cos(la1) * std::cos(la2) * s2 * s2;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

double initial_bearing(const GeoPoint& a, const GeoPoint& b) {
  if (a.lat == b.lat && a.lon == b.lon)
    throw validation_error("initial_bearing undefined for coincident points");
  double la1 = deg2rad(a.lat), la2 = deg2rad(b.lat);
  double dlo = deg2rad(b.lon - a.lon);
  double x = std::sin(dlo) * std::cos(la2);
  double y = std::cos(la1) * std::sin(la2) -
             std::sin(la1) * std::cos(la2) * std::cos(dlo);
  return normalize_deg(rad2deg(std::atan2(x, y)));
}

GeoPoint forward_point(const GeoPoint& origin, double azimuth_deg,
                       double distance_mi) {
  if (distance_mi < 0.0)
    throw validation_error("forward_point requires distance >= 0");
  if (distance_mi == 0.0) return origin;
  double delta = distance_mi / kEarthRadiusMiles;
  double theta = deg2rad(azimuth_deg);
  double la1 = deg2rad(origin.lat), lo1 = deg2rad(origin.lon);
  double sin_la2 = std::sin(la1) * std::cos(delta) +
                   std::cos(la1) * std::sin(delta) * std::cos(theta);
  sin_la2 = std::min(1.0, std::max(-1.0, sin_la2));
  double la2 = std::asin(sin_la2);
  double lo2 = lo1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(la1),
                                std::cos(delta) - std::sin(la1) * sin_la2);
  return make_point(rad2deg(la2), rad2deg(lo2));
}

Trajectory build_trajectory(const std::string& user_id,
                            std::vector<TimedPoint> points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const TimedPoint& a, const TimedPoint& b) {
                     return a.t < b.t;
                   });

  // Merge posts that share both timestamp and (rounded) location.
  std::vector<TimedPoint> cleaned;
  std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> seen;
  for (const auto& tp : points) {
    auto key = std::make_tuple(tp.t, round5(tp.p.lat), round5(tp.p.lon));
    if (seen.insert(key).second) cleaned.push_back(tp);
  }

  if (cleaned.size() < 2)
    throw validation_error("insufficient data: user " + user_id +
                           " has fewer than 2 usable locations");

  Trajectory traj;
  traj.user_id = user_id;
  traj.first_point = cleaned.front().p;

  GeoPoint anchor = cleaned.front().p;
  std::int64_t clock = cleaned.front().t;
  for (std::size_t i = 1; i < cleaned.size(); ++i) {
    double d = haversine_distance(anchor, cleaned[i].p);
    if (d < kJitterFloorMiles) continue;
    Segment seg;
    seg.origin = anchor;
    seg.destination = cleaned[i].p;
    seg.depart = clock;
    std::int64_t dur_s = cleaned[i].t - clock;
    if (dur_s < kMinSegmentSeconds) dur_s = kMinSegmentSeconds;
    seg.arrive = clock + dur_s;
    seg.distance_mi = d;
    seg.duration_h = static_cast<double>(dur_s) / 3600.0;
    seg.speed_mph = seg.distance_mi / seg.duration_h;
    seg.azimuth_deg = initial_bearing(anchor, cleaned[i].p);
    traj.segments.push_back(seg);
    anchor = cleaned[i].p;
    clock = seg.arrive;
  }

  if (traj.segments.empty())
    throw validation_error("insufficient data: user " + user_id +
                           " shows no movement above the jitter floor");

  for (const auto& s : traj.segments) {
    traj.total_distance_mi += s.distance_mi;
    traj.total_duration_h += s.duration_h;
  }
  traj.average_speed_mph = traj.total_duration_h > 0.0
                               ? traj.total_distance_mi / traj.total_duration_h
                               : 0.0;
  return traj;
}

}  // namespace riskvec::geo
