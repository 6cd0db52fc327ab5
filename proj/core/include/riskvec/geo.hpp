#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace riskvec::geo {

// Spherical earth. City-scale analysis works at evacuation-zone
// granularity, where sphere-vs-ellipsoid error (<0.5%) is irrelevant.
inline constexpr double kEarthRadiusMiles = 3958.761;

// Segments shorter than this are GPS jitter, not movement; they would
// otherwise pollute the heading average with noise vectors.
inline constexpr double kJitterFloorMiles = 0.01;

// Posts sharing a timestamp but not a location get this floor so speed
// stays finite while the observed move is preserved.
inline constexpr std::int64_t kMinSegmentSeconds = 1;

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, (-180, 180]
};

// Validates latitude, normalizes longitude into (-180, 180].
GeoPoint make_point(double lat, double lon);

// Two points are "the same place" when they agree to 5 decimals (~1 m);
// finer differences are GPS jitter.
bool same_location(const GeoPoint& a, const GeoPoint& b);

// Great-circle distance in miles (haversine).
double haversine_distance(const GeoPoint& a, const GeoPoint& b);

// Forward azimuth at `a` of the great circle toward `b`, degrees
// clockwise from true north in [0, 360). Throws for coincident points.
double initial_bearing(const GeoPoint& a, const GeoPoint& b);

// Spherical forward solution: the point `distance_mi` along the great
// circle leaving `origin` with the given azimuth.
GeoPoint forward_point(const GeoPoint& origin, double azimuth_deg,
                       double distance_mi);

struct Segment {
  GeoPoint origin;
  GeoPoint destination;
  std::int64_t depart = 0;  // epoch seconds
  std::int64_t arrive = 0;
  double distance_mi = 0.0;
  double duration_h = 0.0;
  double speed_mph = 0.0;   // distance / duration by construction
  double azimuth_deg = 0.0; // clockwise from true north
};

struct Trajectory {
  std::string user_id;
  std::vector<Segment> segments;
  GeoPoint first_point;
  double total_distance_mi = 0.0;
  double total_duration_h = 0.0;
  double average_speed_mph = 0.0;
};

struct TimedPoint {
  std::int64_t t = 0;  // epoch seconds
  GeoPoint p;
};

// Builds the movement chain from one user's geocoded posts. Points are
// stably sorted by time (caller order breaks ties), exact duplicates of
// (timestamp, location) are merged, and hops under the jitter floor are
// skipped. Throws a validation Error when fewer than two usable
// locations remain, since the user has no observable movement.
Trajectory build_trajectory(const std::string& user_id,
                            std::vector<TimedPoint> points);

}  // namespace riskvec::geo
