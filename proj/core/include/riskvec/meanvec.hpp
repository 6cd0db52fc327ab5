#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "riskvec/geo.hpp"

namespace riskvec::vec {

// Magnitude threshold below which the resultant azimuth is undefined.
constexpr double kZeroMagnitude = 1e-9;

struct PolarVector {
  double azimuth_deg = 0.0;
  double speed_mph = 0.0;
};

struct ResultantVector {
  double magnitude = 0.0;  // U_RV, mph
  double azimuth_deg = 0.0;
  bool azimuth_defined = false;
};

// Wind-averaging resultant of heading/speed vectors:
//   V_e = -(1/N) sum u_i sin(theta_i)
//   V_n = -(1/N) sum u_i cos(theta_i)
//   U_RV = sqrt(V_e^2 + V_n^2)
//   theta_RV = atan2-degrees(V_e, V_n) + 180, normalized to [0, 360)
// The +180 flip realizes the flow correction; azimuth is undefined when
// the components cancel (U_RV < kZeroMagnitude).
ResultantVector mean_vector(const std::vector<PolarVector>& segments);

struct MeanVector {
  std::string user_id;
  double magnitude = 0.0;  // mph
  double azimuth_deg = 0.0;
  bool azimuth_defined = false;
  std::size_t n = 0;  // contributing segments
  geo::GeoPoint origin{};
  geo::GeoPoint endpoint{};
  double displacement_mi = 0.0;
  // Trajectory duration; carried so the group reduction can scale its own
  // endpoint by the mean member duration.
  double duration_h = 0.0;
};

MeanVector user_mean_vector(const geo::Trajectory& traj);

struct GroupVector {
  geo::GeoPoint origin{};
  geo::GeoPoint endpoint{};
  double magnitude = 0.0;
  double azimuth_deg = 0.0;
  bool azimuth_defined = false;
  double displacement_mi = 0.0;
  std::size_t n = 0;  // contributing users
};

// Mean of member origins, wind-average of member (azimuth, magnitude)
// pairs, endpoint scaled by the mean member duration.
GroupVector group_mean_vector(const std::vector<MeanVector>& vectors);

// GeoJSON FeatureCollection with one LineString (origin -> endpoint) per
// user, properties {user, magnitude_mph, azimuth_deg, displacement_mi}.
std::string vectors_to_geojson(const std::vector<MeanVector>& vectors);

std::string group_to_geojson(const GroupVector& group);

}  // namespace riskvec::vec
