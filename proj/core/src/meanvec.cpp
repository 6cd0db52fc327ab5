#include "riskvec/meanvec.hpp"

#include <cmath>

#include <json.hpp>

#include "riskvec/errors.hpp"

namespace riskvec::vec {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using nlohmann::json;

json point_coords(const geo::GeoPoint& p) {
  return json::array({p.lon, p.lat});
}

json line_feature(const geo::GeoPoint& a, const geo::GeoPoint& b,
                  json properties) {
  json feature;
  feature["type"] = "Feature";
  feature["geometry"]["type"] = "LineString";
  feature["geometry"]["coordinates"] = json::array({point_coords(a),
                                                    point_coords(b)});
  feature["properties"] = std::move(properties);
  return feature;
}

}  // namespace

ResultantVector mean_vector(const std::vector<PolarVector>& segments) {
  if (segments.empty())
    throw validation_error("mean_vector requires at least one segment");
  double ve = 0.0, vn = 0.0;
  for (const auto& s : segments) {
    if (s.speed_mph < 0.0)
      throw validation_error("mean_vector requires non-negative speeds");
    double theta = s.azimuth_deg * (kPi / 180.0);
    ve -= s.speed_mph * std::sin(theta);
    vn -= s.speed_mph * std::cos(theta);
  }
  double n = static_cast<double>(segments.size());
  ve /= n;
  vn /= n;

  ResultantVector r;
  r.magnitude = std::sqrt(ve * ve + vn * vn);
  if (r.magnitude >= kZeroMagnitude) {
    double deg = std::atan2(ve, vn) * (180.0 / kPi) + 180.0;
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg = 0.0;
    r.azimuth_deg = deg;
    r.azimuth_defined = true;
  }
  return r;
}

MeanVector user_mean_vector(const geo::Trajectory& traj) {
  if (traj.segments.empty())
    throw validation_error("trajectory for user " + traj.user_id +
                           " has no segments");
  std::vector<PolarVector> polar;
  polar.reserve(traj.segments.size());
  for (const auto& s : traj.segments)
    polar.push_back({s.azimuth_deg, s.speed_mph});
  ResultantVector r = mean_vector(polar);

  MeanVector mv;
  mv.user_id = traj.user_id;
  mv.magnitude = r.magnitude;
  mv.azimuth_deg = r.azimuth_deg;
  mv.azimuth_defined = r.azimuth_defined;
  mv.n = traj.segments.size();
  mv.origin = traj.first_point;
  mv.duration_h = traj.total_duration_h;
  if (r.azimuth_defined) {
    mv.displacement_mi = r.magnitude * traj.total_duration_h;
    mv.endpoint = geo::forward_point(mv.origin, r.azimuth_deg,
                                     mv.displacement_mi);
  } else {
    mv.displacement_mi = 0.0;
    mv.endpoint = mv.origin;
  }
  return mv;
}

GroupVector group_mean_vector(const std::vector<MeanVector>& vectors) {
  if (vectors.empty())
    throw validation_error("group_mean_vector requires at least one vector");

  double lat = 0.0, lon = 0.0, duration = 0.0;
  std::vector<PolarVector> polar;
  polar.reserve(vectors.size());
  for (const auto& v : vectors) {
    lat += v.origin.lat;
    lon += v.origin.lon;
    duration += v.duration_h;
    // A member with an undefined azimuth contributes a zero vector.
    polar.push_back({v.azimuth_defined ? v.azimuth_deg : 0.0,
                     v.azimuth_defined ? v.magnitude : 0.0});
  }
  double n = static_cast<double>(vectors.size());

  GroupVector g;
  g.n = vectors.size();
  g.origin = geo::make_point(lat / n, lon / n);
  ResultantVector r = mean_vector(polar);
  g.magnitude = r.magnitude;
  g.azimuth_deg = r.azimuth_deg;
  g.azimuth_defined = r.azimuth_defined;
  if (r.azimuth_defined) {
    g.displacement_mi = r.magnitude * (duration / n);
    g.endpoint = geo::forward_point(g.origin, r.azimuth_deg,
                                    g.displacement_mi);
  } else {
    g.displacement_mi = 0.0;
    g.endpoint = g.origin;
  }
  return g;
}

std::string vectors_to_geojson(const std::vector<MeanVector>& vectors) {
  json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = json::array();
  for (const auto& v : vectors) {
    json props;
    props["user"] = v.user_id;
    props["magnitude_mph"] = v.magnitude;
    if (v.azimuth_defined)
      props["azimuth_deg"] = v.azimuth_deg;
    else
      props["azimuth_deg"] = nullptr;
    props["displacement_mi"] = v.displacement_mi;
    fc["features"].push_back(line_feature(v.origin, v.endpoint,
                                          std::move(props)));
  }
  return fc.dump(2) + "\n";
}

std::string group_to_geojson(const GroupVector& group) {
  json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = json::array();

  json props;
  props["members"] = group.n;
  props["magnitude_mph"] = group.magnitude;
  if (group.azimuth_defined)
    props["azimuth_deg"] = group.azimuth_deg;
  else
    props["azimuth_deg"] = nullptr;
  props["displacement_mi"] = group.displacement_mi;
  fc["features"].push_back(line_feature(group.origin, group.endpoint,
                                        std::move(props)));

  json origin_props;
  origin_props["role"] = "group_origin";
  json origin_feature;
  origin_feature["type"] = "Feature";
  origin_feature["geometry"]["type"] = "Point";
  origin_feature["geometry"]["coordinates"] = point_coords(group.origin);
  origin_feature["properties"] = std::move(origin_props);
  fc["features"].push_back(std::move(origin_feature));

  json end_props;
  end_props["role"] = "group_destination";
  json end_feature;
  end_feature["type"] = "Feature";
  end_feature["geometry"]["type"] = "Point";
  end_feature["geometry"]["coordinates"] = point_coords(group.endpoint);
  end_feature["properties"] = std::move(end_props);
  fc["features"].push_back(std::move(end_feature));

  return fc.dump(2) + "\n";
}

}  // namespace riskvec::vec
