#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "riskvec/geo.hpp"
#include "riskvec/geometry.hpp"
#include "riskvec/meanvec.hpp"

namespace riskvec::risk {

// pilot_0_4: level = max zone base level (1..3) containing the point, else
// 0, plus 1 if the point is flooded (applied once).
// figure1_1_4: level = max zone base level + 1 (so zones score 2..4 and
// everywhere else scores 1); the flood overlay is not applied. This is the
// alternative grading the bundled worked-example fixture uses.
enum class RiskScheme { pilot_0_4, figure1_1_4 };

RiskScheme parse_scheme(const std::string& token);
std::string scheme_token(RiskScheme scheme);

class RiskSurface {
 public:
  static RiskSurface from_geojson(const std::string& evac_text,
                                  const std::string& flood_text,
                                  RiskScheme scheme);
  // flood path may be empty (no flood layer).
  static RiskSurface load(const std::filesystem::path& evac,
                          const std::filesystem::path& flood,
                          RiskScheme scheme);

  RiskScheme scheme() const { return scheme_; }
  std::size_t zone_count() const { return zones_.size(); }
  std::size_t flood_count() const { return flood_.size(); }

  friend int risk_at(const RiskSurface& surface, const geo::GeoPoint& p);

 private:
  RiskScheme scheme_ = RiskScheme::pilot_0_4;
  geometry::PolygonIndex zones_;  // payload = base level 1..3
  geometry::PolygonIndex flood_;
};

// Risk level in [0, 4] at a point.
int risk_at(const RiskSurface& surface, const geo::GeoPoint& p);

// ((R_d - R_o) + R_d) * (d * s)
double rbq(int r_origin, int r_dest, double distance_mi, double speed_mph);

struct RbqRecord {
  std::string user_id;
  int r_origin = 0;
  int r_dest = 0;
  double distance_mi = 0.0;
  double speed_mph = 0.0;
  double rbq = 0.0;
};

RbqRecord user_rbq(const geo::Trajectory& traj, const vec::MeanVector& mv,
                   const RiskSurface& surface);

struct RbqSummary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  std::size_t n = 0;
};

RbqSummary rbq_summary(const std::vector<RbqRecord>& records);

// CSV with header user_id,r_origin,r_dest,distance_mi,speed_mph,rbq.
std::string rbq_csv(const std::vector<RbqRecord>& records);
std::vector<RbqRecord> rbq_from_csv(const std::string& text);

std::string summary_json(const RbqSummary& summary);

}  // namespace riskvec::risk
