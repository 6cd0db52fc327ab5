#include "riskvec/risk.hpp"

#include <algorithm>
#include <cstdlib>

#include <json.hpp>

#include "riskvec/errors.hpp"
#include "riskvec/geojson.hpp"
#include "riskvec/io.hpp"

namespace riskvec::risk {

namespace {

double parse_number(const std::string& field, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0')
    throw validation_error("bad numeric field in " + what + ": \"" + field +
                           "\"");
  return v;
}

}  // namespace

RiskScheme parse_scheme(const std::string& token) {
  if (token == "pilot-0-4") return RiskScheme::pilot_0_4;
  if (token == "figure1-1-4") return RiskScheme::figure1_1_4;
  throw validation_error("unknown risk scheme \"" + token +
                         "\" (expected pilot-0-4 or figure1-1-4)");
}

std::string scheme_token(RiskScheme scheme) {
  return scheme == RiskScheme::pilot_0_4 ? "pilot-0-4" : "figure1-1-4";
}

RiskSurface RiskSurface::from_geojson(const std::string& evac_text,
                                      const std::string& flood_text,
                                      RiskScheme scheme) {
  RiskSurface surface;
  surface.scheme_ = scheme;

  for (auto& feature :
       geojson::parse_polygon_features(evac_text, "evacuation zones")) {
    const auto& props = feature.properties;
    if (!props.is_object() || !props.contains("zone_level") ||
        !props["zone_level"].is_number_integer())
      throw validation_error("evacuation zones " + feature.label +
                             ": missing integer property zone_level");
    std::int64_t level = props["zone_level"].get<std::int64_t>();
    if (level < 1 || level > 3)
      throw validation_error("evacuation zones " + feature.label +
                             ": zone_level " + std::to_string(level) +
                             " outside {1,2,3}");
    for (auto& poly : feature.polygons)
      surface.zones_.add(std::move(poly), level);
  }
  surface.zones_.build();

  if (!flood_text.empty()) {
    for (auto& poly : geojson::parse_polygons(flood_text, "flood layer"))
      surface.flood_.add(std::move(poly), 1);
  }
  surface.flood_.build();
  return surface;
}

RiskSurface RiskSurface::load(const std::filesystem::path& evac,
                              const std::filesystem::path& flood,
                              RiskScheme scheme) {
  std::string evac_text = io::read_file(evac);
  std::string flood_text = flood.empty() ? std::string() : io::read_file(flood);
  return from_geojson(evac_text, flood_text, scheme);
}

int risk_at(const RiskSurface& surface, const geo::GeoPoint& p) {
  int base = 0;
  for (std::int64_t level : surface.zones_.query(p))
    base = std::max(base, static_cast<int>(level));
  if (surface.scheme_ == RiskScheme::figure1_1_4) return base + 1;
  if (!surface.flood_.query(p).empty()) return base + 1;
  return base;
}

double rbq(int r_origin, int r_dest, double distance_mi, double speed_mph) {
  if (r_origin < 0 || r_origin > 4 || r_dest < 0 || r_dest > 4)
    throw validation_error("risk levels must lie in [0, 4]");
  if (distance_mi < 0.0 || speed_mph < 0.0)
    throw validation_error("distance and speed must be non-negative");
  return (static_cast<double>(r_dest - r_origin) + r_dest) *
         (distance_mi * speed_mph);
}

RbqRecord user_rbq(const geo::Trajectory& traj, const vec::MeanVector& mv,
                   const RiskSurface& surface) {
  RbqRecord rec;
  rec.user_id = traj.user_id;
  rec.r_origin = risk_at(surface, mv.origin);
  rec.r_dest = risk_at(surface, mv.endpoint);
  rec.distance_mi = traj.total_distance_mi;
  rec.speed_mph = traj.average_speed_mph;
  rec.rbq = rbq(rec.r_origin, rec.r_dest, rec.distance_mi, rec.speed_mph);
  return rec;
}

RbqSummary rbq_summary(const std::vector<RbqRecord>& records) {
  if (records.empty())
    throw validation_error("rbq_summary requires at least one record");
  std::vector<double> values;
  values.reserve(records.size());
  double sum = 0.0;
  for (const auto& r : records) {
    values.push_back(r.rbq);
    sum += r.rbq;
  }
  std::sort(values.begin(), values.end());

  RbqSummary s;
  s.n = values.size();
  s.min = values.front();
  s.max = values.back();
  s.mean = sum / static_cast<double>(values.size());
  std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1
                 ? values[mid]
                 : (values[mid - 1] + values[mid]) / 2.0;
  return s;
}

std::string rbq_csv(const std::vector<RbqRecord>& records) {
  io::CsvWriter w;
  w.header({"user_id", "r_origin", "r_dest", "distance_mi", "speed_mph",
            "rbq"});
  for (const auto& r : records) {
    w.field(r.user_id);
    w.field(static_cast<std::int64_t>(r.r_origin));
    w.field(static_cast<std::int64_t>(r.r_dest));
    w.field(r.distance_mi);
    w.field(r.speed_mph);
    w.field(r.rbq);
    w.end_row();
  }
  return w.str();
}

std::vector<RbqRecord> rbq_from_csv(const std::string& text) {
  std::vector<RbqRecord> records;
  std::size_t start = 0;
  bool first = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto fields = io::parse_csv_line(line);
    if (first) {
      first = false;
      if (fields.size() != 6 || fields[0] != "user_id")
        throw validation_error("unexpected rbq CSV header");
      continue;
    }
    if (fields.size() != 6)
      throw validation_error("malformed rbq CSV row: \"" + std::string(line) +
                             "\"");
    RbqRecord r;
    r.user_id = fields[0];
    r.r_origin = static_cast<int>(parse_number(fields[1], "rbq CSV"));
    r.r_dest = static_cast<int>(parse_number(fields[2], "rbq CSV"));
    r.distance_mi = parse_number(fields[3], "rbq CSV");
    r.speed_mph = parse_number(fields[4], "rbq CSV");
    r.rbq = parse_number(fields[5], "rbq CSV");
    records.push_back(std::move(r));
  }
  return records;
}

std::string summary_json(const RbqSummary& summary) {
  nlohmann::json j;
  j["n"] = summary.n;
  j["min"] = summary.min;
  j["max"] = summary.max;
  j["mean"] = summary.mean;
  j["median"] = summary.median;
  return j.dump(2) + "\n";
}

}  // namespace riskvec::risk
