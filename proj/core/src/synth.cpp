#include "riskvec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "riskvec/errors.hpp"
#include "riskvec/geo.hpp"
#include "riskvec/io.hpp"
#include "riskvec/rng.hpp"
#include "riskvec/timeutil.hpp"

namespace riskvec::synth {

namespace {

using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279502884;
const geo::GeoPoint kCenter{40.75, -73.95};
constexpr double kRingRadii[3] = {2.0, 4.0, 6.0};
constexpr int kRingLevels[3] = {3, 2, 1};
constexpr double kFloodRadius = 1.5;
constexpr double kFloodOffsetMi = 0.8;  // east of center
constexpr double kBoundaryBuffer = 0.35;
constexpr double kMinDisplacement = 0.15;

// Miles per degree of latitude on the working sphere.
const double kMilesPerDegLat = geo::kEarthRadiusMiles * kPi / 180.0;

struct Local {
  double x = 0.0;  // miles east of center
  double y = 0.0;  // miles north of center
};

Local to_local(const geo::GeoPoint& p) {
  Local l;
  l.y = (p.lat - kCenter.lat) * kMilesPerDegLat;
  l.x = (p.lon - kCenter.lon) * kMilesPerDegLat *
        std::cos(kCenter.lat * kPi / 180.0);
  return l;
}

double local_dist(const Local& a, const Local& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

struct Step {
  double azimuth_deg = 0.0;
  double length_mi = 0.0;
  std::int64_t gap_s = 0;
};

struct WalkPlan {
  geo::GeoPoint start{};
  std::vector<Step> steps;
  std::vector<geo::GeoPoint> positions;  // start + one per step
};

WalkPlan realize(const geo::GeoPoint& start, std::vector<Step> steps) {
  WalkPlan plan;
  plan.start = start;
  plan.positions.push_back(start);
  geo::GeoPoint cur = start;
  for (const auto& s : steps) {
    cur = geo::forward_point(cur, s.azimuth_deg, s.length_mi);
    plan.positions.push_back(cur);
  }
  plan.steps = std::move(steps);
  return plan;
}

struct Prediction {
  Local origin{};
  Local endpoint{};
  double displacement = 0.0;
};

// Flat-earth mean-movement prediction from the commanded kinematics. This
// deliberately avoids the spherical code under test.
Prediction predict(const WalkPlan& plan) {
  Prediction pred;
  pred.origin = to_local(plan.start);
  double ve = 0.0, vn = 0.0, hours = 0.0;
  for (const auto& s : plan.steps) {
    double h = static_cast<double>(s.gap_s) / 3600.0;
    double speed = s.length_mi / h;
    double theta = s.azimuth_deg * (kPi / 180.0);
    ve += speed * std::sin(theta);
    vn += speed * std::cos(theta);
    hours += h;
  }
  double n = static_cast<double>(plan.steps.size());
  ve /= n;
  vn /= n;
  pred.displacement = std::sqrt(ve * ve + vn * vn) * hours;
  pred.endpoint.x = pred.origin.x + ve * hours;
  pred.endpoint.y = pred.origin.y + vn * hours;
  return pred;
}

struct Surface {
  int rings = 3;
  bool flood = true;
  Local flood_center{};

  int level_at(const Local& p) const {
    Local origin{};
    double r = local_dist(p, origin);
    int base = 0;
    for (int i = 0; i < rings; ++i)
      if (r <= kRingRadii[i]) {
        base = kRingLevels[i];
        break;
      }
    if (flood && local_dist(p, flood_center) <= kFloodRadius) base += 1;
    return base;
  }

  double boundary_distance(const Local& p) const {
    Local origin{};
    double best = 1e9;
    double r = local_dist(p, origin);
    for (int i = 0; i < rings; ++i)
      best = std::min(best, std::abs(r - kRingRadii[i]));
    if (flood)
      best = std::min(best,
                      std::abs(local_dist(p, flood_center) - kFloodRadius));
    return best;
  }
};

json disk_feature(const geo::GeoPoint& center, double radius,
                  const std::string& name, int zone_level) {
  json ring = json::array();
  json first;
  for (int k = 0; k < 64; ++k) {
    double az = static_cast<double>(k) * (360.0 / 64.0);
    geo::GeoPoint v = geo::forward_point(center, az, radius);
    json pos = json::array({v.lon, v.lat});
    if (k == 0) first = pos;
    ring.push_back(pos);
  }
  ring.push_back(first);

  json f;
  f["type"] = "Feature";
  f["properties"]["name"] = name;
  if (zone_level > 0) f["properties"]["zone_level"] = zone_level;
  f["geometry"]["type"] = "Polygon";
  f["geometry"]["coordinates"] = json::array({ring});
  return f;
}

const char* kOfficialDocs[] = {
    "mandatory evacuation order issued for coastal zone residents leave "
    "immediately",
    "mandatory evacuation order issued for coastal zone residents leave "
    "immediately",
    "shelter locations open overnight cots blankets meals available citywide",
    "shelter locations open overnight cots blankets meals available citywide",
    "surge forecast high tide winds gusting rainfall totals rising overnight",
    "surge forecast high tide winds gusting rainfall totals rising overnight",
    "subway suspended buses rerouted bridges closed tunnels flooded service "
    "updates",
    "subway suspended buses rerouted bridges closed tunnels flooded service "
    "updates"};

const char* kFirstPostTexts[] = {
    "at home packing everything up",
    "driving out with the whole family",
    "getting ready to go before the water comes",
    "at the corner store stocking up",
    "driving over the bridge while it is open"};

const char* kNeutralTexts[] = {
    "streets look empty around here",
    "power still on for the moment",
    "checking on the neighbors down the block",
    "lines at the market wrapped around the corner",
    "radio reports the surge peaks after midnight"};

const char* kVerbTexts[] = {
    "need to go right now",
    "going uptown to the shelter",
    "doing one more supply run",
    "watching the river climb the seawall",
    "she said the bridge is closing soon"};

const char* kInfoTexts[] = {
    "#sandy shelter list posted at the library",
    "#storm update zone map reissued this morning",
    "#hurricane briefing moved to noon",
    "#sandy boil water notice for downtown"};

const char* kNegativeTexts[] = {
    "terrified horrible awful night",
    "awful scared terrified out here",
    "horrible nightmare terrible flooding everywhere"};

const char* kPositiveTexts[] = {
    "grateful amazing neighbors wonderful help",
    "so thankful for this amazing wonderful crew",
    "love these brilliant generous volunteers"};

template <std::size_t N>
const char* pick(Rng& rng, const char* const (&pool)[N]) {
  return pool[rng.index(N)];
}

std::string post_text(Rng& rng, const std::string& policy, int seq) {
  if (seq == 0) return pick(rng, kFirstPostTexts);
  double roll = rng.uniform();
  if (policy == "flee") {
    if (roll < 0.35) return pick(rng, kVerbTexts);
    if (roll < 0.55) return pick(rng, kNegativeTexts);
    if (roll < 0.7) return pick(rng, kInfoTexts);
    return pick(rng, kNeutralTexts);
  }
  if (policy == "seek") {
    if (roll < 0.25) return pick(rng, kVerbTexts);
    if (roll < 0.4) return pick(rng, kPositiveTexts);
    if (roll < 0.55) return pick(rng, kInfoTexts);
    return pick(rng, kNeutralTexts);
  }
  if (roll < 0.2) return pick(rng, kVerbTexts);
  if (roll < 0.3) return pick(rng, kInfoTexts);
  if (roll < 0.4) return pick(rng, kNegativeTexts);
  return pick(rng, kNeutralTexts);
}

}  // namespace

Scenario synthesize_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.n_flee < 0 || spec.n_seek < 0 || spec.n_stationary < 0 ||
      spec.n_random_walk < 0)
    throw validation_error("user counts must be non-negative");
  if (spec.n_flee + spec.n_seek + spec.n_stationary + spec.n_random_walk == 0)
    throw validation_error("scenario needs at least one user");
  if (spec.n_zone_rings < 0 || spec.n_zone_rings > 3)
    throw validation_error("n_zone_rings must lie in [0, 3]");
  if ((spec.n_flee > 0 || spec.n_seek > 0) && spec.n_zone_rings == 0)
    throw validation_error(
        "flee and seek policies need at least one evacuation zone");
  if (spec.p_mention < 0.0 || spec.p_mention > 1.0)
    throw validation_error("p_mention must lie in [0, 1]");

  Surface surface;
  surface.rings = spec.n_zone_rings;
  surface.flood = spec.flood;
  surface.flood_center = Local{kFloodOffsetMi, 0.0};
  geo::GeoPoint flood_center_pt =
      geo::forward_point(kCenter, 90.0, kFloodOffsetMi);
  double outer_radius =
      spec.n_zone_rings > 0 ? kRingRadii[spec.n_zone_rings - 1] : 0.0;

  struct UserPlan {
    std::string user_id;
    std::string policy;
    WalkPlan walk;           // empty steps for stationary users
    geo::GeoPoint home{};    // stationary position
    std::int64_t start_ts = 0;
  };

  std::vector<UserPlan> plans;
  std::vector<std::string> user_ids;
  auto make_id = [](const std::string& prefix, int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%s%02d", prefix.c_str(), i + 1);
    return std::string(buf);
  };
  for (int i = 0; i < spec.n_flee; ++i)
    user_ids.push_back(make_id("flee", i));
  for (int i = 0; i < spec.n_seek; ++i)
    user_ids.push_back(make_id("seek", i));
  for (int i = 0; i < spec.n_stationary; ++i)
    user_ids.push_back(make_id("still", i));
  for (int i = 0; i < spec.n_random_walk; ++i)
    user_ids.push_back(make_id("walk", i));

  Scenario scenario;
  std::size_t idx = 0;
  for (int i = 0; i < spec.n_flee; ++i, ++idx) {
    Rng rng = Rng::derive(seed, "walk", idx);
    UserPlan plan;
    plan.user_id = user_ids[idx];
    plan.policy = "flee";
    plan.start_ts = spec.base_epoch +
                    static_cast<std::int64_t>(rng.index(6 * 3600));
    double beta = rng.uniform(0.0, 360.0);
    geo::GeoPoint start =
        geo::forward_point(kCenter, beta, rng.uniform(0.05, 0.8));
    double total = rng.uniform(outer_radius + 4.0, outer_radius + 6.0);
    std::vector<Step> steps;
    double weights[5];
    double wsum = 0.0;
    for (double& w : weights) {
      w = rng.uniform(0.5, 1.0);
      wsum += w;
    }
    for (double w : weights) {
      Step s;
      s.azimuth_deg = std::fmod(beta + rng.uniform(-8.0, 8.0) + 360.0, 360.0);
      s.length_mi = total * w / wsum;
      s.gap_s = 600 + static_cast<std::int64_t>(rng.index(1201));
      steps.push_back(s);
    }
    plan.walk = realize(start, std::move(steps));
    plans.push_back(std::move(plan));
  }
  for (int i = 0; i < spec.n_seek; ++i, ++idx) {
    Rng rng = Rng::derive(seed, "walk", idx);
    UserPlan plan;
    plan.user_id = user_ids[idx];
    plan.policy = "seek";
    plan.start_ts = spec.base_epoch +
                    static_cast<std::int64_t>(rng.index(6 * 3600));
    double beta = rng.uniform(0.0, 360.0);
    double r0 = rng.uniform(outer_radius + 2.5, outer_radius + 4.5);
    geo::GeoPoint start = geo::forward_point(kCenter, beta, r0);
    double target = rng.uniform(0.2, 0.6);
    std::vector<Step> steps;
    geo::GeoPoint cur = start;
    double remaining = r0 - target;
    int n_steps = 5;
    for (int k = 0; k < n_steps; ++k) {
      Step s;
      s.azimuth_deg = geo::initial_bearing(cur, kCenter);
      s.length_mi = remaining / static_cast<double>(n_steps - k);
      s.gap_s = 600 + static_cast<std::int64_t>(rng.index(1201));
      remaining -= s.length_mi;
      cur = geo::forward_point(cur, s.azimuth_deg, s.length_mi);
      steps.push_back(s);
    }
    plan.walk = realize(start, std::move(steps));
    plans.push_back(std::move(plan));
  }
  for (int i = 0; i < spec.n_stationary; ++i, ++idx) {
    Rng rng = Rng::derive(seed, "walk", idx);
    UserPlan plan;
    plan.user_id = user_ids[idx];
    plan.policy = "stationary";
    plan.start_ts = spec.base_epoch +
                    static_cast<std::int64_t>(rng.index(6 * 3600));
    plan.home = geo::forward_point(kCenter, rng.uniform(0.0, 360.0),
                                   rng.uniform(0.0, outer_radius + 3.0));
    plan.walk.start = plan.home;
    plan.walk.positions.push_back(plan.home);
    plans.push_back(std::move(plan));
  }
  for (int i = 0; i < spec.n_random_walk; ++i, ++idx) {
    Rng rng = Rng::derive(seed, "walk", idx);
    UserPlan plan;
    plan.user_id = user_ids[idx];
    plan.policy = "random_walk";
    plan.start_ts = spec.base_epoch +
                    static_cast<std::int64_t>(rng.index(6 * 3600));
    geo::GeoPoint start =
        geo::forward_point(kCenter, rng.uniform(0.0, 360.0),
                           rng.uniform(0.3, outer_radius + 2.0));
    std::size_t n_steps = 4 + rng.index(5);
    std::vector<Step> steps;
    for (std::size_t k = 0; k < n_steps; ++k) {
      Step s;
      s.azimuth_deg = rng.uniform(0.0, 360.0);
      s.length_mi = rng.uniform(0.8, 2.0);
      s.gap_s = 600 + static_cast<std::int64_t>(rng.index(1201));
      steps.push_back(s);
    }
    plan.walk = realize(start, std::move(steps));
    plans.push_back(std::move(plan));
  }

  // Ground truth from the commanded kinematics.
  for (const auto& plan : plans) {
    GroundTruthUser gt;
    gt.user_id = plan.user_id;
    gt.policy = plan.policy;
    if (plan.policy == "stationary") {
      gt.expected_sign = 0;
      gt.degenerate = true;
    } else {
      Prediction pred = predict(plan.walk);
      gt.predicted_r_origin = surface.level_at(pred.origin);
      gt.predicted_r_dest = surface.level_at(pred.endpoint);
      int lever = 2 * gt.predicted_r_dest - gt.predicted_r_origin;
      gt.expected_sign = lever > 0 ? 1 : lever < 0 ? -1 : 0;
      bool near_boundary =
          surface.boundary_distance(pred.origin) < kBoundaryBuffer ||
          surface.boundary_distance(pred.endpoint) < kBoundaryBuffer;
      gt.degenerate = lever == 0 || pred.displacement < kMinDisplacement ||
                      (plan.policy == "random_walk" && near_boundary);
    }
    scenario.users.push_back(gt);
  }

  // Posts.
  std::ostringstream posts;
  for (std::size_t u = 0; u < plans.size(); ++u) {
    const auto& plan = plans[u];
    Rng rng = Rng::derive(seed, "content", u);
    std::int64_t ts = plan.start_ts;
    std::vector<geo::GeoPoint> positions = plan.walk.positions;
    std::size_t n_posts = positions.size();
    if (plan.policy == "stationary") {
      n_posts = 4 + rng.index(3);
      positions.assign(n_posts, plan.home);
    }
    int seq = 0;
    auto emit = [&](const geo::GeoPoint* where, std::int64_t when,
                    const std::string& body) {
      json j;
      j["id"] = plan.user_id + "-" + std::to_string(seq);
      j["user"] = plan.user_id;
      j["ts"] = timeutil::format_rfc3339(when);
      if (where) {
        j["lat"] = where->lat;
        j["lon"] = where->lon;
      } else {
        j["lat"] = nullptr;
        j["lon"] = nullptr;
      }
      std::string text = body;
      if (rng.chance(spec.p_mention) && user_ids.size() > 1) {
        std::size_t t = rng.index(user_ids.size());
        if (user_ids[t] == plan.user_id) t = (t + 1) % user_ids.size();
        text += " @" + user_ids[t];
      }
      j["text"] = text;
      if (rng.chance(spec.p_mention / 2.0) && user_ids.size() > 1) {
        std::size_t t = rng.index(user_ids.size());
        if (user_ids[t] == plan.user_id) t = (t + 1) % user_ids.size();
        j["reply_to"] = user_ids[t];
      } else {
        j["reply_to"] = nullptr;
      }
      posts << j.dump() << "\n";
      ++seq;
    };

    for (std::size_t k = 0; k < n_posts; ++k) {
      std::int64_t when = ts;
      if (k > 0) {
        std::int64_t gap = plan.policy == "stationary" || plan.walk.steps.empty()
                               ? 600 + static_cast<std::int64_t>(rng.index(1201))
                               : plan.walk.steps[k - 1].gap_s;
        when = ts + gap;
      }
      emit(&positions[k], when, post_text(rng, plan.policy, seq));
      ts = when;
    }
    // A couple of ungeocoded posts; content analysis still sees them.
    std::size_t extra = rng.index(3);
    for (std::size_t k = 0; k < extra; ++k) {
      ts += 600 + static_cast<std::int64_t>(rng.index(1201));
      emit(nullptr, ts, post_text(rng, plan.policy, seq));
    }
  }
  scenario.posts_jsonl = posts.str();

  // Surface files.
  json evac;
  evac["type"] = "FeatureCollection";
  evac["features"] = json::array();
  for (int i = 0; i < spec.n_zone_rings; ++i)
    evac["features"].push_back(
        disk_feature(kCenter, kRingRadii[i],
                     "zone-level-" + std::to_string(kRingLevels[i]),
                     kRingLevels[i]));
  scenario.evac_geojson = evac.dump(2) + "\n";

  json flood;
  flood["type"] = "FeatureCollection";
  flood["features"] = json::array();
  if (spec.flood)
    flood["features"].push_back(
        disk_feature(flood_center_pt, kFloodRadius, "flood", 0));
  scenario.flood_geojson = flood.dump(2) + "\n";

  std::ostringstream corpus;
  for (const char* doc : kOfficialDocs) corpus << doc << "\n";
  scenario.official_corpus = corpus.str();

  json truth;
  truth["seed"] = seed;
  truth["surface"] = {{"center", {kCenter.lon, kCenter.lat}},
                      {"ring_radii_mi", json::array()},
                      {"flood", spec.flood},
                      {"flood_radius_mi", kFloodRadius}};
  for (int i = 0; i < spec.n_zone_rings; ++i)
    truth["surface"]["ring_radii_mi"].push_back(kRingRadii[i]);
  truth["users"] = json::array();
  for (const auto& gt : scenario.users)
    truth["users"].push_back({{"user_id", gt.user_id},
                              {"policy", gt.policy},
                              {"expected_sign", gt.expected_sign},
                              {"degenerate", gt.degenerate},
                              {"predicted_r_origin", gt.predicted_r_origin},
                              {"predicted_r_dest", gt.predicted_r_dest}});
  scenario.ground_truth_json = truth.dump(2) + "\n";

  std::ostringstream cfg;
  cfg << "posts = posts.jsonl\n";
  cfg << "evac = evac.geojson\n";
  cfg << "flood = flood.geojson\n";
  cfg << "official_corpus = official_corpus.txt\n";
  cfg << "out_dir = out\n";
  cfg << "risk_scheme = pilot-0-4\n";
  cfg << "seed = " << seed << "\n";
  cfg << "keywords = sandy,at,go,drive,driving\n";
  cfg << "min_distinct_locations = 2\n";
  cfg << "sentiment_threshold = 0.66\n";
  cfg << "topic_threshold = 0.66\n";
  cfg << "alpha = 0.05\n";
  cfg << "peer_aggregation = ratio_mean\n";
  cfg << "units = miles-mph\n";
  scenario.pipeline_cfg = cfg.str();

  return scenario;
}

void write_scenario(const Scenario& scenario,
                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw runtime_error("cannot create scenario dir: " + dir.string());
  io::write_file(dir / "posts.jsonl", scenario.posts_jsonl);
  io::write_file(dir / "evac.geojson", scenario.evac_geojson);
  io::write_file(dir / "flood.geojson", scenario.flood_geojson);
  io::write_file(dir / "official_corpus.txt", scenario.official_corpus);
  io::write_file(dir / "ground_truth.json", scenario.ground_truth_json);
  io::write_file(dir / "pipeline.cfg", scenario.pipeline_cfg);
}

}  // namespace riskvec::synth
