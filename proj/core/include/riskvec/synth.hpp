#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace riskvec::synth {

// Layout: nested circular evacuation zones around a common center (levels
// 3, 2, 1 going outward at the given radii) plus an optional flood disk
// overlapping the middle. Movement policies:
//   flee        start near the center, walk straight out past every zone
//   seek        start well outside, walk straight in to the center
//   stationary  every post at one spot (fails the location filter)
//   random_walk unconstrained wandering; sign predicted geometrically
struct ScenarioSpec {
  int n_flee = 15;
  int n_seek = 15;
  int n_stationary = 5;
  int n_random_walk = 15;
  int n_zone_rings = 3;  // 0..3
  bool flood = true;
  double p_mention = 0.35;
  std::int64_t base_epoch = 1351434600;
};

struct GroundTruthUser {
  std::string user_id;
  std::string policy;
  int expected_sign = 0;  // sign of the true RBQ: -1, 0, +1
  // Degenerate users are excluded from sign-accuracy scoring: stationary
  // users (never selected) and walkers whose predicted origin or endpoint
  // lies too close to a level boundary for the sign to be stable.
  bool degenerate = false;
  int predicted_r_origin = 0;
  int predicted_r_dest = 0;
};

struct Scenario {
  std::string posts_jsonl;
  std::string evac_geojson;
  std::string flood_geojson;
  std::string official_corpus;
  std::string ground_truth_json;
  std::string pipeline_cfg;
  std::vector<GroundTruthUser> users;
};

// Fully deterministic in (spec, seed). The ground truth is computed with
// flat-earth arithmetic independent of the geodesic code under test;
// boundary-adjacent cases are flagged degenerate instead of guessed.
Scenario synthesize_scenario(const ScenarioSpec& spec, std::uint64_t seed);

// Writes posts.jsonl, evac.geojson, flood.geojson, official_corpus.txt,
// ground_truth.json and pipeline.cfg into dir.
void write_scenario(const Scenario& scenario,
                    const std::filesystem::path& dir);

}  // namespace riskvec::synth
