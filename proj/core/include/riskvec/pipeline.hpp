#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "riskvec/content.hpp"
#include "riskvec/ingest.hpp"
#include "riskvec/risk.hpp"
#include "riskvec/stats.hpp"

namespace riskvec::pipeline {

// Bumped when the config or artifact formats change shape.
inline constexpr int kSchemaVersion = 1;

struct PipelineConfig {
  // Input files. Relative paths in the config resolve against the config
  // file's directory. flood, lexicon, official_corpus and study_area are
  // optional: empty path = feature off (bundled lexicon for an empty
  // lexicon path).
  std::filesystem::path posts;
  std::filesystem::path evac;
  std::filesystem::path flood;
  std::filesystem::path lexicon;
  std::filesystem::path official_corpus;
  std::filesystem::path study_area;
  std::filesystem::path out_dir;

  ingest::SelectionConfig selection;
  content::ContentConfig content;
  risk::RiskScheme scheme = risk::RiskScheme::pilot_0_4;
  stats::PeerAggregation aggregation = stats::PeerAggregation::ratio_mean;
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
  std::string units = "miles-mph";

  // Raw config text, hashed into the run manifest.
  std::string raw_text;
  std::filesystem::path config_path;
};

// Parses key = value lines ('#' comments, unknown keys rejected).
PipelineConfig parse_config(const std::string& text,
                            const std::filesystem::path& config_path);
PipelineConfig load_config(const std::filesystem::path& path);

// Paths written, in write order. Stage outputs land in cfg.out_dir and are
// written atomically (tmp files renamed on commit).
using Written = std::vector<std::filesystem::path>;

// Parses posts, screens users, builds the peer graph. Writes
// parse_report.json, selected_users.txt, peer_graph.json.
Written run_ingest_stage(const PipelineConfig& cfg);

// Trajectories and mean movement vectors for the screened users. Writes
// vectors.geojson. Needs selected_users.txt.
Written run_vectors_stage(const PipelineConfig& cfg);

// Risk levels and RBQ per user. Writes rbq.csv, rbq_summary.json. Needs
// selected_users.txt.
Written run_risk_stage(const PipelineConfig& cfg);

// Labels every post in the corpus. Writes labels.csv, topic_model.txt.
Written run_classify_stage(const PipelineConfig& cfg);

// Joins RBQ, labels and the peer graph into the per-user feature table.
// Writes users.csv. Needs selected_users.txt, rbq.csv, labels.csv,
// peer_graph.json.
Written run_features_stage(const PipelineConfig& cfg);

// Backward-eliminated OLS of RBQ on the content features. Writes
// regression.json, regression.txt. Needs users.csv. Fails hard when the
// sample is too small, unlike the full run which records the skip.
Written run_regress_stage(const PipelineConfig& cfg);

// The whole pipeline in one pass: one atomic bundle holding users.csv,
// rbq_summary.json, vectors.geojson, group_vector.geojson,
// regression.json, regression.txt and run_manifest.json. On failure the
// partial outputs are removed and error_report.json is left behind.
Written run_pipeline(const PipelineConfig& cfg);

}  // namespace riskvec::pipeline
