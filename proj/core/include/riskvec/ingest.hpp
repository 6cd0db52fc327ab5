#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "riskvec/geo.hpp"
#include "riskvec/geometry.hpp"

namespace riskvec::ingest {

struct TimedPost {
  std::string post_id;
  std::string user_id;
  std::int64_t timestamp = 0;  // Unix seconds, UTC
  std::optional<geo::GeoPoint> location;
  std::string text;
  std::vector<std::string> hashtags;  // lowercase, derived from text
  std::vector<std::string> mentions;  // handles as typed, derived from text
  std::optional<std::string> reply_to;
};

struct ParseIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ParseResult {
  std::vector<TimedPost> posts;
  std::vector<ParseIssue> issues;
  std::size_t lines = 0;  // physical lines seen, including rejected ones
};

// Reads JSONL posts: one object per line with keys id, user, ts (RFC3339),
// lat, lon (numbers or null), text, reply_to. Bad lines and rejected
// records land in issues with their line number; parsing never throws for
// content problems, only for I/O failure.
ParseResult parse_posts(std::istream& in);
ParseResult parse_posts_file(const std::filesystem::path& path);

struct SelectionConfig {
  std::vector<std::string> keywords = {"sandy", "at", "go", "drive",
                                       "driving"};
  int min_distinct_locations = 2;
  // Empty = no origin restriction.
  std::vector<geometry::Polygon> study_area;
  // Inclusive bounds; nullopt = unbounded.
  std::optional<std::int64_t> window_start;
  std::optional<std::int64_t> window_end;
};

// Users passing every filter: enough distinct geocoded locations, at least
// one keyword post (whole-token, case-insensitive), earliest geocoded post
// inside the study area when one is set, and all posts inside the time
// window when one is set.
std::set<std::string> select_users(const std::vector<TimedPost>& posts,
                                   const SelectionConfig& cfg);

struct PeerGraph {
  // u -> targets u replied to or mentioned (self-loops excluded).
  std::map<std::string, std::set<std::string>> edges;
  // Edge targets that authored no post in the corpus.
  std::set<std::string> external;

  const std::set<std::string>& peers_of(const std::string& user) const;
};

PeerGraph build_peer_graph(const std::vector<TimedPost>& posts,
                           const std::set<std::string>& users);

}  // namespace riskvec::ingest
