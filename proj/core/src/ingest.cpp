#include "riskvec/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "riskvec/errors.hpp"
#include "riskvec/text.hpp"
#include "riskvec/timeutil.hpp"

namespace riskvec::ingest {

namespace {

using nlohmann::json;

std::optional<double> number_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number())
    throw validation_error(std::string("field \"") + key +
                           "\" must be a number or null");
  return it->get<double>();
}

std::string string_field(const json& obj, const char* key, bool required) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required)
      throw validation_error(std::string("missing required field \"") + key +
                             "\"");
    return {};
  }
  if (!it->is_string())
    throw validation_error(std::string("field \"") + key +
                           "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

ParseResult parse_posts(std::istream& in) {
  ParseResult result;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    result.lines = line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      result.issues.push_back({line_no, "empty line"});
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      result.issues.push_back({line_no, std::string("invalid JSON: ") +
                                            e.what()});
      continue;
    }
    if (!obj.is_object()) {
      result.issues.push_back({line_no, "record is not a JSON object"});
      continue;
    }
    try {
      TimedPost post;
      post.post_id = string_field(obj, "id", true);
      post.user_id = string_field(obj, "user", true);
      std::string ts = string_field(obj, "ts", true);
      post.timestamp = timeutil::parse_rfc3339(ts);
      post.text = string_field(obj, "text", false);
      std::string reply = string_field(obj, "reply_to", false);
      if (!reply.empty()) post.reply_to = reply;

      if (!seen_ids.insert(post.post_id).second) {
        result.issues.push_back(
            {line_no, "duplicate post id \"" + post.post_id + "\""});
        continue;
      }

      auto lat = number_field(obj, "lat");
      auto lon = number_field(obj, "lon");
      if (lat.has_value() != lon.has_value()) {
        result.issues.push_back(
            {line_no, "post " + post.post_id +
                          ": lat/lon must both be present; location dropped"});
      } else if (lat && lon) {
        try {
          post.location = geo::make_point(*lat, *lon);
        } catch (const Error& e) {
          result.issues.push_back({line_no, "post " + post.post_id + ": " +
                                                e.what() +
                                                "; location dropped"});
        }
      }

      post.hashtags = text::hashtags(post.text);
      post.mentions = text::mentions(post.text);
      result.posts.push_back(std::move(post));
    } catch (const Error& e) {
      result.issues.push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw runtime_error("read failure while parsing posts");
  return result;
}

ParseResult parse_posts_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw runtime_error("cannot open posts file: " + path.string());
  return parse_posts(in);
}

std::set<std::string> select_users(const std::vector<TimedPost>& posts,
                                   const SelectionConfig& cfg) {
  if (cfg.min_distinct_locations < 1)
    throw validation_error("min_distinct_locations must be >= 1");

  std::set<std::string> keyword_set(cfg.keywords.begin(), cfg.keywords.end());

  struct UserView {
    std::set<std::pair<std::int64_t, std::int64_t>> locations;
    bool keyword_hit = false;
    bool in_window = true;
    bool has_earliest = false;
    std::int64_t earliest_ts = 0;
    geo::GeoPoint earliest_point{};
  };
  std::map<std::string, UserView> views;

  for (const auto& post : posts) {
    auto& v = views[post.user_id];
    if (cfg.window_start && post.timestamp < *cfg.window_start)
      v.in_window = false;
    if (cfg.window_end && post.timestamp > *cfg.window_end)
      v.in_window = false;
    if (!v.keyword_hit) {
      for (const auto& tok : text::tokenize(post.text)) {
        if (keyword_set.count(tok.value)) {
          v.keyword_hit = true;
          break;
        }
      }
    }
    if (post.location) {
      v.locations.insert({std::llround(post.location->lat * 1e5),
                          std::llround(post.location->lon * 1e5)});
      if (!v.has_earliest || post.timestamp < v.earliest_ts) {
        v.has_earliest = true;
        v.earliest_ts = post.timestamp;
        v.earliest_point = *post.location;
      }
    }
  }

  std::set<std::string> selected;
  for (const auto& [user, v] : views) {
    if (!v.in_window) continue;
    if (!v.keyword_hit) continue;
    if (v.locations.size() <
        static_cast<std::size_t>(cfg.min_distinct_locations))
      continue;
    if (!cfg.study_area.empty()) {
      if (!v.has_earliest) continue;
      bool inside = false;
      for (const auto& poly : cfg.study_area) {
        if (poly.contains(v.earliest_point)) {
          inside = true;
          break;
        }
      }
      if (!inside) continue;
    }
    selected.insert(user);
  }
  return selected;
}

const std::set<std::string>& PeerGraph::peers_of(
    const std::string& user) const {
  static const std::set<std::string> kEmpty;
  auto it = edges.find(user);
  return it == edges.end() ? kEmpty : it->second;
}

PeerGraph build_peer_graph(const std::vector<TimedPost>& posts,
                           const std::set<std::string>& users) {
  std::unordered_set<std::string> authors;
  for (const auto& post : posts) authors.insert(post.user_id);
  for (const auto& u : users)
    if (!authors.count(u))
      throw validation_error("peer graph requested for non-author user \"" +
                             u + "\"");

  PeerGraph graph;
  for (const auto& post : posts) {
    if (!users.count(post.user_id)) continue;
    auto add_target = [&](const std::string& target) {
      if (target.empty() || target == post.user_id) return;
      graph.edges[post.user_id].insert(target);
      if (!authors.count(target)) graph.external.insert(target);
    };
    for (const auto& m : post.mentions) add_target(m);
    if (post.reply_to) add_target(*post.reply_to);
  }
  return graph;
}

}  // namespace riskvec::ingest
