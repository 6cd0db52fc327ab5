#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "riskvec/errors.hpp"
#include "riskvec/ingest.hpp"
#include "riskvec/rng.hpp"
#include "riskvec/text.hpp"
#include "riskvec/timeutil.hpp"

using namespace riskvec;

TEST_CASE("rfc3339 parsing handles offsets, fractions and oddities") {
  CHECK(timeutil::parse_rfc3339("1970-01-01T00:00:00Z") == 0);
  CHECK(timeutil::parse_rfc3339("2012-10-29T00:00:00Z") == 1351468800);
  CHECK(timeutil::parse_rfc3339("2012-10-29t00:00:00z") == 1351468800);
  CHECK(timeutil::parse_rfc3339("2012-10-29 00:00:00Z") == 1351468800);
  // Fractional seconds truncate.
  CHECK(timeutil::parse_rfc3339("2012-10-29T00:00:00.999Z") == 1351468800);
  // Offsets shift back to UTC.
  CHECK(timeutil::parse_rfc3339("2012-10-29T00:00:00-05:00") ==
        1351468800 + 5 * 3600);
  CHECK(timeutil::parse_rfc3339("2012-10-29T05:30:00+05:30") == 1351468800);
  // Leap second clamps into the last representable second.
  CHECK(timeutil::parse_rfc3339("2012-06-30T23:59:60Z") ==
        timeutil::parse_rfc3339("2012-06-30T23:59:59Z"));
  // Pre-epoch times are valid.
  CHECK(timeutil::parse_rfc3339("1969-12-31T23:59:59Z") == -1);

  CHECK_THROWS_AS(timeutil::parse_rfc3339("2012-13-01T00:00:00Z"), Error);
  CHECK_THROWS_AS(timeutil::parse_rfc3339("2012-02-30T00:00:00Z"), Error);
  CHECK_THROWS_AS(timeutil::parse_rfc3339("2012-10-29T24:00:00Z"), Error);
  CHECK_THROWS_AS(timeutil::parse_rfc3339("2012-10-29T00:00:00"), Error);
  CHECK_THROWS_AS(timeutil::parse_rfc3339("2012-10-29T00:00:00Zjunk"), Error);
  CHECK_THROWS_AS(timeutil::parse_rfc3339("not a time"), Error);

  // Leap year is honored.
  CHECK_NOTHROW(timeutil::parse_rfc3339("2012-02-29T00:00:00Z"));
  CHECK_THROWS_AS(timeutil::parse_rfc3339("2011-02-29T00:00:00Z"), Error);
}

TEST_CASE("rfc3339 format and parse round-trip") {
  Rng rng(201);
  for (int i = 0; i < 500; ++i) {
    std::int64_t t =
        static_cast<std::int64_t>(rng.index(4102444800ull)) - 86400 * 365;
    CHECK(timeutil::parse_rfc3339(timeutil::format_rfc3339(t)) == t);
  }
  CHECK(timeutil::format_rfc3339(1351468800) == "2012-10-29T00:00:00Z");
}

TEST_CASE("tokenizer lowercases, strips urls and mentions, flags hashtags") {
  auto tokens = text::tokenize(
      "Flooding on Ave C! see http://pic.example/x @mayor #Sandy2012 "
      "WWW.NEWS.COM #sandy stay-safe");
  std::vector<std::string> values;
  std::vector<std::string> tags;
  for (const auto& t : tokens) {
    values.push_back(t.value);
    if (t.is_hashtag) tags.push_back(t.value);
  }
  CHECK(std::find(values.begin(), values.end(), "flooding") != values.end());
  CHECK(std::find(values.begin(), values.end(), "c") != values.end());
  // URL chunks and mention chunks vanish entirely.
  for (const auto& v : values) {
    CHECK(v.find("http") == std::string::npos);
    CHECK(v != "mayor");
    CHECK(v.find("news") == std::string::npos);
  }
  CHECK(tags == std::vector<std::string>{"sandy2012", "sandy"});
  // Hyphenated chunk splits into word runs.
  CHECK(std::find(values.begin(), values.end(), "stay") != values.end());
  CHECK(std::find(values.begin(), values.end(), "safe") != values.end());
}

TEST_CASE("hashtags and mentions dedupe in first-seen order") {
  CHECK(text::hashtags("#b #a #b #A") ==
        std::vector<std::string>{"b", "a"});
  CHECK(text::mentions("@Bob hi @alice @bob @alice") ==
        std::vector<std::string>{"Bob", "alice", "bob"});
}

namespace {

std::string line(const std::string& id, const std::string& user,
                 const std::string& ts, const std::string& lat,
                 const std::string& lon, const std::string& text,
                 const std::string& reply = "null") {
  return "{\"id\":\"" + id + "\",\"user\":\"" + user + "\",\"ts\":\"" + ts +
         "\",\"lat\":" + lat + ",\"lon\":" + lon + ",\"text\":\"" + text +
         "\",\"reply_to\":" + reply + "}";
}

}  // namespace

TEST_CASE("post parsing keeps good lines and reports bad ones") {
  std::ostringstream feed;
  feed << line("a1", "ann", "2012-10-29T10:00:00Z", "40.75", "-73.95",
               "driving out #sandy @bob")
       << "\n";
  feed << "not json\n";
  feed << "\n";
  feed << line("a2", "ann", "2012-10-29T11:00:00Z", "null", "null",
               "no fix here")
       << "\n";
  feed << line("a3", "ann", "2012-10-29T12:00:00Z", "40.76", "null",
               "half a fix")
       << "\n";
  feed << line("a1", "bob", "2012-10-29T13:00:00Z", "40.1", "-73.9", "dupe id")
       << "\n";
  feed << line("a4", "bob", "2012-10-29T14:00:00Z", "91.0", "-73.9",
               "lat out of range")
       << "\n";
  feed << "{\"user\":\"carol\",\"ts\":\"2012-10-29T15:00:00Z\",\"text\":\"x\"}"
       << "\n";
  feed << line("a5", "carol", "bogus-ts", "40.7", "-73.9", "bad clock")
       << "\n";

  std::istringstream in(feed.str());
  auto result = ingest::parse_posts(in);

  CHECK(result.lines == 9);
  REQUIRE(result.posts.size() == 4);
  CHECK(result.posts[0].post_id == "a1");
  CHECK(result.posts[0].location.has_value());
  CHECK(result.posts[0].hashtags == std::vector<std::string>{"sandy"});
  CHECK(result.posts[0].mentions == std::vector<std::string>{"bob"});
  CHECK_FALSE(result.posts[1].location.has_value());
  // Half a coordinate pair: kept, location dropped, issue logged.
  CHECK_FALSE(result.posts[2].location.has_value());
  // Out-of-range latitude: kept, location dropped, issue logged.
  CHECK(result.posts[3].post_id == "a4");
  CHECK_FALSE(result.posts[3].location.has_value());

  // Issues: bad json, empty line, half fix, dupe id, bad lat, missing id,
  // bad timestamp.
  CHECK(result.issues.size() == 7);
  bool saw_dupe = false;
  for (const auto& issue : result.issues)
    if (issue.message.find("duplicate") != std::string::npos) saw_dupe = true;
  CHECK(saw_dupe);
}

TEST_CASE("reply_to empty string reads as absent") {
  std::istringstream in(
      line("r1", "u", "2012-10-29T10:00:00Z", "null", "null", "x",
           "\"\"") +
      "\n" +
      line("r2", "u", "2012-10-29T10:01:00Z", "null", "null", "x",
           "\"v\"") +
      "\n");
  auto result = ingest::parse_posts(in);
  REQUIRE(result.posts.size() == 2);
  CHECK_FALSE(result.posts[0].reply_to.has_value());
  REQUIRE(result.posts[1].reply_to.has_value());
  CHECK(*result.posts[1].reply_to == "v");
}

namespace {

ingest::TimedPost mk(const std::string& id, const std::string& user,
                     std::int64_t ts, double lat, double lon,
                     const std::string& body) {
  ingest::TimedPost p;
  p.post_id = id;
  p.user_id = user;
  p.timestamp = ts;
  p.location = geo::make_point(lat, lon);
  p.text = body;
  p.hashtags = text::hashtags(body);
  p.mentions = text::mentions(body);
  return p;
}

ingest::TimedPost mk_nogeo(const std::string& id, const std::string& user,
                           std::int64_t ts, const std::string& body) {
  ingest::TimedPost p;
  p.post_id = id;
  p.user_id = user;
  p.timestamp = ts;
  p.text = body;
  p.hashtags = text::hashtags(body);
  p.mentions = text::mentions(body);
  return p;
}

}  // namespace

TEST_CASE("user screening applies keyword, location-count, window, area") {
  std::vector<ingest::TimedPost> posts = {
      // ann: keyword + two distinct locations -> in
      mk("p1", "ann", 100, 40.75, -73.95, "driving to the bridge"),
      mk("p2", "ann", 200, 40.76, -73.95, "made it"),
      // bob: no keyword anywhere -> out
      mk("p3", "bob", 100, 40.75, -73.95, "quiet morning"),
      mk("p4", "bob", 200, 40.76, -73.95, "still quiet"),
      // carol: keyword but one distinct location (5-decimal dupes) -> out
      mk("p5", "carol", 100, 40.750000001, -73.95, "go now"),
      mk("p6", "carol", 200, 40.750000002, -73.95, "still here"),
      // dave: keyword embedded in a longer word only -> out ("goat")
      mk("p7", "dave", 100, 40.75, -73.95, "goat farm"),
      mk("p8", "dave", 200, 40.76, -73.95, "more goats"),
      // erin: keyword via hashtag token, case-insensitive -> in
      mk("p9", "erin", 100, 40.70, -73.95, "#Sandy rolling in"),
      mk("p10", "erin", 200, 40.71, -73.95, "boards up"),
  };
  ingest::SelectionConfig cfg;
  auto users = ingest::select_users(posts, cfg);
  CHECK(users == std::set<std::string>{"ann", "erin"});

  SUBCASE("window is over all posts, not only geocoded ones") {
    auto with_late = posts;
    with_late.push_back(mk_nogeo("p11", "ann", 5000, "late straggler"));
    ingest::SelectionConfig windowed = cfg;
    windowed.window_start = 0;
    windowed.window_end = 1000;
    CHECK(ingest::select_users(with_late, windowed) ==
          std::set<std::string>{"erin"});
  }

  SUBCASE("study area keeps users whose earliest fix is inside") {
    ingest::SelectionConfig area = cfg;
    // Box around ann's first point only (erin starts at 40.70).
    area.study_area = {geometry::Polygon(
        geometry::make_ring({geo::make_point(40.72, -74.0),
                             geo::make_point(40.72, -73.9),
                             geo::make_point(40.8, -73.9),
                             geo::make_point(40.8, -74.0)}),
        {})};
    CHECK(ingest::select_users(posts, area) == std::set<std::string>{"ann"});
  }

  SUBCASE("more keywords never shrink the selection") {
    ingest::SelectionConfig wide = cfg;
    wide.keywords.push_back("quiet");
    auto more = ingest::select_users(posts, wide);
    for (const auto& u : users) CHECK(more.count(u) == 1);
    CHECK(more.count("bob") == 1);
  }

  SUBCASE("selection ignores post order") {
    auto shuffled = posts;
    Rng rng(7);
    for (std::size_t k = shuffled.size() - 1; k > 0; --k)
      std::swap(shuffled[k], shuffled[rng.index(k + 1)]);
    CHECK(ingest::select_users(shuffled, cfg) == users);
  }

  SUBCASE("min_distinct_locations must be positive") {
    ingest::SelectionConfig bad = cfg;
    bad.min_distinct_locations = 0;
    CHECK_THROWS_AS(ingest::select_users(posts, bad), Error);
  }
}

TEST_CASE("peer graph collects mentions and replies, flags externals") {
  std::vector<ingest::TimedPost> posts = {
      mk("p1", "ann", 100, 40.75, -73.95, "hey @bob and @zoe"),
      mk("p2", "bob", 200, 40.76, -73.95, "@ann yes"),
      mk_nogeo("p3", "ann", 300, "talking to myself @ann"),
      mk_nogeo("p4", "zoe", 400, "around"),
  };
  posts[1].reply_to = "ann";
  posts[2].reply_to = "ann";  // self-reply ignored

  auto graph =
      ingest::build_peer_graph(posts, std::set<std::string>{"ann", "bob"});
  CHECK(graph.edges.at("ann") == std::set<std::string>{"bob", "zoe"});
  CHECK(graph.edges.at("bob") == std::set<std::string>{"ann"});
  // zoe authored posts, so she is a peer but not external.
  CHECK(graph.external.empty());
  CHECK(graph.peers_of("nobody").empty());

  SUBCASE("targets with no authored posts are external") {
    auto posts2 = posts;
    posts2.pop_back();  // drop zoe's post
    auto g2 =
        ingest::build_peer_graph(posts2, std::set<std::string>{"ann", "bob"});
    CHECK(g2.external == std::set<std::string>{"zoe"});
  }

  SUBCASE("selected users must have authored posts") {
    CHECK_THROWS_AS(
        ingest::build_peer_graph(posts, std::set<std::string>{"ghost"}),
        Error);
  }
}
