#include "riskvec/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riskvec/errors.hpp"
#include "riskvec/geojson.hpp"
#include "riskvec/io.hpp"
#include "riskvec/meanvec.hpp"
#include "riskvec/text.hpp"
#include "riskvec/timeutil.hpp"

namespace riskvec::pipeline {

namespace {

using nlohmann::json;

const char* kParseReport = "parse_report.json";
const char* kSelectedUsers = "selected_users.txt";
const char* kPeerGraph = "peer_graph.json";
const char* kVectors = "vectors.geojson";
const char* kGroupVector = "group_vector.geojson";
const char* kRbqCsv = "rbq.csv";
const char* kRbqSummary = "rbq_summary.json";
const char* kLabels = "labels.csv";
const char* kTopicDump = "topic_model.txt";
const char* kUsersCsv = "users.csv";
const char* kRegressionJson = "regression.json";
const char* kRegressionTxt = "regression.txt";
const char* kManifest = "run_manifest.json";
const char* kErrorReport = "error_report.json";

constexpr std::size_t kTopicCount = 4;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw validation_error("config key \"" + key +
                           "\" needs a non-negative integer, got \"" + value +
                           "\"");
  return out;
}

double parse_real(const std::string& value, const std::string& key) {
  char* end = nullptr;
  double out = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty())
    throw validation_error("config key \"" + key + "\" needs a number, got \"" +
                           value + "\"");
  return out;
}

std::vector<std::string> split_list(const std::string& value,
                                    const std::string& key) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string::npos) comma = value.size();
    std::string item = trim(value.substr(start, comma - start));
    if (!item.empty()) {
      std::transform(item.begin(), item.end(), item.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      out.push_back(item);
    }
    start = comma + 1;
  }
  if (out.empty())
    throw validation_error("config key \"" + key + "\" lists no entries");
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

// ---- shared loaders ----------------------------------------------------

struct Corpus {
  ingest::ParseResult parsed;
  std::size_t geocoded = 0;
  std::set<std::string> authors;
};

Corpus load_corpus(const PipelineConfig& cfg) {
  Corpus c;
  c.parsed = ingest::parse_posts_file(cfg.posts);
  for (const auto& post : c.parsed.posts) {
    if (post.location) ++c.geocoded;
    c.authors.insert(post.user_id);
  }
  return c;
}

ingest::SelectionConfig selection_for(const PipelineConfig& cfg) {
  ingest::SelectionConfig sel = cfg.selection;
  if (!cfg.study_area.empty())
    sel.study_area = geojson::parse_polygons(io::read_file(cfg.study_area),
                                             cfg.study_area.string());
  return sel;
}

content::Lexicon load_lexicon(const PipelineConfig& cfg) {
  return cfg.lexicon.empty() ? content::Lexicon::bundled()
                             : content::Lexicon::load(cfg.lexicon);
}

content::TopicModel load_topic_model(const PipelineConfig& cfg) {
  if (cfg.official_corpus.empty()) return {};
  if (!cfg.seed)
    throw validation_error(
        "seed required: topic fitting runs when official_corpus is set");
  std::vector<std::vector<text::Token>> docs;
  for (const auto& line : io::read_lines(cfg.official_corpus))
    docs.push_back(text::tokenize(line));
  return content::fit_topics(docs, kTopicCount, *cfg.seed);
}

// Trajectories for the given users; users whose geocoded posts show no
// usable movement are skipped with the reason kept for the manifest.
std::map<std::string, geo::Trajectory> build_trajectories(
    const std::vector<ingest::TimedPost>& posts,
    const std::set<std::string>& users,
    std::map<std::string, std::string>& skipped) {
  std::map<std::string, std::vector<geo::TimedPoint>> points;
  for (const auto& post : posts) {
    if (!post.location || users.count(post.user_id) == 0) continue;
    points[post.user_id].push_back({post.timestamp, *post.location});
  }
  std::map<std::string, geo::Trajectory> out;
  for (const auto& user : users) {
    auto it = points.find(user);
    std::vector<geo::TimedPoint> pts =
        it == points.end() ? std::vector<geo::TimedPoint>{} : it->second;
    try {
      out.emplace(user, geo::build_trajectory(user, std::move(pts)));
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::validation) throw;
      skipped.emplace(user, e.what());
    }
  }
  return out;
}

struct LabeledPost {
  std::string post_id;
  std::string user_id;
  content::ContentLabel label;
};

std::vector<LabeledPost> label_corpus(const std::vector<ingest::TimedPost>& posts,
                                      const content::TopicModel& model,
                                      const content::Lexicon& lexicon,
                                      const content::ContentConfig& ccfg) {
  std::vector<LabeledPost> out;
  out.reserve(posts.size());
  for (const auto& post : posts)
    out.push_back({post.post_id, post.user_id,
                   content::label_post(post.text, model, lexicon, ccfg)});
  return out;
}

std::map<std::string, std::vector<content::ContentLabel>> labels_by_author(
    const std::vector<LabeledPost>& labeled) {
  std::map<std::string, std::vector<content::ContentLabel>> out;
  for (const auto& lp : labeled) out[lp.user_id].push_back(lp.label);
  return out;
}

// ---- stage artifact formats ---------------------------------------------

std::string users_txt(const std::set<std::string>& users) {
  std::string out;
  for (const auto& u : users) {
    out += u;
    out += '\n';
  }
  return out;
}

std::set<std::string> read_selected(const PipelineConfig& cfg) {
  auto path = cfg.out_dir / kSelectedUsers;
  if (!std::filesystem::exists(path))
    throw validation_error("missing " + path.string() + ": run ingest first");
  std::set<std::string> users;
  for (const auto& line : io::read_lines(path)) {
    std::string u = trim(line);
    if (!u.empty()) users.insert(u);
  }
  return users;
}

std::string require_artifact(const PipelineConfig& cfg, const char* name,
                             const char* producer) {
  auto path = cfg.out_dir / name;
  if (!std::filesystem::exists(path))
    throw validation_error("missing " + path.string() + ": run " +
                           std::string(producer) + " first");
  return io::read_file(path);
}

std::string graph_json(const ingest::PeerGraph& graph) {
  json j;
  j["edges"] = json::object();
  for (const auto& [user, targets] : graph.edges) {
    json arr = json::array();
    for (const auto& t : targets) arr.push_back(t);
    j["edges"][user] = arr;
  }
  j["external"] = json::array();
  for (const auto& u : graph.external) j["external"].push_back(u);
  return j.dump(2) + "\n";
}

ingest::PeerGraph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw validation_error(std::string("bad peer_graph.json: ") + e.what());
  }
  ingest::PeerGraph graph;
  if (!j.is_object() || !j.contains("edges") || !j["edges"].is_object())
    throw validation_error("bad peer_graph.json: missing \"edges\" object");
  for (const auto& [user, targets] : j["edges"].items())
    for (const auto& t : targets)
      graph.edges[user].insert(t.get<std::string>());
  if (j.contains("external"))
    for (const auto& u : j["external"])
      graph.external.insert(u.get<std::string>());
  return graph;
}

std::string parse_report_json(const Corpus& c, std::size_t screened) {
  json j;
  j["lines"] = c.parsed.lines;
  j["parsed_posts"] = c.parsed.posts.size();
  j["rejected_lines"] = c.parsed.lines >= c.parsed.posts.size()
                            ? c.parsed.lines - c.parsed.posts.size()
                            : 0;
  j["geocoded_posts"] = c.geocoded;
  j["authors"] = c.authors.size();
  j["selected_users"] = screened;
  j["issues"] = json::array();
  for (const auto& issue : c.parsed.issues)
    j["issues"].push_back({{"line", issue.line}, {"message", issue.message}});
  return j.dump(2) + "\n";
}

std::string labels_csv(const std::vector<LabeledPost>& labeled) {
  io::CsvWriter w;
  w.header({"post_id", "user_id", "actional", "informational", "sentiment",
            "topic_likelihood"});
  for (const auto& lp : labeled) {
    w.field(lp.post_id);
    w.field(lp.user_id);
    w.field(static_cast<std::int64_t>(lp.label.actional ? 1 : 0));
    w.field(static_cast<std::int64_t>(lp.label.informational ? 1 : 0));
    w.field(content::to_string(lp.label.sentiment));
    w.field(lp.label.topic_likelihood);
    w.end_row();
  }
  return w.str();
}

std::vector<LabeledPost> labels_from_csv(const std::string& text) {
  std::vector<LabeledPost> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;
    }
    auto fields = io::parse_csv_line(line);
    if (fields.size() != 6)
      throw validation_error("bad labels.csv line " + std::to_string(line_no) +
                             ": expected 6 fields");
    LabeledPost lp;
    lp.post_id = fields[0];
    lp.user_id = fields[1];
    lp.label.actional = fields[2] == "1";
    lp.label.informational = fields[3] == "1";
    lp.label.sentiment = content::sentiment_class_from_string(fields[4]);
    lp.label.topic_likelihood = parse_real(fields[5], "topic_likelihood");
    out.push_back(std::move(lp));
  }
  return out;
}

// ---- run_pipeline internals ----------------------------------------------

struct RegressionArtifacts {
  std::string json_text;
  std::string txt_text;
  std::size_t n = 0;
};

RegressionArtifacts regress_rows(const std::vector<stats::UserFeatures>& rows,
                                 double alpha, bool tolerate_small) {
  std::vector<double> y;
  std::vector<std::vector<double>> columns;
  stats::regression_design(rows, y, columns);
  try {
    auto result = stats::backward_select(y, columns,
                                         stats::regression_predictor_names(),
                                         alpha);
    return {stats::regression_json(result), stats::regression_text(result),
            rows.size()};
  } catch (const Error& e) {
    if (!tolerate_small || e.kind() != Error::Kind::validation) throw;
    json j;
    j["skipped"] = true;
    j["reason"] = e.what();
    j["n"] = rows.size();
    return {j.dump(2) + "\n",
            "regression skipped: " + std::string(e.what()) + "\n", 0};
  }
}

std::string manifest_json(const PipelineConfig& cfg, const Corpus& c,
                          std::size_t screened,
                          const std::map<std::string, std::string>& skipped,
                          std::size_t cohort, std::size_t feature_rows,
                          std::size_t regression_n) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = io::hex64(io::fnv1a64(cfg.raw_text));
  if (cfg.seed)
    j["seed"] = *cfg.seed;
  else
    j["seed"] = nullptr;
  j["risk_scheme"] = risk::scheme_token(cfg.scheme);
  j["units"] = cfg.units;

  json inputs = json::object();
  auto add_input = [&](const char* key, const std::filesystem::path& p) {
    if (p.empty()) return;
    inputs[key] = {{"path", p.string()},
                   {"fnv1a64", io::hex64(io::fnv1a64_file(p))}};
  };
  add_input("posts", cfg.posts);
  add_input("evac", cfg.evac);
  add_input("flood", cfg.flood);
  add_input("lexicon", cfg.lexicon);
  add_input("official_corpus", cfg.official_corpus);
  add_input("study_area", cfg.study_area);
  j["inputs"] = inputs;

  json counts;
  counts["lines"] = c.parsed.lines;
  counts["parsed_posts"] = c.parsed.posts.size();
  counts["rejected_lines"] = c.parsed.lines >= c.parsed.posts.size()
                                 ? c.parsed.lines - c.parsed.posts.size()
                                 : 0;
  counts["parse_issues"] = c.parsed.issues.size();
  counts["geocoded_posts"] = c.geocoded;
  counts["authors"] = c.authors.size();
  counts["screened_users"] = screened;
  counts["users_with_trajectory"] = cohort;
  counts["selected_users"] = cohort;
  counts["feature_rows"] = feature_rows;
  counts["regression_n"] = regression_n;
  j["counts"] = counts;

  json skips = json::array();
  for (const auto& [user, reason] : skipped)
    skips.push_back({{"user", user}, {"reason", reason}});
  j["trajectory_skipped"] = skips;
  return j.dump(2) + "\n";
}

Written commit_bundle(io::OutputBundle& bundle) {
  Written written;
  for (const auto& name : bundle.names()) written.push_back(bundle.dir() / name);
  bundle.commit();
  return written;
}

}  // namespace

PipelineConfig parse_config(const std::string& text,
                            const std::filesystem::path& config_path) {
  PipelineConfig cfg;
  cfg.raw_text = text;
  cfg.config_path = config_path;
  std::filesystem::path base =
      config_path.empty() ? std::filesystem::path() : config_path.parent_path();

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw validation_error("config line " + std::to_string(line_no) +
                             " is not key = value: \"" + stripped + "\"");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw validation_error("config line " + std::to_string(line_no) +
                             " has an empty key");
    if (value.empty())
      throw validation_error("config key \"" + key + "\" has an empty value");
    if (!seen.insert(key).second)
      throw validation_error("config key \"" + key + "\" appears twice");

    if (key == "posts") {
      cfg.posts = resolve(base, value);
    } else if (key == "evac") {
      cfg.evac = resolve(base, value);
    } else if (key == "flood") {
      cfg.flood = resolve(base, value);
    } else if (key == "lexicon") {
      cfg.lexicon = resolve(base, value);
    } else if (key == "official_corpus") {
      cfg.official_corpus = resolve(base, value);
    } else if (key == "study_area") {
      cfg.study_area = resolve(base, value);
    } else if (key == "out_dir") {
      cfg.out_dir = resolve(base, value);
    } else if (key == "risk_scheme") {
      cfg.scheme = risk::parse_scheme(value);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, key);
    } else if (key == "keywords") {
      cfg.selection.keywords = split_list(value, key);
    } else if (key == "min_distinct_locations") {
      cfg.selection.min_distinct_locations =
          static_cast<int>(parse_u64(value, key));
    } else if (key == "window_start") {
      cfg.selection.window_start = timeutil::parse_rfc3339(value);
    } else if (key == "window_end") {
      cfg.selection.window_end = timeutil::parse_rfc3339(value);
    } else if (key == "event_tags") {
      auto tags = split_list(value, key);
      cfg.content.event_tags = {tags.begin(), tags.end()};
    } else if (key == "strong_verbs") {
      cfg.content.strong_verbs = content::default_strong_verbs();
      for (const auto& v : split_list(value, key))
        cfg.content.strong_verbs.insert(v);
    } else if (key == "sentiment_threshold") {
      cfg.content.sentiment_threshold = parse_real(value, key);
    } else if (key == "topic_threshold") {
      cfg.content.topic_threshold = parse_real(value, key);
    } else if (key == "alpha") {
      cfg.alpha = parse_real(value, key);
    } else if (key == "peer_aggregation") {
      if (value == "ratio_mean")
        cfg.aggregation = stats::PeerAggregation::ratio_mean;
      else if (value == "pooled")
        cfg.aggregation = stats::PeerAggregation::pooled;
      else
        throw validation_error(
            "config key \"peer_aggregation\" must be ratio_mean or pooled, "
            "got \"" +
            value + "\"");
    } else if (key == "units") {
      if (value != "miles-mph")
        throw validation_error("unsupported units \"" + value +
                               "\": only miles-mph");
      cfg.units = value;
    } else {
      throw validation_error("unknown config key \"" + key + "\"");
    }
  }

  if (cfg.posts.empty())
    throw validation_error("config is missing required key \"posts\"");
  if (cfg.evac.empty())
    throw validation_error("config is missing required key \"evac\"");
  if (cfg.out_dir.empty())
    throw validation_error("config is missing required key \"out_dir\"");
  if (cfg.selection.window_start && cfg.selection.window_end &&
      *cfg.selection.window_start > *cfg.selection.window_end)
    throw validation_error("window_start is after window_end");
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path), path);
}

Written run_ingest_stage(const PipelineConfig& cfg) {
  Corpus c = load_corpus(cfg);
  auto screened = ingest::select_users(c.parsed.posts, selection_for(cfg));
  auto graph = ingest::build_peer_graph(c.parsed.posts, screened);

  io::OutputBundle bundle(cfg.out_dir);
  bundle.write(kParseReport, parse_report_json(c, screened.size()));
  bundle.write(kSelectedUsers, users_txt(screened));
  bundle.write(kPeerGraph, graph_json(graph));
  return commit_bundle(bundle);
}

Written run_vectors_stage(const PipelineConfig& cfg) {
  auto users = read_selected(cfg);
  Corpus c = load_corpus(cfg);
  std::map<std::string, std::string> skipped;
  auto trajs = build_trajectories(c.parsed.posts, users, skipped);
  std::vector<vec::MeanVector> vectors;
  for (const auto& [user, traj] : trajs)
    vectors.push_back(vec::user_mean_vector(traj));

  io::OutputBundle bundle(cfg.out_dir);
  bundle.write(kVectors, vec::vectors_to_geojson(vectors));
  return commit_bundle(bundle);
}

Written run_risk_stage(const PipelineConfig& cfg) {
  auto users = read_selected(cfg);
  auto surface = risk::RiskSurface::load(cfg.evac, cfg.flood, cfg.scheme);
  Corpus c = load_corpus(cfg);
  std::map<std::string, std::string> skipped;
  auto trajs = build_trajectories(c.parsed.posts, users, skipped);
  std::vector<risk::RbqRecord> records;
  for (const auto& [user, traj] : trajs)
    records.push_back(risk::user_rbq(traj, vec::user_mean_vector(traj), surface));

  io::OutputBundle bundle(cfg.out_dir);
  bundle.write(kRbqCsv, risk::rbq_csv(records));
  bundle.write(kRbqSummary, risk::summary_json(risk::rbq_summary(records)));
  return commit_bundle(bundle);
}

Written run_classify_stage(const PipelineConfig& cfg) {
  Corpus c = load_corpus(cfg);
  auto lexicon = load_lexicon(cfg);
  auto model = load_topic_model(cfg);
  auto labeled = label_corpus(c.parsed.posts, model, lexicon, cfg.content);

  io::OutputBundle bundle(cfg.out_dir);
  bundle.write(kLabels, labels_csv(labeled));
  bundle.write(kTopicDump,
               model.fitted()
                   ? content::topic_model_dump(model)
                   : std::string("no topic model: official_corpus not set\n"));
  return commit_bundle(bundle);
}

Written run_features_stage(const PipelineConfig& cfg) {
  read_selected(cfg);  // order the stages even though rbq.csv carries the users
  auto records = risk::rbq_from_csv(require_artifact(cfg, kRbqCsv, "risk"));
  auto labeled = labels_from_csv(require_artifact(cfg, kLabels, "classify"));
  auto graph = graph_from_json(require_artifact(cfg, kPeerGraph, "ingest"));

  std::set<std::string> cohort;
  for (const auto& r : records) cohort.insert(r.user_id);
  auto table = stats::build_feature_table(cohort, records,
                                          labels_by_author(labeled), graph,
                                          cfg.aggregation);

  io::OutputBundle bundle(cfg.out_dir);
  bundle.write(kUsersCsv, stats::features_csv(table.rows));
  return commit_bundle(bundle);
}

Written run_regress_stage(const PipelineConfig& cfg) {
  auto rows =
      stats::features_from_csv(require_artifact(cfg, kUsersCsv, "features"));
  auto artifacts = regress_rows(rows, cfg.alpha, false);

  io::OutputBundle bundle(cfg.out_dir);
  bundle.write(kRegressionJson, artifacts.json_text);
  bundle.write(kRegressionTxt, artifacts.txt_text);
  return commit_bundle(bundle);
}

Written run_pipeline(const PipelineConfig& cfg) {
  try {
    Corpus c = load_corpus(cfg);
    auto surface = risk::RiskSurface::load(cfg.evac, cfg.flood, cfg.scheme);
    auto lexicon = load_lexicon(cfg);
    auto model = load_topic_model(cfg);

    auto screened = ingest::select_users(c.parsed.posts, selection_for(cfg));
    auto graph = ingest::build_peer_graph(c.parsed.posts, screened);
    std::map<std::string, std::string> skipped;
    auto trajs = build_trajectories(c.parsed.posts, screened, skipped);
    if (trajs.empty())
      throw validation_error(
          "no users selected: nobody passed screening with usable movement");

    std::set<std::string> cohort;
    std::vector<vec::MeanVector> vectors;
    std::vector<risk::RbqRecord> records;
    for (const auto& [user, traj] : trajs) {
      cohort.insert(user);
      vectors.push_back(vec::user_mean_vector(traj));
      records.push_back(risk::user_rbq(traj, vectors.back(), surface));
    }
    auto group = vec::group_mean_vector(vectors);

    auto labeled = label_corpus(c.parsed.posts, model, lexicon, cfg.content);
    auto table = stats::build_feature_table(cohort, records,
                                            labels_by_author(labeled), graph,
                                            cfg.aggregation);
    if (table.rows.size() != cohort.size()) {
      std::string who;
      for (const auto& [user, reason] : table.excluded)
        who += " " + user + " (" + reason + ")";
      throw runtime_error("internal: cohort user missing from feature table:" +
                          who);
    }

    auto regression = regress_rows(table.rows, cfg.alpha, true);

    io::OutputBundle bundle(cfg.out_dir);
    bundle.write(kUsersCsv, stats::features_csv(table.rows));
    bundle.write(kRbqSummary, risk::summary_json(risk::rbq_summary(records)));
    bundle.write(kVectors, vec::vectors_to_geojson(vectors));
    bundle.write(kGroupVector, vec::group_to_geojson(group));
    bundle.write(kRegressionJson, regression.json_text);
    bundle.write(kRegressionTxt, regression.txt_text);
    bundle.write(kManifest,
                 manifest_json(cfg, c, screened.size(), skipped, cohort.size(),
                               table.rows.size(), regression.n));
    return commit_bundle(bundle);
  } catch (const std::exception& e) {
    json report;
    report["error"] = e.what();
    const auto* err = dynamic_cast<const Error*>(&e);
    report["kind"] = err && err->kind() == Error::Kind::validation
                         ? "validation"
                         : "runtime";
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (!ec) io::write_file(cfg.out_dir / kErrorReport, report.dump(2) + "\n");
    throw;
  }
}

}  // namespace riskvec::pipeline

