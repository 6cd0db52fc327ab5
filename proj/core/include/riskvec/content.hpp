#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "riskvec/text.hpp"

namespace riskvec::content {

struct SentimentScores {
  double very_negative = 0.0;
  double negative = 0.0;
  double neutral = 0.0;
  double positive = 0.0;
  double very_positive = 0.0;
};

enum class SentimentClass { negative, neutral, positive, unclassified };

std::string to_string(SentimentClass c);
SentimentClass sentiment_class_from_string(const std::string& s);

// Token -> valence in [-2, +2]. Tokens absent from the lexicon score 0.
class Lexicon {
 public:
  static Lexicon bundled();
  static Lexicon load(const std::filesystem::path& path);
  // TSV, token<TAB>valence, '#' comment lines allowed.
  static Lexicon parse(const std::string& tsv, const std::string& source);

  double valence(const std::string& token) const;
  bool contains(const std::string& token) const;
  std::size_t size() const { return valence_.size(); }

 private:
  std::map<std::string, double> valence_;
};

// Mean token valence mapped onto the five bins {-2,-1,0,1,2} by a
// triangular kernel of half-width 1. Empty input is purely neutral.
SentimentScores sentiment_scores(const std::vector<text::Token>& tokens,
                                 const Lexicon& lexicon);

// Merge the five scores into NEG / neutral / POS; the unique merged class
// strictly above the threshold wins, otherwise unclassified.
SentimentClass sentiment_class(const SentimentScores& scores,
                               double threshold = 0.66);

// All inflected forms of the strong-verb lemmas do, go, say, watch, want,
// need.
const std::set<std::string>& default_strong_verbs();

bool classify_actional_verbs(const std::vector<text::Token>& tokens,
                             const std::set<std::string>& verb_forms);

const std::set<std::string>& default_event_tags();  // sandy, storm, hurricane

// Neutral sentiment + an event hashtag.
bool classify_informational(const std::vector<text::Token>& tokens,
                            SentimentClass sentiment,
                            const std::set<std::string>& event_tags);

struct TopicModel {
  std::size_t k = 0;
  std::map<std::string, std::size_t> vocabulary;  // token -> column
  std::vector<double> idf;                        // per column
  std::vector<std::vector<double>> topics;        // k rows, L1-normalized
  std::vector<std::vector<double>> topics_l2;     // same rows, L2-normalized
  bool degenerate = false;  // some topic pair nearly identical

  bool fitted() const { return k > 0; }
};

// TF-IDF k-means over the official-account documents (cosine distance,
// seeded k-means++ init, deterministic). Documents with no tokens are
// ignored; fewer than k usable documents is an error.
TopicModel fit_topics(const std::vector<std::vector<text::Token>>& documents,
                      std::size_t k, std::uint64_t seed);

// Sum over topics of cosine similarity between the tweet's IDF-weighted
// term vector and the topic vector. Range [0, k].
double topic_likelihood(const TopicModel& model,
                        const std::vector<text::Token>& tokens);

// Audit dump: per topic, the top weighted terms.
std::string topic_model_dump(const TopicModel& model,
                             std::size_t top_terms = 50);

struct ContentConfig {
  std::set<std::string> event_tags = {"sandy", "storm", "hurricane"};
  std::set<std::string> strong_verbs;  // empty = default table
  double sentiment_threshold = 0.66;
  double topic_threshold = 0.66;
};

struct ContentLabel {
  bool actional = false;
  bool informational = false;
  SentimentClass sentiment = SentimentClass::unclassified;
  double topic_likelihood = 0.0;
};

// model.fitted() == false disables the topic path.
ContentLabel label_post(const std::string& post_text, const TopicModel& model,
                        const Lexicon& lexicon, const ContentConfig& cfg);

struct ContentRatios {
  double informational = 0.0;
  double actional = 0.0;
  double emotional = 0.0;  // classified negative or positive
};

ContentRatios user_content_ratios(const std::vector<ContentLabel>& labels);

}  // namespace riskvec::content
