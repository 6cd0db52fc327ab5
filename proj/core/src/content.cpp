#include "riskvec/content.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "riskvec/errors.hpp"
#include "riskvec/io.hpp"
#include "riskvec/rng.hpp"

namespace riskvec::content {

extern const char* kBundledLexiconTsv;

std::string to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::negative: return "negative";
    case SentimentClass::neutral: return "neutral";
    case SentimentClass::positive: return "positive";
    case SentimentClass::unclassified: return "unclassified";
  }
  return "unclassified";
}

SentimentClass sentiment_class_from_string(const std::string& s) {
  if (s == "negative") return SentimentClass::negative;
  if (s == "neutral") return SentimentClass::neutral;
  if (s == "positive") return SentimentClass::positive;
  if (s == "unclassified") return SentimentClass::unclassified;
  throw validation_error("unknown sentiment class \"" + s + "\"");
}

Lexicon Lexicon::parse(const std::string& tsv, const std::string& source) {
  Lexicon lex;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < tsv.size()) {
    std::size_t end = tsv.find('\n', start);
    if (end == std::string::npos) end = tsv.size();
    std::string line = tsv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw validation_error(source + " line " + std::to_string(line_no) +
                             ": expected token<TAB>valence");
    std::string token = line.substr(0, tab);
    std::transform(token.begin(), token.end(), token.begin(), [](char c) {
      return c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c;
    });
    std::string value = line.substr(tab + 1);
    char* endp = nullptr;
    double v = std::strtod(value.c_str(), &endp);
    if (endp == value.c_str() || *endp != '\0')
      throw validation_error(source + " line " + std::to_string(line_no) +
                             ": bad valence \"" + value + "\"");
    if (v < -2.0 || v > 2.0)
      throw validation_error(source + " line " + std::to_string(line_no) +
                             ": valence outside [-2, 2]");
    if (token.empty())
      throw validation_error(source + " line " + std::to_string(line_no) +
                             ": empty token");
    if (!lex.valence_.emplace(token, v).second)
      throw validation_error(source + " line " + std::to_string(line_no) +
                             ": duplicate token \"" + token + "\"");
  }
  if (lex.valence_.empty())
    throw validation_error(source + ": lexicon is empty");
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

Lexicon Lexicon::bundled() {
  return parse(kBundledLexiconTsv, "bundled lexicon");
}

double Lexicon::valence(const std::string& token) const {
  auto it = valence_.find(token);
  return it == valence_.end() ? 0.0 : it->second;
}

bool Lexicon::contains(const std::string& token) const {
  return valence_.count(token) != 0;
}

SentimentScores sentiment_scores(const std::vector<text::Token>& tokens,
                                 const Lexicon& lexicon) {
  SentimentScores s;
  if (tokens.empty()) {
    s.neutral = 1.0;
    return s;
  }
  double sum = 0.0;
  for (const auto& tok : tokens) sum += lexicon.valence(tok.value);
  double mean = sum / static_cast<double>(tokens.size());

  static const double centers[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  double weights[5];
  double total = 0.0;
  for (int i = 0; i < 5; ++i) {
    double w = 1.0 - std::abs(mean - centers[i]);
    weights[i] = w > 0.0 ? w : 0.0;
    total += weights[i];
  }
  // The kernel weights of an in-range mean already sum to 1; the division
  // guards the exact endpoints.
  s.very_negative = weights[0] / total;
  s.negative = weights[1] / total;
  s.neutral = weights[2] / total;
  s.positive = weights[3] / total;
  s.very_positive = weights[4] / total;
  return s;
}

SentimentClass sentiment_class(const SentimentScores& scores,
                               double threshold) {
  if (threshold <= 0.0 || threshold >= 1.0)
    throw validation_error("sentiment threshold must lie in (0, 1)");
  double neg = scores.very_negative + scores.negative;
  double pos = scores.positive + scores.very_positive;
  double neu = scores.neutral;
  // Deterministic preference order for sub-0.5 thresholds where more than
  // one class could clear the bar: strongest score wins, neutral on ties.
  SentimentClass best = SentimentClass::neutral;
  double best_score = neu;
  if (neg > best_score) {
    best = SentimentClass::negative;
    best_score = neg;
  }
  if (pos > best_score) {
    best = SentimentClass::positive;
    best_score = pos;
  }
  return best_score > threshold ? best : SentimentClass::unclassified;
}

const std::set<std::string>& default_strong_verbs() {
  static const std::set<std::string> forms = {
      "do",     "does",    "did",     "doing",   "done",
      "go",     "goes",    "went",    "going",   "gone",
      "say",    "says",    "said",    "saying",
      "watch",  "watches", "watched", "watching",
      "want",   "wants",   "wanted",  "wanting",
      "need",   "needs",   "needed",  "needing"};
  return forms;
}

bool classify_actional_verbs(const std::vector<text::Token>& tokens,
                             const std::set<std::string>& verb_forms) {
  for (const auto& tok : tokens)
    if (verb_forms.count(tok.value)) return true;
  return false;
}

const std::set<std::string>& default_event_tags() {
  static const std::set<std::string> tags = {"sandy", "storm", "hurricane"};
  return tags;
}

bool classify_informational(const std::vector<text::Token>& tokens,
                            SentimentClass sentiment,
                            const std::set<std::string>& event_tags) {
  if (sentiment != SentimentClass::neutral) return false;
  for (const auto& tok : tokens)
    if (tok.is_hashtag && event_tags.count(tok.value)) return true;
  return false;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void l2_normalize(std::vector<double>& a) {
  double n = norm(a);
  if (n > 0.0)
    for (auto& v : a) v /= n;
}

// IDF-weighted, L2-normalized term vector for one document.
std::vector<double> doc_vector(const std::vector<text::Token>& tokens,
                               const std::map<std::string, std::size_t>& vocab,
                               const std::vector<double>& idf) {
  std::vector<double> v(idf.size(), 0.0);
  for (const auto& tok : tokens) {
    auto it = vocab.find(tok.value);
    if (it != vocab.end()) v[it->second] += 1.0;
  }
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= idf[i];
  l2_normalize(v);
  return v;
}

}  // namespace

TopicModel fit_topics(const std::vector<std::vector<text::Token>>& documents,
                      std::size_t k, std::uint64_t seed) {
  if (k == 0) throw validation_error("fit_topics requires k >= 1");

  std::vector<const std::vector<text::Token>*> docs;
  for (const auto& d : documents)
    if (!d.empty()) docs.push_back(&d);
  if (docs.size() < k)
    throw validation_error(
        "topic corpus too small: " + std::to_string(docs.size()) +
        " non-empty documents for k=" + std::to_string(k));

  TopicModel model;
  model.k = k;

  // Vocabulary and document frequencies.
  std::map<std::string, std::size_t> df;
  for (const auto* d : docs) {
    std::set<std::string> uniq;
    for (const auto& tok : *d) uniq.insert(tok.value);
    for (const auto& t : uniq) ++df[t];
  }
  std::size_t col = 0;
  for (const auto& [token, count] : df) model.vocabulary[token] = col++;
  model.idf.resize(col);
  double n_docs = static_cast<double>(docs.size());
  for (const auto& [token, count] : df)
    model.idf[model.vocabulary[token]] =
        std::log((1.0 + n_docs) / (1.0 + static_cast<double>(count))) + 1.0;

  std::vector<std::vector<double>> vectors;
  vectors.reserve(docs.size());
  for (const auto* d : docs)
    vectors.push_back(doc_vector(*d, model.vocabulary, model.idf));

  // k-means++ seeding on cosine distance, deterministic under the seed.
  Rng rng = Rng::derive(seed, "topics");
  std::vector<std::vector<double>> centroids;
  std::vector<double> dist(vectors.size(), 1.0);
  centroids.push_back(vectors[rng.index(vectors.size())]);
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      double d = 1.0 - dot(vectors[i], centroids.back());
      if (d < 0.0) d = 0.0;
      dist[i] = std::min(dist[i], d);
      total += dist[i] * dist[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        acc += dist[i] * dist[i];
        if (acc > r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.index(vectors.size());
    }
    centroids.push_back(vectors[pick]);
  }

  std::vector<std::size_t> assignment(vectors.size(), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      std::size_t best = 0;
      double best_sim = -1.0;
      for (std::size_t c = 0; c < k; ++c) {
        double sim = dot(vectors[i], centroids[c]);
        if (sim > best_sim) {
          best_sim = sim;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<std::vector<double>> next(
        k, std::vector<double>(model.idf.size(), 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      ++counts[assignment[i]];
      for (std::size_t j = 0; j < vectors[i].size(); ++j)
        next[assignment[i]][j] += vectors[i][j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Reseed an empty cluster with the document farthest from its
        // centroid (lowest index on ties).
        std::size_t farthest = 0;
        double worst = 2.0;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
          double sim = dot(vectors[i], centroids[assignment[i]]);
          if (sim < worst) {
            worst = sim;
            farthest = i;
          }
        }
        next[c] = vectors[farthest];
        assignment[farthest] = c;
        changed = true;
      }
      l2_normalize(next[c]);
    }
    centroids = std::move(next);
  }

  model.topics_l2 = centroids;
  model.topics.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    model.topics[c] = centroids[c];
    double sum = 0.0;
    for (double v : model.topics[c]) sum += v;
    if (sum > 0.0)
      for (auto& v : model.topics[c]) v /= sum;
  }

  for (std::size_t a = 0; a < k && !model.degenerate; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (dot(model.topics_l2[a], model.topics_l2[b]) > 0.999) {
        model.degenerate = true;
        break;
      }
  return model;
}

double topic_likelihood(const TopicModel& model,
                        const std::vector<text::Token>& tokens) {
  if (!model.fitted())
    throw validation_error("topic_likelihood called on an unfitted model");
  if (tokens.empty()) return 0.0;
  std::vector<double> v = doc_vector(tokens, model.vocabulary, model.idf);
  double total = 0.0;
  for (const auto& topic : model.topics_l2) total += dot(v, topic);
  return total;
}

std::string topic_model_dump(const TopicModel& model, std::size_t top_terms) {
  if (!model.fitted())
    throw validation_error("topic_model_dump called on an unfitted model");
  std::vector<std::string> terms(model.vocabulary.size());
  for (const auto& [token, idx] : model.vocabulary) terms[idx] = token;

  std::ostringstream out;
  out << "topics: " << model.k << "\n";
  out << "vocabulary: " << model.vocabulary.size() << "\n";
  out << "degenerate: " << (model.degenerate ? "true" : "false") << "\n";
  for (std::size_t c = 0; c < model.k; ++c) {
    out << "\ntopic " << (c + 1) << "\n";
    std::vector<std::size_t> order(terms.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (model.topics[c][a] != model.topics[c][b])
                         return model.topics[c][a] > model.topics[c][b];
                       return terms[a] < terms[b];
                     });
    std::size_t shown = 0;
    for (std::size_t idx : order) {
      if (shown >= top_terms || model.topics[c][idx] <= 0.0) break;
      out << "  " << terms[idx] << " "
          << io::format_double(model.topics[c][idx]) << "\n";
      ++shown;
    }
  }
  return out.str();
}

ContentLabel label_post(const std::string& post_text, const TopicModel& model,
                        const Lexicon& lexicon, const ContentConfig& cfg) {
  auto tokens = text::tokenize(post_text);
  ContentLabel label;
  SentimentScores scores = sentiment_scores(tokens, lexicon);
  label.sentiment = sentiment_class(scores, cfg.sentiment_threshold);

  const std::set<std::string>& verbs =
      cfg.strong_verbs.empty() ? default_strong_verbs() : cfg.strong_verbs;
  bool by_verbs = classify_actional_verbs(tokens, verbs);
  label.informational =
      classify_informational(tokens, label.sentiment, cfg.event_tags);
  label.topic_likelihood =
      model.fitted() ? topic_likelihood(model, tokens) : 0.0;
  label.actional = by_verbs || label.informational ||
                   label.topic_likelihood > cfg.topic_threshold;
  return label;
}

ContentRatios user_content_ratios(const std::vector<ContentLabel>& labels) {
  if (labels.empty())
    throw validation_error("user_content_ratios requires at least one post");
  ContentRatios r;
  for (const auto& l : labels) {
    if (l.informational) r.informational += 1.0;
    if (l.actional) r.actional += 1.0;
    if (l.sentiment == SentimentClass::negative ||
        l.sentiment == SentimentClass::positive)
      r.emotional += 1.0;
  }
  double n = static_cast<double>(labels.size());
  r.informational /= n;
  r.actional /= n;
  r.emotional /= n;
  return r;
}

}  // namespace riskvec::content
