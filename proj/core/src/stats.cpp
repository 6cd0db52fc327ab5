#include "riskvec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "riskvec/errors.hpp"
#include "riskvec/io.hpp"

namespace riskvec::stats {

namespace {

double parse_number(const std::string& field, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0')
    throw validation_error("bad numeric field in " + what + ": \"" + field +
                           "\"");
  return v;
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

FeatureTable build_feature_table(
    const std::set<std::string>& users,
    const std::vector<risk::RbqRecord>& rbq_records,
    const std::map<std::string, std::vector<content::ContentLabel>>&
        labels_by_author,
    const ingest::PeerGraph& peer_graph, PeerAggregation aggregation) {
  std::map<std::string, const risk::RbqRecord*> rbq_by_user;
  for (const auto& r : rbq_records) rbq_by_user[r.user_id] = &r;

  FeatureTable table;
  for (const auto& user : users) {
    auto rbq_it = rbq_by_user.find(user);
    if (rbq_it == rbq_by_user.end()) {
      table.excluded.push_back({user, "no RBQ record"});
      continue;
    }
    auto labels_it = labels_by_author.find(user);
    if (labels_it == labels_by_author.end() || labels_it->second.empty()) {
      table.excluded.push_back({user, "no labeled posts"});
      continue;
    }

    UserFeatures f;
    f.user_id = user;
    f.rbq = rbq_it->second->rbq;
    f.n_self_tweets = static_cast<std::int64_t>(labels_it->second.size());
    content::ContentRatios self =
        content::user_content_ratios(labels_it->second);
    f.prop_self_informational = self.informational;
    f.prop_self_actional = self.actional;
    f.prop_self_emotional = self.emotional;

    const auto& peers = peer_graph.peers_of(user);
    f.n_peers = static_cast<std::int64_t>(peers.size());

    // Aggregate over peers that actually have posts in the corpus.
    std::vector<content::ContentRatios> peer_ratios;
    std::int64_t peer_posts = 0;
    double pooled_info = 0.0, pooled_act = 0.0, pooled_emo = 0.0;
    for (const auto& peer : peers) {
      auto it = labels_by_author.find(peer);
      if (it == labels_by_author.end() || it->second.empty()) continue;
      peer_posts += static_cast<std::int64_t>(it->second.size());
      content::ContentRatios r = content::user_content_ratios(it->second);
      peer_ratios.push_back(r);
      double n = static_cast<double>(it->second.size());
      pooled_info += r.informational * n;
      pooled_act += r.actional * n;
      pooled_emo += r.emotional * n;
    }
    f.n_peer_tweets = peer_posts;
    if (!peer_ratios.empty()) {
      f.peer_missing = false;
      if (aggregation == PeerAggregation::ratio_mean) {
        double n = static_cast<double>(peer_ratios.size());
        for (const auto& r : peer_ratios) {
          f.prop_peer_informational += r.informational / n;
          f.prop_peer_actional += r.actional / n;
          f.prop_peer_emotional += r.emotional / n;
        }
      } else {
        double n = static_cast<double>(peer_posts);
        f.prop_peer_informational = pooled_info / n;
        f.prop_peer_actional = pooled_act / n;
        f.prop_peer_emotional = pooled_emo / n;
      }
    }
    table.rows.push_back(std::move(f));
  }
  return table;
}

std::string features_csv(const std::vector<UserFeatures>& rows) {
  io::CsvWriter w;
  w.header({"user_id", "rbq", "n_self_tweets", "prop_self_informational",
            "prop_self_actional", "prop_self_emotional", "n_peers",
            "n_peer_tweets", "prop_peer_informational", "prop_peer_actional",
            "prop_peer_emotional", "peer_missing"});
  for (const auto& f : rows) {
    w.field(f.user_id);
    w.field(f.rbq);
    w.field(f.n_self_tweets);
    w.field(f.prop_self_informational);
    w.field(f.prop_self_actional);
    w.field(f.prop_self_emotional);
    w.field(f.n_peers);
    w.field(f.n_peer_tweets);
    w.field(f.prop_peer_informational);
    w.field(f.prop_peer_actional);
    w.field(f.prop_peer_emotional);
    w.field(static_cast<std::int64_t>(f.peer_missing ? 1 : 0));
    w.end_row();
  }
  return w.str();
}

std::vector<UserFeatures> features_from_csv(const std::string& text) {
  std::vector<UserFeatures> rows;
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
      if (fields.size() != 12 || fields[0] != "user_id")
        throw validation_error("unexpected feature CSV header");
      continue;
    }
    if (fields.size() != 12)
      throw validation_error("malformed feature CSV row: \"" +
                             std::string(line) + "\"");
    UserFeatures f;
    f.user_id = fields[0];
    f.rbq = parse_number(fields[1], "feature CSV");
    f.n_self_tweets = static_cast<std::int64_t>(
        parse_number(fields[2], "feature CSV"));
    f.prop_self_informational = parse_number(fields[3], "feature CSV");
    f.prop_self_actional = parse_number(fields[4], "feature CSV");
    f.prop_self_emotional = parse_number(fields[5], "feature CSV");
    f.n_peers = static_cast<std::int64_t>(
        parse_number(fields[6], "feature CSV"));
    f.n_peer_tweets = static_cast<std::int64_t>(
        parse_number(fields[7], "feature CSV"));
    f.prop_peer_informational = parse_number(fields[8], "feature CSV");
    f.prop_peer_actional = parse_number(fields[9], "feature CSV");
    f.prop_peer_emotional = parse_number(fields[10], "feature CSV");
    f.peer_missing = parse_number(fields[11], "feature CSV") != 0.0;
    rows.push_back(std::move(f));
  }
  return rows;
}

std::vector<std::string> regression_predictor_names() {
  return {"n_self_tweets",         "prop_self_informational",
          "prop_self_actional",    "prop_self_emotional",
          "n_peers",               "n_peer_tweets",
          "prop_peer_informational", "prop_peer_actional",
          "prop_peer_emotional",   "peer_missing"};
}

void regression_design(const std::vector<UserFeatures>& rows,
                       std::vector<double>& y,
                       std::vector<std::vector<double>>& columns) {
  y.clear();
  columns.assign(10, {});
  for (const auto& f : rows) {
    y.push_back(f.rbq);
    columns[0].push_back(static_cast<double>(f.n_self_tweets));
    columns[1].push_back(f.prop_self_informational);
    columns[2].push_back(f.prop_self_actional);
    columns[3].push_back(f.prop_self_emotional);
    columns[4].push_back(static_cast<double>(f.n_peers));
    columns[5].push_back(static_cast<double>(f.n_peer_tweets));
    columns[6].push_back(f.prop_peer_informational);
    columns[7].push_back(f.prop_peer_actional);
    columns[8].push_back(f.prop_peer_emotional);
    columns[9].push_back(f.peer_missing ? 1.0 : 0.0);
  }
}

RegressionModel ols_fit(const std::vector<double>& y,
                        const std::vector<std::vector<double>>& columns,
                        const std::vector<std::string>& names) {
  if (columns.size() != names.size())
    throw validation_error("ols_fit: one name per column required");
  std::size_t n = y.size();
  for (const auto& c : columns)
    if (c.size() != n)
      throw validation_error("ols_fit: column length mismatch");

  // Constant columns are collinear with the intercept; drop them up front
  // and report them, so an all-zero indicator never aborts a fit.
  RegressionModel model;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    bool constant = true;
    for (std::size_t i = 1; i < n && constant; ++i)
      constant = columns[j][i] == columns[j][0];
    if (constant)
      model.dropped_constant.push_back(names[j]);
    else
      keep.push_back(j);
  }

  std::size_t p = keep.size();
  if (n < p + 2)
    throw validation_error(
        "ols_fit: need more observations than predictors plus intercept (n=" +
        std::to_string(n) + ", predictors=" + std::to_string(p) + ")");

  Eigen::MatrixXd A(n, p + 1);
  Eigen::VectorXd yv(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    yv(i) = y[i];
  }
  for (std::size_t j = 0; j < p; ++j) {
    model.names.push_back(names[keep[j]]);
    for (std::size_t i = 0; i < n; ++i) A(i, j + 1) = columns[keep[j]][i];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < static_cast<Eigen::Index>(p + 1)) {
    auto perm = qr.colsPermutation().indices();
    std::vector<std::string> dependent;
    for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
      Eigen::Index col = perm(k);
      dependent.push_back(col == 0 ? "intercept" : model.names[col - 1]);
    }
    std::sort(dependent.begin(), dependent.end());
    std::string joined;
    for (const auto& d : dependent) {
      if (!joined.empty()) joined += ", ";
      joined += d;
    }
    throw validation_error("collinear design: columns {" + joined +
                           "} are linearly dependent on the others");
  }

  Eigen::VectorXd beta = qr.solve(yv);
  Eigen::VectorXd resid = yv - A * beta;
  double ssr = resid.squaredNorm();
  double ymean = yv.mean();
  double sst = (yv.array() - ymean).square().sum();

  model.n = n;
  model.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
  if (model.r_squared < 0.0) model.r_squared = 0.0;
  if (model.r_squared > 1.0) model.r_squared = 1.0;

  std::size_t df = n - (p + 1);
  double sigma2 = df > 0 ? ssr / static_cast<double>(df) : 0.0;

  // (A'A)^-1 = P R^-1 R^-T P' from the pivoted QR factor.
  Eigen::MatrixXd r_full =
      qr.matrixR()
          .topLeftCorner(static_cast<Eigen::Index>(p + 1),
                         static_cast<Eigen::Index>(p + 1))
          .triangularView<Eigen::Upper>();
  Eigen::MatrixXd rinv = r_full.inverse();
  Eigen::MatrixXd xtx_inv_perm = rinv * rinv.transpose();
  Eigen::MatrixXd perm_mat =
      qr.colsPermutation() * Eigen::MatrixXd::Identity(p + 1, p + 1);
  Eigen::MatrixXd xtx_inv = perm_mat * xtx_inv_perm * perm_mat.transpose();

  boost::math::students_t t_dist(df > 0 ? static_cast<double>(df) : 1.0);
  auto p_value = [&](double t) {
    if (!std::isfinite(t)) return 0.0;
    return 2.0 * boost::math::cdf(boost::math::complement(t_dist,
                                                          std::abs(t)));
  };
  auto t_of = [&](double coef, double se) {
    if (se > 0.0) return coef / se;
    return coef == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };

  double sd_y = sample_sd(y);
  model.intercept = beta(0);
  model.intercept_se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(0, 0)));
  model.intercept_t = t_of(model.intercept, model.intercept_se);
  model.intercept_p = df > 0 ? p_value(model.intercept_t) : 1.0;

  for (std::size_t j = 0; j < p; ++j) {
    double coef = beta(j + 1);
    double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j + 1, j + 1)));
    double t = t_of(coef, se);
    model.coefficients.push_back(coef);
    model.std_errors.push_back(se);
    model.t_values.push_back(t);
    model.p_values.push_back(df > 0 ? p_value(t) : 1.0);
    double sd_x = sample_sd(columns[keep[j]]);
    model.std_betas.push_back(sd_y > 0.0 ? coef * sd_x / sd_y : 0.0);
  }
  return model;
}

SelectionResult backward_select(
    const std::vector<double>& y,
    const std::vector<std::vector<double>>& columns,
    const std::vector<std::string>& names, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw validation_error("alpha must lie in (0, 1)");

  SelectionResult result;
  result.alpha = alpha;
  result.full = ols_fit(y, columns, names);

  std::vector<std::vector<double>> cur_cols;
  std::vector<std::string> cur_names;
  for (const auto& name : result.full.names) {
    auto it = std::find(names.begin(), names.end(), name);
    cur_cols.push_back(columns[it - names.begin()]);
    cur_names.push_back(name);
  }

  RegressionModel model = result.full;
  while (!model.names.empty()) {
    std::size_t worst = 0;
    for (std::size_t j = 1; j < model.p_values.size(); ++j)
      if (model.p_values[j] > model.p_values[worst]) worst = j;
    if (model.p_values[worst] < alpha) break;
    result.trace.push_back({model.names[worst], model.p_values[worst]});
    cur_cols.erase(cur_cols.begin() + worst);
    cur_names.erase(cur_names.begin() + worst);
    if (cur_names.empty()) {
      // Intercept-only model.
      model = RegressionModel{};
      model.n = y.size();
      double mean = 0.0;
      for (double v : y) mean += v;
      model.intercept = y.empty() ? 0.0 : mean / static_cast<double>(y.size());
      break;
    }
    model = ols_fit(y, cur_cols, cur_names);
  }
  result.final = model;
  return result;
}

namespace {

nlohmann::json model_json(const RegressionModel& m) {
  nlohmann::json j;
  j["n"] = m.n;
  j["r_squared"] = m.r_squared;
  j["intercept"] = {{"coefficient", m.intercept},
                    {"std_error", m.intercept_se},
                    {"t", m.intercept_t},
                    {"p", m.intercept_p}};
  j["predictors"] = nlohmann::json::array();
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    j["predictors"].push_back({{"name", m.names[i]},
                               {"coefficient", m.coefficients[i]},
                               {"std_beta", m.std_betas[i]},
                               {"std_error", m.std_errors[i]},
                               {"t", m.t_values[i]},
                               {"p", m.p_values[i]}});
  }
  j["dropped_constant"] = m.dropped_constant;
  return j;
}

void model_text(std::ostringstream& out, const std::string& title,
                const RegressionModel& m) {
  out << title << "\n";
  out << "  n = " << m.n << ", r_squared = " << io::format_double(m.r_squared)
      << "\n";
  if (!m.dropped_constant.empty()) {
    out << "  constant columns dropped:";
    for (const auto& d : m.dropped_constant) out << " " << d;
    out << "\n";
  }
  out << "  term                      coef            std_beta        p\n";
  auto row = [&](const std::string& name, double coef, double beta, double p) {
    std::string n = name;
    if (n.size() < 25) n.resize(25, ' ');
    std::string c = io::format_double(coef);
    if (c.size() < 15) c.resize(15, ' ');
    std::string b = io::format_double(beta);
    if (b.size() < 15) b.resize(15, ' ');
    out << "  " << n << " " << c << " " << b << " " << io::format_double(p)
        << "\n";
  };
  row("(intercept)", m.intercept, 0.0, m.intercept_p);
  for (std::size_t i = 0; i < m.names.size(); ++i)
    row(m.names[i], m.coefficients[i], m.std_betas[i], m.p_values[i]);
}

}  // namespace

std::string regression_json(const SelectionResult& result) {
  nlohmann::json j;
  j["alpha"] = result.alpha;
  j["full_model"] = model_json(result.full);
  j["final_model"] = model_json(result.final);
  j["elimination_trace"] = nlohmann::json::array();
  for (const auto& step : result.trace)
    j["elimination_trace"].push_back(
        {{"dropped", step.dropped}, {"p", step.p_value}});
  return j.dump(2) + "\n";
}

std::string regression_text(const SelectionResult& result) {
  std::ostringstream out;
  model_text(out, "full model", result.full);
  out << "\n";
  if (!result.trace.empty()) {
    out << "backward elimination (alpha = "
        << io::format_double(result.alpha) << "):\n";
    for (const auto& step : result.trace)
      out << "  dropped " << step.dropped << " (p = "
          << io::format_double(step.p_value) << ")\n";
    out << "\n";
  }
  model_text(out, "final model", result.final);
  return out.str();
}

}  // namespace riskvec::stats
