#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "riskvec/content.hpp"
#include "riskvec/ingest.hpp"
#include "riskvec/risk.hpp"

namespace riskvec::stats {

struct UserFeatures {
  std::string user_id;
  double rbq = 0.0;
  std::int64_t n_self_tweets = 0;
  double prop_self_informational = 0.0;
  double prop_self_actional = 0.0;
  double prop_self_emotional = 0.0;
  std::int64_t n_peers = 0;
  std::int64_t n_peer_tweets = 0;
  double prop_peer_informational = 0.0;
  double prop_peer_actional = 0.0;
  double prop_peer_emotional = 0.0;
  // True when the user has no peer with posts in the corpus; peer
  // proportions are zero-filled in that case.
  bool peer_missing = true;
};

// Average peers' per-user ratios, or pool all peer posts into one ratio.
enum class PeerAggregation { ratio_mean, pooled };

struct FeatureTable {
  std::vector<UserFeatures> rows;  // sorted by user_id
  // Users that passed selection but have no RBQ record (no usable
  // trajectory), with the reason.
  std::vector<std::pair<std::string, std::string>> excluded;
};

FeatureTable build_feature_table(
    const std::set<std::string>& users,
    const std::vector<risk::RbqRecord>& rbq_records,
    const std::map<std::string, std::vector<content::ContentLabel>>&
        labels_by_author,
    const ingest::PeerGraph& peer_graph,
    PeerAggregation aggregation = PeerAggregation::ratio_mean);

// CSV column order matches the UserFeatures fields, peer_missing last.
std::string features_csv(const std::vector<UserFeatures>& rows);
std::vector<UserFeatures> features_from_csv(const std::string& text);

// The predictor columns of the regression design, in CSV order.
std::vector<std::string> regression_predictor_names();
void regression_design(const std::vector<UserFeatures>& rows,
                       std::vector<double>& y,
                       std::vector<std::vector<double>>& columns);

struct RegressionModel {
  std::vector<std::string> names;  // predictors, intercept excluded
  double intercept = 0.0;
  double intercept_se = 0.0;
  double intercept_t = 0.0;
  double intercept_p = 1.0;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> t_values;
  std::vector<double> p_values;
  std::vector<double> std_betas;  // coefficient * sd_x / sd_y
  double r_squared = 0.0;
  std::size_t n = 0;
  // Zero-variance predictors removed before the fit.
  std::vector<std::string> dropped_constant;
};

// OLS via column-pivoted QR; the intercept is added internally, so X must
// not contain a constant column. Rank deficiency raises a collinearity
// error naming the dependent columns.
RegressionModel ols_fit(const std::vector<double>& y,
                        const std::vector<std::vector<double>>& columns,
                        const std::vector<std::string>& names);

struct EliminationStep {
  std::string dropped;
  double p_value = 0.0;
};

struct SelectionResult {
  RegressionModel full;
  RegressionModel final;
  std::vector<EliminationStep> trace;
  double alpha = 0.05;
};

// Drop the highest-p predictor at or above alpha, refit, repeat.
SelectionResult backward_select(const std::vector<double>& y,
                                const std::vector<std::vector<double>>& columns,
                                const std::vector<std::string>& names,
                                double alpha = 0.05);

std::string regression_json(const SelectionResult& result);
std::string regression_text(const SelectionResult& result);

}  // namespace riskvec::stats
