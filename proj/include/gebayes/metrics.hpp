#pragma once

#include <map>
#include <string>
#include <vector>

#include "gebayes/bayes.hpp"

namespace gebayes {

double mse(const std::vector<double>& pred, const std::vector<double>& target);
double mae(const std::vector<double>& pred, const std::vector<double>& target);

// WAIC = -2 * (lppd - p_waic) from a draws-by-points log-likelihood
// matrix; p_waic uses the unbiased (n-1) sample variance over draws.
double waic(const std::vector<std::vector<double>>& pointwise_loglik);

struct ClassificationMetrics {
  double accuracy = 0.0;
  double sensitivity = 0.0;  // true-positive rate for class 1
};

ClassificationMetrics classification_metrics(const std::vector<double>& prob,
                                             const std::vector<double>& labels,
                                             double threshold = 0.5);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocResult {
  double auc = 0.0;
  std::vector<RocPoint> points;  // one per unique score, plus the endpoints
};

RocResult roc_auc(const std::vector<double>& prob,
                  const std::vector<double>& labels);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double map = 0.0;
};

// Pooled over all chains; MAP via map_estimate.
std::vector<ParameterSummary> posterior_summary(const Trace& trace);

struct MetricsReport {
  std::map<std::string, double> values;
  std::string trace_label;
  std::string dataset_label;
  bool truth_reference = false;  // metrics computed against noiseless truth
};

std::string render(const MetricsReport& report);

}  // namespace gebayes
