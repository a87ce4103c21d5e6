#include "gebayes/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gebayes {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b || a == 0)
    throw LengthMismatch("vectors must be non-empty and equal length (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

double mse(const std::vector<double>& pred, const std::vector<double>& target) {
  check_lengths(pred.size(), target.size());
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

double mae(const std::vector<double>& pred, const std::vector<double>& target) {
  check_lengths(pred.size(), target.size());
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    s += std::abs(pred[i] - target[i]);
  return s / static_cast<double>(pred.size());
}

double waic(const std::vector<std::vector<double>>& pointwise_loglik) {
  const std::size_t n_draws = pointwise_loglik.size();
  if (n_draws < 2)
    throw SingleDraw("WAIC needs at least 2 posterior draws");
  const std::size_t n_points = pointwise_loglik[0].size();
  for (const auto& row : pointwise_loglik)
    if (row.size() != n_points)
      throw LengthMismatch("ragged log-likelihood matrix");

  double lppd = 0.0, p_waic = 0.0;
  for (std::size_t i = 0; i < n_points; ++i) {
    // log mean exp over draws, stabilized
    double mx = pointwise_loglik[0][i];
    for (std::size_t s = 1; s < n_draws; ++s)
      mx = std::max(mx, pointwise_loglik[s][i]);
    double sum_exp = 0.0, mean = 0.0;
    for (std::size_t s = 0; s < n_draws; ++s) {
      sum_exp += std::exp(pointwise_loglik[s][i] - mx);
      mean += pointwise_loglik[s][i];
    }
    lppd += mx + std::log(sum_exp / static_cast<double>(n_draws));
    mean /= static_cast<double>(n_draws);
    double var = 0.0;
    for (std::size_t s = 0; s < n_draws; ++s) {
      double d = pointwise_loglik[s][i] - mean;
      var += d * d;
    }
    p_waic += var / static_cast<double>(n_draws - 1);
  }
  return -2.0 * (lppd - p_waic);
}

ClassificationMetrics classification_metrics(const std::vector<double>& prob,
                                             const std::vector<double>& labels,
                                             double threshold) {
  check_lengths(prob.size(), labels.size());
  std::size_t correct = 0, tp = 0, positives = 0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    int pred = prob[i] >= threshold ? 1 : 0;
    int y = labels[i] > 0.5 ? 1 : 0;
    if (pred == y) ++correct;
    if (y == 1) {
      ++positives;
      if (pred == 1) ++tp;
    }
  }
  if (positives == 0)
    throw NoPositives("sensitivity undefined without positive labels");
  ClassificationMetrics m;
  m.accuracy = static_cast<double>(correct) / static_cast<double>(prob.size());
  m.sensitivity = static_cast<double>(tp) / static_cast<double>(positives);
  return m;
}

RocResult roc_auc(const std::vector<double>& prob,
                  const std::vector<double>& labels) {
  check_lengths(prob.size(), labels.size());
  std::size_t n_pos = 0, n_neg = 0;
  for (double y : labels) (y > 0.5 ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClass("ROC needs both classes present");

  // sweep thresholds downward over unique scores, ties grouped
  std::vector<std::size_t> order(prob.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return prob[a] > prob[b];
  });

  RocResult out;
  out.points.push_back({0.0, 0.0});
  double auc = 0.0;
  std::size_t tp = 0, fp = 0;
  double prev_fpr = 0.0, prev_tpr = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    double score = prob[order[i]];
    while (i < order.size() && prob[order[i]] == score) {
      if (labels[order[i]] > 0.5)
        ++tp;
      else
        ++fp;
      ++i;
    }
    double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
    double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    out.points.push_back({fpr, tpr});
    prev_fpr = fpr;
    prev_tpr = tpr;
  }
  out.auc = auc;
  return out;
}

std::vector<ParameterSummary> posterior_summary(const Trace& trace) {
  if (trace.n_chains() == 0 || trace.n_draws() == 0)
    throw EmptyTrace("no retained draws");
  auto map = map_estimate(trace);
  const std::size_t dim = map.size();
  std::vector<ParameterSummary> out(dim);
  std::size_t total = 0;
  for (const auto& chain : trace.draws) total += chain.size();
  for (std::size_t p = 0; p < dim; ++p) {
    double mean = 0.0;
    for (const auto& chain : trace.draws)
      for (const auto& draw : chain) mean += draw[p];
    mean /= static_cast<double>(total);
    double var = 0.0;
    for (const auto& chain : trace.draws)
      for (const auto& draw : chain) {
        double d = draw[p] - mean;
        var += d * d;
      }
    var = total > 1 ? var / static_cast<double>(total - 1) : 0.0;
    out[p].name =
        p < trace.param_names.size() ? trace.param_names[p] : "p" +
                                                              std::to_string(p);
    out[p].mean = mean;
    out[p].sd = std::sqrt(var);
    out[p].map = map[p];
  }
  return out;
}

std::string render(const MetricsReport& report) {
  std::ostringstream os;
  os.precision(10);
  os << "# trace: " << report.trace_label << "\n";
  os << "# dataset: " << report.dataset_label << "\n";
  os << "# reference: " << (report.truth_reference ? "truth" : "observed")
     << "\n";
  for (const auto& [name, value] : report.values)
    os << name << " " << value << "\n";
  return os.str();
}

}  // namespace gebayes
