#include "gebayes/likelihoods.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gebayes/densities.hpp"

namespace gebayes {

namespace {

constexpr double kProbClamp = 1e-12;

double column_mean(const Dataset& data, const std::string& name) {
  const auto& v = data.col(name);
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

void check_dims(std::span<const double> theta, std::size_t expected) {
  if (theta.size() != expected)
    throw DimensionMismatch("expected " + std::to_string(expected) +
                            " parameters, got " +
                            std::to_string(theta.size()));
}

}  // namespace

// ---------------------------------------------------------------- linear

LinearModel::LinearModel(std::vector<std::string> features, std::string target)
    : features_(std::move(features)), target_(std::move(target)) {}

std::vector<std::string> LinearModel::param_names() const {
  std::vector<std::string> names;
  for (const auto& f : features_) names.push_back(f + "_co");
  names.push_back("b");
  names.push_back("sigma");
  return names;
}

std::vector<bool> LinearModel::positive_support() const {
  std::vector<bool> pos(n_params(), false);
  pos.back() = true;  // noise sd
  return pos;
}

std::vector<double> LinearModel::predict(std::span<const double> theta,
                                         const Dataset& data) const {
  check_dims(theta, n_params());
  std::vector<double> out(data.n_rows(), theta[features_.size()]);
  for (std::size_t f = 0; f < features_.size(); ++f) {
    const auto& col = data.col(features_[f]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += theta[f] * col[i];
  }
  return out;
}

std::vector<double> LinearModel::pointwise_log_likelihood(
    std::span<const double> theta, const Dataset& data) const {
  check_dims(theta, n_params());
  double sigma = theta[n_params() - 1];
  auto pred = predict(theta, data);
  const auto& y = data.col(target_);
  std::vector<double> ll(pred.size(), kNegInf);
  if (sigma <= 0.0) return ll;
  for (std::size_t i = 0; i < pred.size(); ++i)
    ll[i] = log_normal_pdf(y[i], pred[i], sigma);
  return ll;
}

double LinearModel::log_likelihood(std::span<const double> theta,
                                   const Dataset& data) const {
  auto ll = pointwise_log_likelihood(theta, data);
  return std::accumulate(ll.begin(), ll.end(), 0.0);
}

Predictor LinearModel::grid_predictor(std::span<const double> theta,
                                      const Dataset& data,
                                      const std::string& input_column) const {
  check_dims(theta, n_params());
  // baseline: intercept plus every non-swept feature at its column mean
  double base = theta[features_.size()];
  std::size_t sweep = features_.size();
  for (std::size_t f = 0; f < features_.size(); ++f) {
    if (features_[f] == input_column)
      sweep = f;
    else
      base += theta[f] * column_mean(data, features_[f]);
  }
  if (sweep == features_.size())
    throw UnknownColumn("grid input is not a model feature: " + input_column);
  double coef = theta[sweep];
  std::string target = target_;
  std::string col = input_column;
  // grid x arrives in original units; the model works in dataset units
  ColumnStats cs{0.0, 1.0};
  if (data.is_standardized(col)) cs = data.stats(col);
  ColumnStats ts{0.0, 1.0};
  if (data.is_standardized(target)) ts = data.stats(target);
  return [=](std::string_view output, double x) {
    // an empty name selects the model's single output
    if (!output.empty() && output != target)
      throw UnknownColumn("linear model predicts only " + target);
    double z = (x - cs.mean) / cs.sd;
    return (base + coef * z) * ts.sd + ts.mean;
  };
}

std::vector<double> LinearModel::default_init(const Dataset& data) const {
  std::vector<double> theta(n_params(), 0.0);
  theta[features_.size()] = column_mean(data, target_);
  theta[n_params() - 1] = 1.0;
  return theta;
}

// -------------------------------------------------------------- logistic

LogisticModel::LogisticModel(std::vector<std::string> features,
                             std::string target)
    : features_(std::move(features)), target_(std::move(target)) {}

std::vector<std::string> LogisticModel::param_names() const {
  std::vector<std::string> names;
  for (const auto& f : features_) names.push_back(f + "_co");
  names.push_back("b");
  return names;
}

std::vector<double> LogisticModel::predict(std::span<const double> theta,
                                           const Dataset& data) const {
  check_dims(theta, n_params());
  std::vector<double> out(data.n_rows(), theta[features_.size()]);
  for (std::size_t f = 0; f < features_.size(); ++f) {
    const auto& col = data.col(features_[f]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += theta[f] * col[i];
  }
  for (auto& v : out) v = sigmoid(v);
  return out;
}

std::vector<double> LogisticModel::pointwise_log_likelihood(
    std::span<const double> theta, const Dataset& data) const {
  auto p = predict(theta, data);
  const auto& y = data.col(target_);
  std::vector<double> ll(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = std::clamp(p[i], kProbClamp, 1.0 - kProbClamp);
    ll[i] = y[i] > 0.5 ? std::log(pi) : std::log1p(-pi);
  }
  return ll;
}

double LogisticModel::log_likelihood(std::span<const double> theta,
                                     const Dataset& data) const {
  auto ll = pointwise_log_likelihood(theta, data);
  return std::accumulate(ll.begin(), ll.end(), 0.0);
}

Predictor LogisticModel::grid_predictor(std::span<const double> theta,
                                        const Dataset& data,
                                        const std::string& input_column) const {
  check_dims(theta, n_params());
  double base = theta[features_.size()];
  std::size_t sweep = features_.size();
  for (std::size_t f = 0; f < features_.size(); ++f) {
    if (features_[f] == input_column)
      sweep = f;
    else
      base += theta[f] * column_mean(data, features_[f]);
  }
  if (sweep == features_.size())
    throw UnknownColumn("grid input is not a model feature: " + input_column);
  double coef = theta[sweep];
  std::string target = target_;
  ColumnStats cs{0.0, 1.0};
  if (data.is_standardized(input_column)) cs = data.stats(input_column);
  return [=](std::string_view output, double x) {
    if (!output.empty() && output != target)
      throw UnknownColumn("logistic model predicts only " + target);
    double z = (x - cs.mean) / cs.sd;
    return sigmoid(base + coef * z);
  };
}

std::vector<double> LogisticModel::default_init(const Dataset& data) const {
  (void)data;
  return std::vector<double>(n_params(), 0.0);
}

// ---------------------------------------------------------------- spline

std::vector<double> clamped_knots(double lo, double hi, int n_sites,
                                  int degree) {
  if (n_sites < 2) throw Error("need at least 2 knot sites");
  std::vector<double> knots;
  for (int i = 0; i < degree; ++i) knots.push_back(lo);
  for (int i = 0; i < n_sites; ++i)
    knots.push_back(lo + (hi - lo) * i / static_cast<double>(n_sites - 1));
  for (int i = 0; i < degree; ++i) knots.push_back(hi);
  return knots;
}

std::vector<std::vector<double>> bspline_basis(const std::vector<double>& x,
                                               const std::vector<double>& knots,
                                               int degree) {
  const std::size_t m = knots.size();
  if (m < static_cast<std::size_t>(degree) + 2)
    throw Error("knot vector too short for degree");
  const std::size_t nb = m - static_cast<std::size_t>(degree) - 1;
  const double lo = knots.front(), hi = knots.back();

  std::vector<std::vector<double>> basis(x.size(),
                                         std::vector<double>(nb, 0.0));
  std::vector<double> n0(m - 1), n1(m - 1);
  for (std::size_t r = 0; r < x.size(); ++r) {
    double xv = x[r];
    if (xv < lo - 1e-12 || xv > hi + 1e-12)
      throw OutOfDomain("x outside the knot span");
    xv = std::clamp(xv, lo, hi);
    // degree 0: interval indicators, right endpoint folded into the last
    // non-empty interval
    for (std::size_t i = 0; i + 1 < m; ++i)
      n0[i] = (xv >= knots[i] && xv < knots[i + 1]) ? 1.0 : 0.0;
    if (xv == hi) {
      for (std::size_t i = m - 1; i-- > 0;)
        if (knots[i] < knots[i + 1]) {
          n0[i] = 1.0;
          break;
        }
    }
    for (int d = 1; d <= degree; ++d) {
      for (std::size_t i = 0; i + static_cast<std::size_t>(d) + 1 < m; ++i) {
        double left = 0.0, right = 0.0;
        double dl = knots[i + static_cast<std::size_t>(d)] - knots[i];
        double dr = knots[i + static_cast<std::size_t>(d) + 1] - knots[i + 1];
        if (dl > 0.0) left = (xv - knots[i]) / dl * n0[i];
        if (dr > 0.0)
          right = (knots[i + static_cast<std::size_t>(d) + 1] - xv) / dr *
                  n0[i + 1];
        n1[i] = left + right;
      }
      std::swap(n0, n1);
    }
    for (std::size_t i = 0; i < nb; ++i) basis[r][i] = n0[i];
  }
  return basis;
}

SplineModel::SplineModel(std::string x_column,
                         std::vector<std::string> outputs, double domain_lo,
                         double domain_hi, int n_knot_sites,
                         double likelihood_sd)
    : x_column_(std::move(x_column)),
      outputs_(std::move(outputs)),
      knots_(clamped_knots(domain_lo, domain_hi, n_knot_sites, 3)),
      n_basis_(knots_.size() - 4),
      likelihood_sd_(likelihood_sd) {}

std::vector<std::string> SplineModel::param_names() const {
  std::vector<std::string> names;
  for (const auto& out : outputs_) {
    names.push_back(out + "_a0");
    names.push_back(out + "_sigma_a");
    for (std::size_t j = 1; j <= n_basis_; ++j)
      names.push_back(out + "_delta" + std::to_string(j));
  }
  return names;
}

std::vector<bool> SplineModel::positive_support() const {
  std::vector<bool> pos(n_params(), false);
  const std::size_t block = 2 + n_basis_;
  for (std::size_t k = 0; k < outputs_.size(); ++k) pos[k * block + 1] = true;
  return pos;
}

std::vector<double> SplineModel::coefficients(std::span<const double> theta,
                                              std::size_t output_index) const {
  const std::size_t block = 2 + n_basis_;
  const double* p = theta.data() + output_index * block;
  double a0 = p[0], sigma_a = p[1];
  std::vector<double> a(n_basis_);
  double cum = 0.0;
  for (std::size_t j = 0; j < n_basis_; ++j) {
    cum += p[2 + j];
    a[j] = a0 + sigma_a * cum;
  }
  return a;
}

const std::vector<std::vector<double>>& SplineModel::dataset_basis(
    const Dataset& data) const {
  const auto& x = data.col(x_column_);
  auto it = basis_cache_.find(x.data());
  if (it == basis_cache_.end())
    it = basis_cache_.emplace(x.data(), bspline_basis(x, knots_, 3)).first;
  return it->second;
}

const std::vector<double>& SplineModel::point_basis(double x) const {
  auto it = point_cache_.find(x);
  if (it == point_cache_.end())
    it = point_cache_.emplace(x, bspline_basis({x}, knots_, 3)[0]).first;
  return it->second;
}

double SplineModel::predict_at(std::span<const double> theta,
                               std::size_t output_index, double x) const {
  const auto& basis = point_basis(x);
  auto a = coefficients(theta, output_index);
  double v = 0.0;
  for (std::size_t j = 0; j < n_basis_; ++j) v += basis[j] * a[j];
  return v;
}

std::vector<double> SplineModel::predict(std::span<const double> theta,
                                         const Dataset& data) const {
  check_dims(theta, n_params());
  const auto& basis = dataset_basis(data);
  std::vector<double> out;
  out.reserve(outputs_.size() * data.n_rows());
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    auto a = coefficients(theta, k);
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
      double v = 0.0;
      for (std::size_t j = 0; j < n_basis_; ++j) v += basis[r][j] * a[j];
      out.push_back(v);
    }
  }
  return out;
}

std::vector<double> SplineModel::pointwise_log_likelihood(
    std::span<const double> theta, const Dataset& data) const {
  auto pred = predict(theta, data);
  std::vector<double> ll(pred.size());
  std::size_t idx = 0;
  for (const auto& out : outputs_) {
    const auto& y = data.col(out);
    for (std::size_t r = 0; r < y.size(); ++r, ++idx)
      ll[idx] = log_normal_pdf(y[r], pred[idx], likelihood_sd_);
  }
  return ll;
}

double SplineModel::log_likelihood(std::span<const double> theta,
                                   const Dataset& data) const {
  auto ll = pointwise_log_likelihood(theta, data);
  return std::accumulate(ll.begin(), ll.end(), 0.0);
}

Predictor SplineModel::grid_predictor(std::span<const double> theta,
                                      const Dataset& data,
                                      const std::string& input_column) const {
  check_dims(theta, n_params());
  (void)data;
  if (input_column != x_column_)
    throw UnknownColumn("spline model sweeps only " + x_column_);
  std::vector<std::vector<double>> coefs;
  for (std::size_t k = 0; k < outputs_.size(); ++k)
    coefs.push_back(coefficients(theta, k));
  auto outputs = outputs_;
  auto nb = n_basis_;
  return [=, this](std::string_view output, double x) {
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      if (outputs[k] == output) {
        const auto& basis = point_basis(x);
        double v = 0.0;
        for (std::size_t j = 0; j < nb; ++j) v += basis[j] * coefs[k][j];
        return v;
      }
    }
    throw UnknownColumn("unknown spline output: " + std::string(output));
  };
}

std::vector<double> SplineModel::default_init(const Dataset& data) const {
  std::vector<double> theta(n_params(), 0.0);
  const std::size_t block = 2 + n_basis_;
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    theta[k * block] = column_mean(data, outputs_[k]);  // a0
    theta[k * block + 1] = 0.1;                         // sigma_a
  }
  return theta;
}

}  // namespace gebayes
