#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gebayes/dataset.hpp"
#include "gebayes/rulebase.hpp"

namespace gebayes {

// A likelihood model binds a parameter vector to data predictions. The
// grid predictor is what rule penalties evaluate: it sweeps one input
// column (in original units) with the remaining features held at their
// column means.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::size_t n_params() const = 0;
  virtual std::vector<std::string> param_names() const = 0;

  // Parameters with positive support are sampled on the log scale.
  virtual std::vector<bool> positive_support() const {
    return std::vector<bool>(n_params(), false);
  }

  virtual std::vector<double> predict(std::span<const double> theta,
                                      const Dataset& data) const = 0;
  virtual double log_likelihood(std::span<const double> theta,
                                const Dataset& data) const = 0;
  virtual std::vector<double> pointwise_log_likelihood(
      std::span<const double> theta, const Dataset& data) const = 0;

  virtual Predictor grid_predictor(std::span<const double> theta,
                                   const Dataset& data,
                                   const std::string& input_column) const = 0;

  virtual std::vector<double> default_init(const Dataset& data) const = 0;
};

// Gaussian linear regression; univariate when `features` has one entry.
// Parameters: one coefficient per feature, intercept, noise sd.
class LinearModel : public Model {
 public:
  LinearModel(std::vector<std::string> features, std::string target);

  std::size_t n_params() const override { return features_.size() + 2; }
  std::vector<std::string> param_names() const override;
  std::vector<bool> positive_support() const override;

  std::vector<double> predict(std::span<const double> theta,
                              const Dataset& data) const override;
  double log_likelihood(std::span<const double> theta,
                        const Dataset& data) const override;
  std::vector<double> pointwise_log_likelihood(
      std::span<const double> theta, const Dataset& data) const override;
  Predictor grid_predictor(std::span<const double> theta, const Dataset& data,
                           const std::string& input_column) const override;
  std::vector<double> default_init(const Dataset& data) const override;

  const std::vector<std::string>& features() const { return features_; }
  const std::string& target() const { return target_; }

 private:
  std::vector<std::string> features_;
  std::string target_;
};

// Bernoulli logistic regression. Parameters: coefficients, intercept.
class LogisticModel : public Model {
 public:
  LogisticModel(std::vector<std::string> features, std::string target);

  std::size_t n_params() const override { return features_.size() + 1; }
  std::vector<std::string> param_names() const override;

  std::vector<double> predict(std::span<const double> theta,
                              const Dataset& data) const override;
  double log_likelihood(std::span<const double> theta,
                        const Dataset& data) const override;
  std::vector<double> pointwise_log_likelihood(
      std::span<const double> theta, const Dataset& data) const override;
  Predictor grid_predictor(std::span<const double> theta, const Dataset& data,
                           const std::string& input_column) const override;
  std::vector<double> default_init(const Dataset& data) const override;

  const std::vector<std::string>& features() const { return features_; }
  const std::string& target() const { return target_; }

 private:
  std::vector<std::string> features_;
  std::string target_;
};

// Cox-de Boor basis matrix for a clamped knot vector (degree+1 repeats at
// each end). Rows sum to 1 on the interior.
std::vector<std::vector<double>> bspline_basis(const std::vector<double>& x,
                                               const std::vector<double>& knots,
                                               int degree = 3);

// Clamped knot vector over [lo, hi] with n_sites equally spaced sites.
std::vector<double> clamped_knots(double lo, double hi, int n_sites,
                                  int degree = 3);

// Cubic B-spline regression of several output snapshots over a shared x
// column, one independent coefficient set per snapshot. Coefficients use
// the increment form a_i = a0 + sigma_a * cumsum(delta); the likelihood sd
// is fixed. Parameters per snapshot: a0, sigma_a, delta_1..delta_nb.
class SplineModel : public Model {
 public:
  SplineModel(std::string x_column, std::vector<std::string> outputs,
              double domain_lo, double domain_hi, int n_knot_sites = 50,
              double likelihood_sd = 0.002);

  std::size_t n_basis() const { return n_basis_; }
  std::size_t n_params() const override {
    return outputs_.size() * (2 + n_basis_);
  }
  std::vector<std::string> param_names() const override;
  std::vector<bool> positive_support() const override;

  std::vector<double> predict(std::span<const double> theta,
                              const Dataset& data) const override;
  double log_likelihood(std::span<const double> theta,
                        const Dataset& data) const override;
  std::vector<double> pointwise_log_likelihood(
      std::span<const double> theta, const Dataset& data) const override;
  Predictor grid_predictor(std::span<const double> theta, const Dataset& data,
                           const std::string& input_column) const override;
  std::vector<double> default_init(const Dataset& data) const override;

  // Prediction of one output at an arbitrary x in the domain.
  double predict_at(std::span<const double> theta, std::size_t output_index,
                    double x) const;

  const std::vector<std::string>& outputs() const { return outputs_; }
  double likelihood_sd() const { return likelihood_sd_; }

 private:
  std::vector<double> coefficients(std::span<const double> theta,
                                   std::size_t output_index) const;
  const std::vector<std::vector<double>>& dataset_basis(
      const Dataset& data) const;
  const std::vector<double>& point_basis(double x) const;

  std::string x_column_;
  std::vector<std::string> outputs_;
  std::vector<double> knots_;
  std::size_t n_basis_;
  double likelihood_sd_;

  // basis rows are pure functions of x; cached because the sampler
  // re-evaluates the same data and grid points every iteration
  mutable std::map<const double*, std::vector<std::vector<double>>>
      basis_cache_;
  mutable std::map<double, std::vector<double>> point_cache_;
};

}  // namespace gebayes
