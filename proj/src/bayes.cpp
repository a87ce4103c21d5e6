#include "gebayes/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gebayes/densities.hpp"

namespace gebayes {

double PriorSpec::scale(std::size_t i) const {
  const auto& c = components.at(i);
  switch (c.kind) {
    case PriorComponent::Kind::Normal: return c.p2;
    case PriorComponent::Kind::Exponential: return 1.0 / c.p1;
    case PriorComponent::Kind::HalfCauchy: return c.p1;
  }
  throw Error("bad prior kind");
}

double log_prior(const PriorSpec& spec, std::span<const double> theta) {
  if (theta.size() != spec.components.size())
    throw DimensionMismatch("prior has " +
                            std::to_string(spec.components.size()) +
                            " components, theta has " +
                            std::to_string(theta.size()));
  double lp = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto& c = spec.components[i];
    switch (c.kind) {
      case PriorComponent::Kind::Normal:
        lp += log_normal_pdf(theta[i], c.p1, c.p2);
        break;
      case PriorComponent::Kind::Exponential:
        lp += log_exponential_pdf(theta[i], c.p1);
        break;
      case PriorComponent::Kind::HalfCauchy:
        lp += log_half_cauchy_pdf(theta[i], c.p1);
        break;
    }
    if (lp == kNegInf) return kNegInf;
  }
  return lp;
}

double log_rule_penalty(const RulePenaltySpec& spec,
                        std::span<const double> theta, const Model& model,
                        const Dataset& data,
                        std::span<const double> theta_star) {
  const RuleBase& rb = spec.rulebase;
  switch (rb.variant) {
    case PenaltyVariant::Proportion: {
      auto predict = model.grid_predictor(theta, data, spec.grid.column);
      double r = violation_proportion(rb, spec.grid, predict);
      return log_beta_pdf(r, rb.beta_a, rb.beta_b);
    }
    case PenaltyVariant::TotalDistance: {
      auto predict = model.grid_predictor(theta, data, spec.grid.column);
      double d = violation_distance(rb, spec.grid, predict);
      return std::log(rb.lambda) - rb.lambda * d;
    }
    case PenaltyVariant::Piecewise: {
      std::span<const double> ref =
          (spec.theta_mode == ThetaMode::EmpiricalBayes && !theta_star.empty())
              ? theta_star
              : theta;
      auto y_rule = rule_outputs(rb, data);
      auto pred = model.predict(ref, data);
      if (pred.size() != y_rule.size())
        throw UnsupportedVariantModelPair(
            "piecewise penalty needs one model prediction per data row");
      double lp = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i)
        lp += log_normal_pdf(y_rule[i] - pred[i], 0.0, rb.sigma_r);
      return lp;
    }
  }
  throw Error("bad penalty variant");
}

double log_posterior(const Model& model, const PriorSpec& prior,
                     const RulePenaltySpec* penalty,
                     std::span<const double> theta, const Dataset& data,
                     std::span<const double> theta_star) {
  double lp_prior = log_prior(prior, theta);
  if (lp_prior == kNegInf) return kNegInf;
  double lp = model.log_likelihood(theta, data) + lp_prior;
  if (penalty) lp += log_rule_penalty(*penalty, theta, model, data, theta_star);
  return lp;
}

namespace {

constexpr double kTargetAcceptance = 0.234;

std::uint64_t chain_seed(std::uint64_t seed, int chain) {
  // splitmix-style stream separation
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL *
                               (static_cast<std::uint64_t>(chain) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Trace sample_mh(const Target& target, const SamplerConfig& cfg,
                const std::vector<double>& init,
                const ReferenceCallback& on_reference) {
  const std::size_t dim = init.size();
  if (cfg.proposal_sd.size() != dim)
    throw DimensionMismatch("proposal_sd size does not match init");
  if (!cfg.log_scale.empty() && cfg.log_scale.size() != dim)
    throw DimensionMismatch("log_scale size does not match init");
  if (cfg.burn_in >= cfg.n_iterations)
    throw Error("burn_in must be below n_iterations");
  if (cfg.thinning < 1) throw Error("thinning must be >= 1");

  auto is_log = [&](std::size_t i) {
    return !cfg.log_scale.empty() && cfg.log_scale[i];
  };
  for (std::size_t i = 0; i < dim; ++i)
    if (is_log(i) && init[i] <= 0.0)
      throw InvalidInit("log-scale parameter " + std::to_string(i) +
                        " must start positive");

  double lp0 = target(init);
  if (std::isnan(lp0)) throw NonFiniteTarget("target(init) is NaN");
  if (lp0 == kNegInf) throw InvalidInit("target(init) is -inf");

  Trace trace;
  trace.draws.resize(static_cast<std::size_t>(cfg.n_chains));
  trace.log_posterior.resize(static_cast<std::size_t>(cfg.n_chains));
  trace.acceptance_rate.resize(static_cast<std::size_t>(cfg.n_chains));

  std::vector<double> best_theta = init;
  double best_lp = lp0;

  for (int chain = 0; chain < cfg.n_chains; ++chain) {
    std::mt19937_64 rng(chain_seed(cfg.seed, chain));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // z is the sampling-space state; theta the reported one
    std::vector<double> z(dim), theta = init;
    for (std::size_t i = 0; i < dim; ++i)
      z[i] = is_log(i) ? std::log(init[i]) : init[i];

    auto jacobian = [&](const std::vector<double>& zs) {
      double j = 0.0;
      for (std::size_t i = 0; i < dim; ++i)
        if (is_log(i)) j += zs[i];
      return j;
    };

    double lp_c = target(theta);               // constrained log posterior
    double lp_u = lp_c + jacobian(z);          // sampling-space density
    double scale = 1.0;
    long accepted = 0;
    long window_accepted = 0;
    const long adapt_window = 50;
    const long adapt_end = cfg.burn_in / 2;

    std::vector<double> prop_z(dim), prop_theta(dim);
    auto& chain_draws = trace.draws[static_cast<std::size_t>(chain)];
    auto& chain_lp = trace.log_posterior[static_cast<std::size_t>(chain)];

    for (long iter = 1; iter <= cfg.n_iterations; ++iter) {
      for (std::size_t i = 0; i < dim; ++i)
        prop_z[i] = z[i] + scale * cfg.proposal_sd[i] * gauss(rng);
      for (std::size_t i = 0; i < dim; ++i)
        prop_theta[i] = is_log(i) ? std::exp(prop_z[i]) : prop_z[i];

      double prop_lp_c = target(prop_theta);
      if (std::isnan(prop_lp_c))
        throw NonFiniteTarget("target returned NaN during sampling");
      double prop_lp_u = prop_lp_c + jacobian(prop_z);

      double u = unit(rng);
      if (std::log(u) < prop_lp_u - lp_u) {
        z = prop_z;
        theta = prop_theta;
        lp_c = prop_lp_c;
        lp_u = prop_lp_u;
        ++accepted;
        ++window_accepted;
        if (lp_c > best_lp) {
          best_lp = lp_c;
          best_theta = theta;
        }
      }

      if (cfg.adapt && iter <= adapt_end && iter % adapt_window == 0) {
        double rate = static_cast<double>(window_accepted) / adapt_window;
        scale *= std::exp(rate - kTargetAcceptance);
        window_accepted = 0;
      }

      if (on_reference && cfg.reference_update_interval > 0 &&
          iter % cfg.reference_update_interval == 0)
        on_reference(best_theta);

      if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.thinning == 0) {
        chain_draws.push_back(theta);
        chain_lp.push_back(lp_c);
      }
    }
    trace.acceptance_rate[static_cast<std::size_t>(chain)] =
        static_cast<double>(accepted) / static_cast<double>(cfg.n_iterations);
  }
  return trace;
}

std::vector<double> map_estimate(const Trace& trace) {
  const std::vector<double>* best = nullptr;
  double best_lp = kNegInf;
  for (std::size_t c = 0; c < trace.n_chains(); ++c)
    for (std::size_t d = 0; d < trace.draws[c].size(); ++d)
      if (best == nullptr || trace.log_posterior[c][d] > best_lp) {
        best_lp = trace.log_posterior[c][d];
        best = &trace.draws[c][d];
      }
  if (!best) throw EmptyTrace("trace has no retained draws");
  return *best;
}

}  // namespace gebayes
