#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gebayes/dataset.hpp"
#include "gebayes/likelihoods.hpp"
#include "gebayes/rulebase.hpp"

namespace gebayes {

struct PriorComponent {
  enum class Kind { Normal, Exponential, HalfCauchy };
  Kind kind = Kind::Normal;
  double p1 = 0.0;  // Normal mean / Exponential rate / HalfCauchy scale
  double p2 = 1.0;  // Normal sd
};

struct PriorSpec {
  std::vector<PriorComponent> components;  // one per parameter

  // A rough scale per parameter; proposal defaults derive from it.
  double scale(std::size_t i) const;
};

double log_prior(const PriorSpec& spec, std::span<const double> theta);

// How the Gaussian (piecewise) penalty picks the parameters of the model
// prediction it compares the rule outputs against.
enum class ThetaMode { CurrentDraw, EmpiricalBayes };

struct RulePenaltySpec {
  RuleBase rulebase;
  RuleInputGrid grid;  // Proportion / TotalDistance variants
  ThetaMode theta_mode = ThetaMode::CurrentDraw;
};

// The p(R|theta) factor. For the Gaussian variant, `theta_star` (when
// non-empty) replaces `theta` in the model prediction — the empirical-
// Bayes reference point.
double log_rule_penalty(const RulePenaltySpec& spec,
                        std::span<const double> theta, const Model& model,
                        const Dataset& data,
                        std::span<const double> theta_star = {});

double log_posterior(const Model& model, const PriorSpec& prior,
                     const RulePenaltySpec* penalty,
                     std::span<const double> theta, const Dataset& data,
                     std::span<const double> theta_star = {});

struct SamplerConfig {
  int n_chains = 2;
  long n_iterations = 30000;
  long burn_in = 5000;
  int thinning = 25;
  std::vector<double> proposal_sd;  // per parameter, in sampling space
  std::vector<bool> log_scale;      // per parameter; empty = all linear
  bool adapt = false;  // Robbins-Monro toward 23.4% during the first half
                       // of burn-in, frozen afterwards
  std::uint64_t seed = 0;
  long reference_update_interval = 0;  // >0: report the running MAP
};

struct Trace {
  std::vector<std::string> param_names;
  // draws[chain][draw][param]
  std::vector<std::vector<std::vector<double>>> draws;
  std::vector<std::vector<double>> log_posterior;  // per chain, per draw
  std::vector<double> acceptance_rate;             // per chain

  std::size_t n_chains() const { return draws.size(); }
  std::size_t n_draws() const { return draws.empty() ? 0 : draws[0].size(); }
};

using Target = std::function<double(const std::vector<double>&)>;
// Invoked with the best draw seen so far, every reference_update_interval
// iterations; lets an empirical-Bayes penalty refresh its reference point.
using ReferenceCallback = std::function<void(const std::vector<double>&)>;

// Symmetric Gaussian random-walk MH. Parameters flagged log_scale are
// proposed on the log scale with the Jacobian folded into the acceptance
// ratio; recorded values and log_posterior stay in the original space.
Trace sample_mh(const Target& target, const SamplerConfig& cfg,
                const std::vector<double>& init,
                const ReferenceCallback& on_reference = {});

// The retained draw with the highest recorded log-posterior, chains pooled.
std::vector<double> map_estimate(const Trace& trace);

}  // namespace gebayes
