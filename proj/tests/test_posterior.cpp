#include <doctest.h>

#include <cmath>
#include <vector>

#include "gebayes/bayes.hpp"
#include "gebayes/data.hpp"
#include "gebayes/densities.hpp"
#include "gebayes/likelihoods.hpp"

using namespace gebayes;

namespace {

Dataset window_data(std::uint64_t seed) {
  LinearDataConfig cfg;
  cfg.seed = seed;
  return generate_linear(cfg).train;
}

RulePenaltySpec proportion_penalty(double beta_b) {
  RuleBase rb = extract_rules(*parse_expr("sum((x < 4.8) != (y <= 10.65))"),
                              PenaltyVariant::Proportion);
  rb.beta_a = 1.0;
  rb.beta_b = beta_b;
  RulePenaltySpec spec;
  spec.grid = make_grid(rb, 0.0, 10.0, 100);
  spec.rulebase = std::move(rb);
  return spec;
}

PriorSpec linear_prior() {
  PriorSpec p;
  p.components.push_back({PriorComponent::Kind::Normal, 0.0, 10.0});
  p.components.push_back({PriorComponent::Kind::Normal, 0.0, 10.0});
  p.components.push_back({PriorComponent::Kind::Exponential, 1.0, 0.0});
  return p;
}

}  // namespace

TEST_CASE("penalty magnitudes at the compliance boundary") {
  LinearModel m({"x"}, "y");
  Dataset d = window_data(1);

  // a line strictly above 10.65 at the 4.8 boundary and below it on the
  // lower segment complies: proportion 0, density value at 0
  std::vector<double> compliant{2.0, 1.1, 3.0};
  RulePenaltySpec strict = proportion_penalty(100.0);
  CHECK(log_rule_penalty(strict, compliant, m, d) ==
        doctest::Approx(std::log(100.0)).epsilon(1e-12));

  RulePenaltySpec uniform = proportion_penalty(1.0);
  std::vector<double> anything{-1.0, 20.0, 2.0};
  CHECK(log_rule_penalty(uniform, anything, m, d) == 0.0);

  // total distance: a compliant predictor scores log(lambda)
  RuleBase td = extract_rules(*parse_expr("sum((x < 4.8) != (y <= 10.65))"),
                              PenaltyVariant::TotalDistance);
  td.lambda = 10.0;
  RulePenaltySpec tds;
  tds.grid = make_grid(td, 0.0, 10.0, 100);
  tds.rulebase = std::move(td);
  CHECK(log_rule_penalty(tds, compliant, m, d) ==
        doctest::Approx(std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("posterior is likelihood plus prior plus penalty") {
  LinearModel m({"x"}, "y");
  Dataset d = window_data(2);
  PriorSpec prior = linear_prior();
  RulePenaltySpec pen = proportion_penalty(100.0);
  std::vector<double> theta{2.1, 0.7, 2.9};
  double expect = m.log_likelihood(theta, d) + log_prior(prior, theta) +
                  log_rule_penalty(pen, theta, m, d);
  CHECK(log_posterior(m, prior, &pen, theta, d) ==
        doctest::Approx(expect).epsilon(1e-12));
  double no_pen = m.log_likelihood(theta, d) + log_prior(prior, theta);
  CHECK(log_posterior(m, prior, nullptr, theta, d) ==
        doctest::Approx(no_pen).epsilon(1e-12));
}

TEST_CASE("Beta(1,1) penalty leaves the trace bitwise unchanged") {
  LinearModel m({"x"}, "y");
  Dataset d = window_data(3);
  PriorSpec prior = linear_prior();
  RulePenaltySpec uniform = proportion_penalty(1.0);

  SamplerConfig cfg;
  cfg.n_chains = 2;
  cfg.n_iterations = 4000;
  cfg.burn_in = 1000;
  cfg.thinning = 5;
  cfg.seed = 17;
  cfg.proposal_sd = {1.0, 1.0, 0.1};
  cfg.log_scale = {false, false, true};

  auto target_with = [&](const std::vector<double>& t) {
    return log_posterior(m, prior, &uniform, t, d);
  };
  auto target_without = [&](const std::vector<double>& t) {
    return log_posterior(m, prior, nullptr, t, d);
  };
  std::vector<double> init = m.default_init(d);
  Trace a = sample_mh(target_with, cfg, init);
  Trace b = sample_mh(target_without, cfg, init);
  CHECK(a.draws == b.draws);
  CHECK(a.log_posterior == b.log_posterior);
  CHECK(a.acceptance_rate == b.acceptance_rate);
}

TEST_CASE("stricter rules contract the slope posterior") {
  LinearModel m({"x"}, "y");
  PriorSpec prior = linear_prior();

  auto slope_sd = [&](Dataset& d, const RulePenaltySpec* pen,
                      std::uint64_t seed) {
    SamplerConfig cfg;
    cfg.n_chains = 1;
    cfg.n_iterations = 20000;
    cfg.burn_in = 4000;
    cfg.thinning = 5;
    cfg.seed = seed;
    cfg.proposal_sd = {1.0, 1.0, 0.1};
    cfg.log_scale = {false, false, true};
    Trace t = sample_mh(
        [&](const std::vector<double>& th) {
          return log_posterior(m, prior, pen, th, d);
        },
        cfg, m.default_init(d));
    double s = 0.0, s2 = 0.0, n = 0.0;
    for (const auto& chain : t.draws)
      for (const auto& draw : chain) {
        s += draw[0];
        s2 += draw[0] * draw[0];
        n += 1.0;
      }
    return std::sqrt((s2 - s * s / n) / (n - 1.0));
  };

  RulePenaltySpec strict = proportion_penalty(100.0);
  RulePenaltySpec loose = proportion_penalty(5.0);

  std::vector<double> s_none, s_loose, s_strict;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Dataset d = window_data(seed);
    s_none.push_back(slope_sd(d, nullptr, seed));
    s_loose.push_back(slope_sd(d, &loose, seed));
    s_strict.push_back(slope_sd(d, &strict, seed));
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(s_strict) <= median(s_loose));
  CHECK(median(s_loose) <= median(s_none));
}

TEST_CASE("piecewise penalty measures residuals against the rule outputs") {
  // rule: below 1.4 the output is the squared input
  auto e = parse_expr("ifelse(GTEP < 1.4, GTEP * GTEP, GTEP)");
  RuleBase rb = extract_rules(*e, PenaltyVariant::Piecewise);
  rb.sigma_r = 0.1;
  Dataset d;
  d.add_column("GTEP", {1.0});
  d.add_column("CO", {1.0});

  auto outs = rule_outputs(rb, d);
  REQUIRE(outs.size() == 1);
  CHECK(outs[0] == doctest::Approx(1.0));  // GTEP^2 at 1.0

  LinearModel m({"GTEP"}, "CO");
  RulePenaltySpec spec;
  spec.rulebase = rb;
  // theta predicting exactly the rule output: residual 0
  std::vector<double> theta{0.0, 1.0, 1.0};
  CHECK(log_rule_penalty(spec, theta, m, d) ==
        doctest::Approx(log_normal_pdf(0.0, 0.0, 0.1)).epsilon(1e-12));

  // empirical-Bayes reference point replaces theta in the prediction
  spec.theta_mode = ThetaMode::EmpiricalBayes;
  std::vector<double> far{0.0, 5.0, 1.0};
  CHECK(log_rule_penalty(spec, far, m, d, theta) ==
        doctest::Approx(log_normal_pdf(0.0, 0.0, 0.1)).epsilon(1e-12));
}
