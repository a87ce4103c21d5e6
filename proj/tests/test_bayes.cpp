#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "gebayes/bayes.hpp"
#include "gebayes/densities.hpp"
#include "gebayes/likelihoods.hpp"

using namespace gebayes;

namespace {

PriorSpec normal_prior(std::size_t n, double sd) {
  PriorSpec p;
  for (std::size_t i = 0; i < n; ++i)
    p.components.push_back({PriorComponent::Kind::Normal, 0.0, sd});
  return p;
}

SamplerConfig quick(std::uint64_t seed, long iters = 50000) {
  SamplerConfig cfg;
  cfg.n_chains = 1;
  cfg.n_iterations = iters;
  cfg.burn_in = iters / 5;
  cfg.thinning = 1;
  cfg.seed = seed;
  return cfg;
}

std::vector<double> pooled(const Trace& t, std::size_t param) {
  std::vector<double> out;
  for (const auto& chain : t.draws)
    for (const auto& draw : chain) out.push_back(draw[param]);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / v.size();
}

double sd(const std::vector<double>& v) {
  double m = mean(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

TEST_CASE("sampler is calibrated on a standard normal target") {
  Target t = [](const std::vector<double>& x) {
    return log_normal_pdf(x[0], 0.0, 1.0);
  };
  SamplerConfig cfg = quick(11);
  cfg.proposal_sd = {1.0};
  Trace tr = sample_mh(t, cfg, {0.0});
  auto xs = pooled(tr, 0);
  CHECK(mean(xs) == doctest::Approx(0.0).epsilon(1).scale(0.05));
  CHECK(sd(xs) > 0.95);
  CHECK(sd(xs) < 1.05);
}

TEST_CASE("stationary distribution of a 3-state target is correct") {
  // discrete target embedded as a step density over [0, 3)
  const double p[3] = {0.2, 0.3, 0.5};
  Target t = [&](const std::vector<double>& x) {
    if (x[0] < 0.0 || x[0] >= 3.0) return kNegInf;
    return std::log(p[static_cast<int>(x[0])]);
  };
  SamplerConfig cfg = quick(5, 1000000);
  cfg.burn_in = 10000;
  cfg.proposal_sd = {1.5};
  Trace tr = sample_mh(t, cfg, {1.2});
  double counts[3] = {0, 0, 0};
  auto xs = pooled(tr, 0);
  for (double x : xs) counts[static_cast<int>(x)] += 1.0;
  double tv = 0.0;
  for (int i = 0; i < 3; ++i)
    tv += std::abs(counts[i] / xs.size() - p[i]);
  CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("conjugate normal posterior matches the closed form") {
  // y ~ N(theta, 1), theta ~ N(0, 1), single datum y = 2
  // posterior: N(1, 1/2)
  const double y = 2.0;
  Target t = [&](const std::vector<double>& x) {
    return log_normal_pdf(y, x[0], 1.0) + log_normal_pdf(x[0], 0.0, 1.0);
  };
  SamplerConfig cfg = quick(21, 200000);
  cfg.proposal_sd = {0.8};
  Trace tr = sample_mh(t, cfg, {0.0});
  auto xs = pooled(tr, 0);
  CHECK(mean(xs) == doctest::Approx(1.0).epsilon(1).scale(0.03));
  CHECK(sd(xs) == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
}

TEST_CASE("log-scale sampling agrees with linear-scale on a positive target") {
  // sigma with a Gamma-flavored target: Exp(1) prior, fixed-data normal lik
  std::vector<double> data{1.2, -0.4, 0.8, 2.1, -1.5};
  Target t = [&](const std::vector<double>& x) {
    if (x[0] <= 0.0) return kNegInf;  // linear-scale chain can step below 0
    double lp = log_exponential_pdf(x[0], 1.0);
    for (double d : data) lp += log_normal_pdf(d, 0.0, x[0]);
    return lp;
  };
  SamplerConfig lin = quick(31, 400000);
  lin.proposal_sd = {0.3};
  Trace a = sample_mh(t, lin, {1.0});

  SamplerConfig logc = quick(32, 400000);
  logc.proposal_sd = {0.3};
  logc.log_scale = {true};
  Trace b = sample_mh(t, logc, {1.0});

  auto xa = pooled(a, 0), xb = pooled(b, 0);
  CHECK(mean(xa) == doctest::Approx(mean(xb)).epsilon(0.03));
  CHECK(sd(xa) == doctest::Approx(sd(xb)).epsilon(0.10));
  for (double v : xb) CHECK(v > 0.0);
}

TEST_CASE("optional adaptation freezes before retained draws and stays valid") {
  Target t = [](const std::vector<double>& x) {
    return log_normal_pdf(x[0], 0.0, 1.0);
  };
  SamplerConfig cfg = quick(41, 100000);
  cfg.proposal_sd = {20.0};  // deliberately terrible
  cfg.adapt = true;
  Trace tr = sample_mh(t, cfg, {0.0});
  auto xs = pooled(tr, 0);
  CHECK(mean(xs) == doctest::Approx(0.0).epsilon(1).scale(0.06));
  CHECK(sd(xs) == doctest::Approx(1.0).epsilon(0.06));
  CHECK(tr.acceptance_rate[0] > 0.05);
}

TEST_CASE("prior scale drives the default proposals") {
  PriorSpec p = normal_prior(2, 10.0);
  CHECK(p.scale(0) == doctest::Approx(10.0));
  p.components[1] = {PriorComponent::Kind::Exponential, 1.0, 0.0};
  CHECK(p.scale(1) == doctest::Approx(1.0));  // Exp(rate) sd = 1/rate
}

TEST_CASE("log prior sums components and respects support") {
  PriorSpec p;
  p.components.push_back({PriorComponent::Kind::Normal, 0.0, 10.0});
  p.components.push_back({PriorComponent::Kind::Exponential, 1.0, 0.0});
  double theta_ok[] = {0.0, 1.0};
  CHECK(log_prior(p, theta_ok) ==
        doctest::Approx(log_normal_pdf(0, 0, 10) + log_exponential_pdf(1, 1)));
  double theta_bad[] = {0.0, -1.0};
  CHECK(log_prior(p, theta_bad) == kNegInf);
}

TEST_CASE("map_estimate returns the single draw of a one-draw trace") {
  Trace t;
  t.param_names = {"a"};
  t.draws = {{{3.25}}};
  t.log_posterior = {{-1.0}};
  CHECK(map_estimate(t)[0] == 3.25);
}

TEST_CASE("identical seeds give identical traces") {
  Target tgt = [](const std::vector<double>& x) {
    return log_normal_pdf(x[0], 0.0, 1.0);
  };
  SamplerConfig cfg = quick(77, 20000);
  cfg.proposal_sd = {1.0};
  Trace a = sample_mh(tgt, cfg, {0.0});
  Trace b = sample_mh(tgt, cfg, {0.0});
  CHECK(a.draws == b.draws);
  CHECK(a.log_posterior == b.log_posterior);
}
