#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gebayes/metrics.hpp"

using namespace gebayes;

TEST_CASE("mse and mae basics") {
  CHECK(mse({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(mae({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(mse({4, -2}, {1, 1}) == doctest::Approx(9.0));
  CHECK(mae({4, -2}, {1, 1}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(mse({1.0}, {1.0, 2.0}), LengthMismatch);
}

TEST_CASE("mse and mae vanish together") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> a(10), b(10);
    for (int i = 0; i < 10; ++i) {
      a[i] = u(rng);
      b[i] = rep % 4 == 0 ? a[i] : u(rng);
    }
    CHECK(mse(a, b) >= 0.0);
    CHECK(mae(a, b) >= 0.0);
    CHECK((mse(a, b) == 0.0) == (mae(a, b) == 0.0));
  }
}

TEST_CASE("waic matches the two-draw hand computation") {
  // one point, draws with log-lik {log .5, log .25}
  double l1 = std::log(0.5), l2 = std::log(0.25);
  std::vector<std::vector<double>> ll{{l1}, {l2}};
  double lppd = std::log(0.375);  // log mean(.5, .25)
  double m = 0.5 * (l1 + l2);
  double p = (l1 - m) * (l1 - m) + (l2 - m) * (l2 - m);  // (n-1) variance, n=2
  CHECK(waic(ll) == doctest::Approx(-2.0 * (lppd - p)).epsilon(1e-12));
  CHECK_THROWS_AS(waic({{-1.0}}), SingleDraw);
}

TEST_CASE("adding a constant to all log-likelihoods shifts lppd only") {
  std::mt19937 rng(9);
  std::normal_distribution<double> n(-1.0, 0.5);
  std::vector<std::vector<double>> ll(6, std::vector<double>(4));
  for (auto& row : ll)
    for (auto& v : row) v = n(rng);

  auto shifted = ll;
  const double c = 0.37;
  for (auto& row : shifted)
    for (auto& v : row) v += c;

  // p_waic is translation invariant, lppd gains n_points * c
  CHECK(waic(shifted) ==
        doctest::Approx(waic(ll) - 2.0 * 4 * c).epsilon(1e-10));
}

TEST_CASE("classification metrics from a hand confusion matrix") {
  ClassificationMetrics m =
      classification_metrics({0.6, 0.4, 0.7}, {1, 1, 0});
  CHECK(m.accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(m.sensitivity == doctest::Approx(0.5));

  ClassificationMetrics perfect =
      classification_metrics({0.9, 0.1, 0.8}, {1, 0, 1});
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.sensitivity == 1.0);

  ClassificationMetrics blind =
      classification_metrics({0.0, 0.0}, {1, 1});
  CHECK(blind.sensitivity == 0.0);
}

TEST_CASE("auc on a small ranked instance") {
  RocResult r = roc_auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1});
  CHECK(r.auc == doctest::Approx(0.75));
  RocResult sep = roc_auc({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1});
  CHECK(sep.auc == 1.0);
}

TEST_CASE("auc equals the normalized Mann-Whitney statistic") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> coin(0, 1);
  // ties included: scores drawn from a small discrete set on some rounds
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> score, label;
    int n = 8 + rep % 23;
    bool discrete = rep % 3 == 0;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      double s = u(rng);
      if (discrete) s = std::round(s * 4.0) / 4.0;
      score.push_back(s);
      int l = coin(rng);
      ones += l;
      label.push_back(l);
    }
    if (ones == 0 || ones == n) {
      label[0] = 1 - label[0];
      ones = ones == 0 ? 1 : n - 1;
    }
    double ustat = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (label[i] != 1.0 || label[j] != 0.0) continue;
        if (score[i] > score[j]) ustat += 1.0;
        else if (score[i] == score[j]) ustat += 0.5;
      }
    double oracle = ustat / (double(ones) * double(n - ones));
    CHECK(roc_auc(score, label).auc == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("roc endpoints span the unit square") {
  RocResult r = roc_auc({0.2, 0.6, 0.4, 0.9, 0.5}, {0, 1, 0, 1, 1});
  REQUIRE(r.points.size() >= 2);
  CHECK(r.points.front().fpr == 0.0);
  CHECK(r.points.front().tpr == 0.0);
  CHECK(r.points.back().fpr == 1.0);
  CHECK(r.points.back().tpr == 1.0);
}

TEST_CASE("posterior summary reports a constant chain with zero sd") {
  Trace t;
  t.param_names = {"a"};
  t.draws = {{{2.0}, {2.0}, {2.0}}};
  t.log_posterior = {{-1.0, -1.0, -1.0}};
  auto s = posterior_summary(t);
  REQUIRE(s.size() == 1);
  CHECK(s[0].mean == 2.0);
  CHECK(s[0].sd == 0.0);
  CHECK(s[0].map == 2.0);
}
