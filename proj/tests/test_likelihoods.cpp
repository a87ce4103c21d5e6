#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gebayes/likelihoods.hpp"

using namespace gebayes;

namespace {

Dataset one_point(double x, double y) {
  Dataset d;
  d.add_column("x", {x});
  d.add_column("y", {y});
  return d;
}

}  // namespace

TEST_CASE("normal likelihood of a perfect single prediction") {
  LinearModel m({"x"}, "y");
  // theta: slope, intercept, sigma; prediction = 0*1 + 2 = 2 = y
  std::vector<double> theta{0.0, 2.0, 1.0};
  double ll = m.log_likelihood(theta, one_point(1.0, 2.0));
  CHECK(ll == doctest::Approx(-std::log(std::sqrt(2 * std::numbers::pi)))
                  .epsilon(1e-12));
}

TEST_CASE("pointwise log-likelihood sums to the total") {
  LinearModel m({"x"}, "y");
  Dataset d;
  d.add_column("x", {1.0, 2.0, 3.0});
  d.add_column("y", {2.9, 5.2, 7.1});
  std::vector<double> theta{2.0, 1.0, 0.7};
  auto pw = m.pointwise_log_likelihood(theta, d);
  double total = 0.0;
  for (double v : pw) total += v;
  CHECK(total == doctest::Approx(m.log_likelihood(theta, d)).epsilon(1e-12));
}

TEST_CASE("logistic likelihood is clamped near perfect classification") {
  LogisticModel m({"x"}, "y");
  Dataset d;
  d.add_column("x", {-100.0, 100.0});
  d.add_column("y", {0.0, 1.0});
  std::vector<double> theta{50.0, 0.0};  // almost-hard classifier
  double ll = m.log_likelihood(theta, d);
  CHECK(ll < 0.0);
  CHECK(ll > -1e-9);  // ~ -n * 1e-12, never -inf
}

TEST_CASE("raising a coefficient raises the probability at positive inputs") {
  LogisticModel m({"x"}, "y");
  Dataset d = one_point(2.0, 1.0);
  double prev = m.predict(std::vector<double>{0.0, 0.0}, d)[0];
  for (double c : {0.5, 1.0, 2.0}) {
    double p = m.predict(std::vector<double>{c, 0.0}, d)[0];
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("b-spline basis rows sum to one on the interior") {
  auto knots = clamped_knots(0.0, 2 * std::numbers::pi, 50);
  std::vector<double> xs;
  for (int i = 0; i <= 300; ++i) xs.push_back(2 * std::numbers::pi * i / 300.0);
  auto basis = bspline_basis(xs, knots);
  for (const auto& row : basis) {
    double s = 0.0;
    for (double v : row) s += v;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("degree-0 basis is the segment indicator") {
  std::vector<double> knots{0.0, 1.0, 2.0, 3.0};
  auto basis = bspline_basis({0.5, 1.5, 2.5}, knots, 0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < basis[i].size(); ++j)
      CHECK(basis[i][j] == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("spline predictions are continuous across knots") {
  SplineModel m("x", {"u1"}, 0.0, 2 * std::numbers::pi, 12);
  std::vector<double> theta(m.n_params(), 0.0);
  theta[0] = 0.3;   // a0
  theta[1] = 0.8;   // sigma_a
  for (std::size_t i = 2; i < theta.size(); ++i)
    theta[i] = std::sin(0.7 * double(i));
  double step = 1e-6;
  for (double x : {0.5, 1.7, 3.1, 5.9}) {
    double a = m.predict_at(theta, 0, x - step);
    double b = m.predict_at(theta, 0, x + step);
    CHECK(a == doctest::Approx(b).epsilon(1e-4));
  }
}

TEST_CASE("spline predictions only depend on sigma_a * delta") {
  SplineModel m("x", {"u1"}, 0.0, 2 * std::numbers::pi, 12);
  std::vector<double> theta(m.n_params(), 0.0);
  theta[0] = 0.1;
  theta[1] = 0.5;
  for (std::size_t i = 2; i < theta.size(); ++i)
    theta[i] = std::cos(double(i));
  std::vector<double> scaled = theta;
  const double c = 3.7;
  scaled[1] = theta[1] / c;
  for (std::size_t i = 2; i < theta.size(); ++i) scaled[i] = theta[i] * c;
  for (double x : {0.1, 2.2, 4.4, 6.1})
    CHECK(m.predict_at(theta, 0, x) ==
          doctest::Approx(m.predict_at(scaled, 0, x)).epsilon(1e-10));
}

TEST_CASE("worsening one spline coefficient strictly lowers the likelihood") {
  SplineModel m("x", {"u1"}, 0.0, 2 * std::numbers::pi, 12);
  Dataset d;
  std::vector<double> xs, us;
  for (int i = 0; i < 32; ++i) {
    double x = 2 * std::numbers::pi * i / 32.0;
    xs.push_back(x);
    us.push_back(1.0 + 0.5 * std::sin(x));
  }
  d.add_column("x", xs);
  d.add_column("u1", us);
  std::vector<double> theta = m.default_init(d);
  double base = m.log_likelihood(theta, d);
  CHECK(std::isfinite(base));
  std::vector<double> bumped = theta;
  bumped[3] += 10.0;
  CHECK(m.log_likelihood(bumped, d) < base);
}

TEST_CASE("finite differences confirm the residual structure") {
  // moving a prediction toward its observation increases the likelihood
  LinearModel m({"x"}, "y");
  Dataset d = one_point(1.0, 3.0);
  std::vector<double> lo{0.0, 2.0, 1.0}, hi{0.0, 2.5, 1.0};
  CHECK(m.log_likelihood(hi, d) > m.log_likelihood(lo, d));
}

TEST_CASE("grid predictor holds the other features at their means") {
  LinearModel m({"x", "z"}, "y");
  Dataset d;
  d.add_column("x", {0.0, 1.0, 2.0});
  d.add_column("z", {10.0, 20.0, 30.0});
  d.add_column("y", {0.0, 0.0, 0.0});
  // y = 1*x + 0.5*z + 2
  std::vector<double> theta{1.0, 0.5, 2.0, 1.0};
  auto p = m.grid_predictor(theta, d, "x");
  CHECK(p("y", 1.5) == doctest::Approx(1.5 + 0.5 * 20.0 + 2.0));
}
