#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "gebayes/densities.hpp"

using namespace gebayes;

namespace {

// Simpson quadrature of exp(log_pdf) over [lo, hi].
double integrate(const std::function<double(double)>& log_pdf, double lo,
                 double hi, int n = 20000) {
  double h = (hi - lo) / n;
  double s = std::exp(log_pdf(lo)) + std::exp(log_pdf(hi));
  for (int i = 1; i < n; ++i)
    s += std::exp(log_pdf(lo + i * h)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("normal log-pdf matches the closed form at 20 points") {
  const double mean = 0.3, sd = 2.5;
  for (int i = 0; i < 20; ++i) {
    double x = -6.0 + i * 0.63;
    double expected = -std::pow(x - mean, 2) / (2 * sd * sd) -
                      std::log(sd * std::sqrt(2 * std::numbers::pi));
    CHECK(log_normal_pdf(x, mean, sd) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(log_normal_pdf(0.0, 0.0, 10.0) ==
        doctest::Approx(-std::log(10.0 * std::sqrt(2 * std::numbers::pi)))
            .epsilon(1e-10));
}

TEST_CASE("exponential log-pdf matches the closed form and its support") {
  for (int i = 0; i < 20; ++i) {
    double x = 0.05 + i * 0.4;
    CHECK(log_exponential_pdf(x, 10.0) ==
          doctest::Approx(std::log(10.0) - 10.0 * x).epsilon(1e-10));
  }
  CHECK(log_exponential_pdf(-0.5, 1.0) == kNegInf);
  CHECK(log_exponential_pdf(0.0, 10.0) == doctest::Approx(std::log(10.0)));
}

TEST_CASE("half-Cauchy log-pdf matches the closed form") {
  const double gamma = 0.1;
  for (int i = 0; i < 20; ++i) {
    double x = 0.01 + i * 0.05;
    double expected =
        std::log(2.0 / (std::numbers::pi * gamma * (1.0 + (x / gamma) * (x / gamma))));
    CHECK(log_half_cauchy_pdf(x, gamma) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  // at x = gamma the density is 1/(gamma*pi)
  CHECK(log_half_cauchy_pdf(0.1, 0.1) ==
        doctest::Approx(std::log(1.0 / (0.1 * std::numbers::pi))).epsilon(1e-10));
  CHECK(log_half_cauchy_pdf(-1e-9, 0.1) == kNegInf);
}

TEST_CASE("beta log-pdf matches the closed form") {
  for (int i = 0; i < 20; ++i) {
    double x = 0.02 + i * 0.048;
    double expected = std::lgamma(103.0) - std::lgamma(2.0) - std::lgamma(101.0) +
                      std::log(x) + 100.0 * std::log1p(-x);
    CHECK(log_beta_pdf(x, 2.0, 101.0) == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(log_beta_pdf(0.0, 1.0, 100.0) == doctest::Approx(std::log(100.0)));
  CHECK(log_beta_pdf(1.5, 2.0, 2.0) == kNegInf);
}

TEST_CASE("Beta(1,1) is exactly zero everywhere, endpoints included") {
  for (double r : {0.0, 0.25, 0.5, 1.0})
    CHECK(log_beta_pdf(r, 1.0, 1.0) == 0.0);
}

TEST_CASE("densities integrate to one") {
  CHECK(integrate([](double x) { return log_normal_pdf(x, 0.3, 2.5); }, -30.0,
                  30.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate([](double x) { return log_exponential_pdf(x, 10.0); }, 0.0,
                  10.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate([](double x) { return log_beta_pdf(x, 1.0, 100.0); }, 0.0,
                  1.0) == doctest::Approx(1.0).epsilon(1e-6));
  // heavy tail: integrate [0,5] directly and the tail via u = 1/x, which
  // turns int_5^inf f(x) dx into the smooth int_0^{1/5} f(1/u)/u^2 du
  auto hc = [](double x) { return log_half_cauchy_pdf(x, 0.1); };
  auto hc_tail = [&](double u) {
    return u == 0.0 ? kNegInf : hc(1.0 / u) - 2.0 * std::log(u);
  };
  CHECK(integrate(hc, 0.0, 5.0, 400000) + integrate(hc_tail, 0.0, 0.2, 40000) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sigmoid is stable at extreme arguments") {
  CHECK(sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(sigmoid(800.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-800.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(sigmoid(-800.0)));
}
