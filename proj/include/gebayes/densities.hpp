#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace gebayes {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double log_normal_pdf(double x, double mean, double sd) {
  double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) -
         0.5 * std::log(2.0 * std::numbers::pi);
}

inline double log_exponential_pdf(double x, double rate) {
  if (x < 0.0) return kNegInf;
  return std::log(rate) - rate * x;
}

// Half-Cauchy on [0, inf) with scale gamma: 2 / (pi * gamma * (1 + (x/g)^2)).
inline double log_half_cauchy_pdf(double x, double gamma) {
  if (x < 0.0) return kNegInf;
  double z = x / gamma;
  return std::log(2.0) - std::log(std::numbers::pi) - std::log(gamma) -
         std::log1p(z * z);
}

// Beta log-pdf on [0,1]. Exponents of exactly zero contribute exactly 0 so
// Beta(1,1) is identically zero even at the endpoints.
inline double log_beta_pdf(double x, double a, double b) {
  if (x < 0.0 || x > 1.0) return kNegInf;
  double lp = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  if (a != 1.0) lp += (a - 1.0) * std::log(x);
  if (b != 1.0) lp += (b - 1.0) * std::log1p(-x);
  return lp;
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace gebayes
