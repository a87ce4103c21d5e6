#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gebayes/dataset.hpp"

namespace gebayes {

struct LinearDataConfig {
  int n_total = 500;
  double x_lo = 0.0, x_hi = 10.0;
  double intercept = 1.0, slope = 2.0;
  double noise_sd = 3.0;
  double train_lo = 4.0, train_hi = 5.0;
  std::uint64_t seed = 0;
};

struct LinearData {
  Dataset train;
  Dataset full;
};

// y = intercept + slope*x + N(0, noise_sd); the training set keeps the
// rows with x inside [train_lo, train_hi].
LinearData generate_linear(const LinearDataConfig& cfg);

struct AdvectionConfig {
  double amplitude = 0.001;   // forcing a*sin(x + phase)
  double phase = 3.14159265358979323846;
  int grid_points = 256;
  std::vector<double> snapshot_times{1.0, 2.0, 3.0};
  int samples_per_snapshot = 32;
  double noise_sd = 0.002;
  // initial condition u0(x) = ic_offset + ic_amplitude * sin(x)
  double ic_offset = 1.0;
  double ic_amplitude = 0.5;
  std::uint64_t seed = 0;
};

// Momentum transport u_t + u u_x = a*sin(x + phi) on periodic [0, 2*pi],
// first-order upwind in space, explicit Euler with a CFL-limited step.
// Output columns: x, u1..uk (noisy) and u1_true..uk_true.
Dataset solve_advection(const AdvectionConfig& cfg);

// CSV loader restricted to the declared schema (order-insensitive header).
Dataset load_table(const std::string& path,
                   const std::vector<std::string>& schema);

// Partition into (rows where predicate holds, the rest).
std::pair<Dataset, Dataset> split_by_predicate(
    const Dataset& data, const std::string& column,
    const std::function<bool(double)>& predicate);

// Adds `label_column`: 0 where value >= cutoff, 1 below.
Dataset label_classes(const Dataset& data, const std::string& column,
                      double cutoff, const std::string& label_column);

// Resamples minority-class rows with replacement until the classes match.
Dataset upsample_minority(const Dataset& train, const std::string& class_column,
                          std::uint64_t seed);

// q-th percentile (q in [0,1]) by linear interpolation on the sorted column.
double percentile(const std::vector<double>& values, double q);

}  // namespace gebayes
