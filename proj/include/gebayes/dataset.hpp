#pragma once

#include <map>
#include <string>
#include <vector>

#include "gebayes/errors.hpp"

namespace gebayes {

struct ColumnStats {
  double mean = 0.0;
  double sd = 1.0;
};

// Column-oriented numeric table. All columns have equal length; no missing
// values. If a column was standardized, its original (mean, sd) is kept so
// values can be mapped back to original units.
class Dataset {
 public:
  Dataset() = default;

  std::size_t n_rows() const { return n_; }
  std::size_t n_cols() const { return names_.size(); }
  const std::vector<std::string>& column_names() const { return names_; }

  bool has_column(const std::string& name) const {
    return cols_.count(name) > 0;
  }

  const std::vector<double>& col(const std::string& name) const;

  void add_column(const std::string& name, std::vector<double> values);

  bool is_standardized(const std::string& name) const {
    return stats_.count(name) > 0;
  }
  const ColumnStats& stats(const std::string& name) const;
  void set_stats(const std::string& name, ColumnStats s) { stats_[name] = s; }

  // Map a value of `name` back to original units (identity when the column
  // was never standardized).
  double to_original(const std::string& name, double v) const;
  double to_standardized(const std::string& name, double v) const;

  Dataset select_rows(const std::vector<std::size_t>& rows) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::map<std::string, std::vector<double>> cols_;
  std::map<std::string, ColumnStats> stats_;
};

// Replaces each selected column by (x - mean)/sd using the population sd
// (divide by n) and records the transform.
Dataset standardize(const Dataset& data, const std::vector<std::string>& columns);

// Inverts standardize() on every standardized column.
Dataset destandardize(const Dataset& data);

// Applies the reference dataset's recorded (mean, sd) transforms to the
// matching columns of `data` (e.g. test data scaled by training stats).
Dataset standardize_like(const Dataset& data, const Dataset& reference);

// CSV with a header row; every cell numeric.
Dataset read_csv(const std::string& path);
Dataset parse_csv(const std::string& text);
void write_csv(const Dataset& data, const std::string& path);

}  // namespace gebayes
