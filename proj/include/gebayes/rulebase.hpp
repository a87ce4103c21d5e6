#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gebayes/dataset.hpp"
#include "gebayes/expr.hpp"

namespace gebayes {

// Predicate over a single input column. Thresholds are always kept in
// original (destandardized) units.
struct Antecedent {
  enum class Kind { Compare, Interval };
  Kind kind = Kind::Compare;
  std::string column;
  CmpOp op = CmpOp::Lt;  // Compare
  double threshold = 0.0;
  double lo = 0.0, hi = 0.0;  // Interval, closed

  bool holds(double x) const;
};

struct Consequent {
  enum class Kind { OutputCompare, OutputOrder, OutputFormula, ClassLabel };
  Kind kind = Kind::OutputCompare;
  std::string output;          // OutputCompare
  CmpOp op = CmpOp::Le;        // OutputCompare / OutputOrder
  double threshold = 0.0;      // OutputCompare, original units
  std::string col_a, col_b;    // OutputOrder: col_a op col_b
  ExprPtr formula;             // OutputFormula, model (working) space
  int label = 0;               // ClassLabel
};

struct Rule {
  Antecedent antecedent;
  Consequent consequent;
};

enum class PenaltyVariant { Proportion, TotalDistance, Piecewise };

struct RuleBase {
  std::vector<Rule> rules;  // connective is AND
  PenaltyVariant variant = PenaltyVariant::Proportion;
  double beta_a = 1.0, beta_b = 100.0;  // Proportion
  double lambda = 10.0;                 // TotalDistance
  double sigma_r = 0.1;                 // Piecewise
  int discretization_n = 100;
};

// n equally spaced rule-input points per antecedent segment, in original
// units; segment boundaries coincide with the antecedent thresholds.
struct RuleInputGrid {
  std::string column;
  std::vector<double> points;
};

RuleInputGrid make_grid(const RuleBase& rb, double n_min, double n_max,
                        int n_per_segment);

// Maps (output name, rule-input value in original units) to the model's
// predicted output under the current parameters.
using Predictor = std::function<double(std::string_view output, double x)>;

// Recognizes the evolved expression shapes and lifts them to IF-THEN rules
// with complementary antecedents. When `data` carries standardization
// records, comparison thresholds are mapped back to original units;
// formulas stay in the working space of the dataset.
RuleBase extract_rules(const Expr& e, PenaltyVariant variant,
                       const Dataset* data = nullptr);

// Fraction of grid points whose predicted output violates the consequent
// of the segment the point belongs to.
double violation_proportion(const RuleBase& rb, const RuleInputGrid& grid,
                            const Predictor& predict);

// Sum of |prediction - consequent boundary| over violating grid points.
double violation_distance(const RuleBase& rb, const RuleInputGrid& grid,
                          const Predictor& predict);

// Piecewise rule outputs y' per data row, routed by antecedent.
std::vector<double> rule_outputs(const RuleBase& rb, const Dataset& data);

std::string render(const RuleBase& rb);
RuleBase parse_rulebase(const std::string& text);

}  // namespace gebayes
