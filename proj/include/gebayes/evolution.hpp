#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gebayes/dataset.hpp"
#include "gebayes/expr.hpp"
#include "gebayes/grammar.hpp"

namespace gebayes {

struct EvolutionConfig {
  int population_size = 8;
  double random_individual_fraction = 0.25;
  // 10/(1+population_size) when unset
  std::optional<double> mutation_chance;
  int iterations = 10000;
  int genome_length = 64;
  int max_wraps = 3;
  std::uint64_t seed = 0;

  double effective_mutation_chance() const {
    return mutation_chance ? *mutation_chance
                           : 10.0 / (1.0 + population_size);
  }
};

enum class CostKind { Identity, RSS, DistanceSum, Misclassification };

struct CostFunction {
  CostKind kind = CostKind::Identity;
  std::string target_column;  // RSS / DistanceSum / Misclassification
};

struct EvolutionResult {
  Genome best_genome;
  ExprPtr best_expr;
  double best_cost = 0.0;
  std::vector<double> cost_history;  // best-so-far per generation
};

// Identity needs a sum() root; the others need row-valued roots and a
// bound target column. Unmappable or ill-typed phenotypes cost +inf.
double evaluate_cost(const CostFunction& f, const Expr& e,
                     const Dataset& data);

// (mu+lambda)-style truncation ES: the best individual survives, a fixed
// fraction of each generation is freshly sampled, the rest are mutated
// copies of the top half. Deterministic for a fixed seed.
EvolutionResult evolve(const Grammar& g, const CostFunction& f,
                       const Dataset& data, const EvolutionConfig& cfg);

}  // namespace gebayes
