#include "gebayes/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace gebayes {

namespace {

constexpr std::uint32_t kCodonRange = 1u << 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double evaluate_cost(const CostFunction& f, const Expr& e,
                     const Dataset& data) {
  switch (f.kind) {
    case CostKind::Identity:
      if (e.kind != Expr::Kind::SumOver)
        throw TypeMismatch("Identity cost requires a sum() root");
      return eval_aggregate(e, data);
    case CostKind::RSS:
    case CostKind::DistanceSum: {
      const auto& target = data.col(f.target_column);
      auto pred = eval_rows(e, data);
      double rss = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i) {
        double d = target[i] - pred[i];
        rss += d * d;
      }
      return rss;
    }
    case CostKind::Misclassification: {
      const auto& target = data.col(f.target_column);
      auto pred = eval_rows(e, data);
      double miss = 0.0;
      for (std::size_t i = 0; i < pred.size(); ++i)
        if (std::lround(pred[i]) != std::lround(target[i])) miss += 1.0;
      return miss;
    }
  }
  throw Error("bad CostKind");
}

namespace {

struct Individual {
  Genome genome;
  ExprPtr expr;          // null when mapping failed
  double cost = kInf;
  std::uint64_t order = 0;  // discovery index; earlier wins ties
};

Individual assess(Genome genome, const Grammar& g, const CostFunction& f,
                  const Dataset& data, int max_wraps, std::uint64_t order) {
  Individual ind;
  ind.genome = std::move(genome);
  ind.order = order;
  try {
    ind.expr = map_genome(g, ind.genome, max_wraps);
    ind.cost = evaluate_cost(f, *ind.expr, data);
    if (std::isnan(ind.cost)) ind.cost = kInf;
  } catch (const MappingIncomplete&) {
  } catch (const TypeMismatch&) {
  } catch (const SyntaxError&) {
    // phenotype is not a valid expression; treat like an unmappable genome
  }
  return ind;
}

bool better(const Individual& a, const Individual& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.order < b.order;
}

}  // namespace

EvolutionResult evolve(const Grammar& g, const CostFunction& f,
                       const Dataset& data, const EvolutionConfig& cfg) {
  if (cfg.population_size < 2) throw Error("population_size must be >= 2");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::uint32_t> codon_dist(0, kCodonRange - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_genome = [&] {
    Genome genome;
    genome.codons.resize(static_cast<std::size_t>(cfg.genome_length));
    for (auto& c : genome.codons) c = codon_dist(rng);
    return genome;
  };

  const double mut = cfg.effective_mutation_chance();
  const int n_random = static_cast<int>(std::lround(
      cfg.random_individual_fraction * cfg.population_size));
  const int n_parents = (cfg.population_size + 1) / 2;

  std::uint64_t order = 0;
  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(cfg.population_size));
  for (int i = 0; i < cfg.population_size; ++i)
    pop.push_back(assess(random_genome(), g, f, data, cfg.max_wraps, order++));

  std::sort(pop.begin(), pop.end(), better);
  Individual best = pop.front();
  bool any_valid = best.expr != nullptr;

  EvolutionResult result;
  result.cost_history.reserve(static_cast<std::size_t>(cfg.iterations));
  result.cost_history.push_back(best.cost);

  for (int gen = 1; gen < cfg.iterations; ++gen) {
    std::vector<Individual> next;
    next.reserve(static_cast<std::size_t>(cfg.population_size));
    next.push_back(best);  // elite
    for (int i = 1; i < cfg.population_size; ++i) {
      if (i < 1 + n_random) {
        next.push_back(
            assess(random_genome(), g, f, data, cfg.max_wraps, order++));
        continue;
      }
      std::uniform_int_distribution<int> pick(0, n_parents - 1);
      Genome child = pop[static_cast<std::size_t>(pick(rng))].genome;
      for (auto& c : child.codons)
        if (unit(rng) < mut) c = codon_dist(rng);
      next.push_back(assess(std::move(child), g, f, data, cfg.max_wraps,
                            order++));
    }
    pop = std::move(next);
    std::sort(pop.begin(), pop.end(), better);
    if (better(pop.front(), best)) best = pop.front();
    any_valid |= best.expr != nullptr;
    result.cost_history.push_back(best.cost);
  }

  if (!any_valid)
    throw AllInvalid(
        "no genome mapped to a valid expression; check grammar and "
        "genome_length");

  result.best_genome = best.genome;
  result.best_expr = best.expr;
  result.best_cost = best.cost;
  return result;
}

}  // namespace gebayes
