#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gebayes/evolution.hpp"

using namespace gebayes;

namespace {

Dataset toy() {
  Dataset d;
  d.add_column("x", {1.0, 2.0, 3.0, 4.0});
  d.add_column("y", {0.0, 1.0, 1.0, 1.0});
  return d;
}

}  // namespace

TEST_CASE("cost kinds match their definitions") {
  Dataset d = toy();
  SUBCASE("identity returns the aggregate") {
    auto e = parse_expr("sum((x < 2.5) != (y <= 0.5))");
    CostFunction f{CostKind::Identity, ""};
    // rows 2,3,4: x<2.5 differs from y<=0.5 at (2,1) only... hand count:
    // (1,0): true vs true -> agree; (2,1): true vs false -> 1;
    // (3,1): false vs false; (4,1): false vs false.
    CHECK(evaluate_cost(f, *e, d) == 1.0);
  }
  SUBCASE("perfect RSS fit is zero") {
    auto e = parse_expr("y + 0");
    CostFunction f{CostKind::RSS, "y"};
    CHECK(evaluate_cost(f, *e, d) == 0.0);
  }
  SUBCASE("misclassification counts rounded disagreements") {
    Dataset d2;
    d2.add_column("p", {1.0, 0.0, 1.0});
    d2.add_column("t", {1.0, 1.0, 1.0});
    auto e = parse_expr("p + 0");
    CostFunction f{CostKind::Misclassification, "t"};
    CHECK(evaluate_cost(f, *e, d2) == 1.0);
  }
}

TEST_CASE("evolve finds the preferred phenotype in a two-element space") {
  Grammar g = parse_grammar("<e> ::= sum ( ( x < 1.5 ) != ( y <= 0.5 ) ) | sum ( ( x < 2.5 ) != ( y <= 0.5 ) )\n");
  CostFunction f{CostKind::Identity, ""};
  EvolutionConfig cfg;
  cfg.iterations = 10;
  cfg.seed = 7;
  auto r = evolve(g, f, toy(), cfg);
  // the first alternative never disagrees: (1,0) true/true, others false/false
  CHECK(r.best_cost == 0.0);
  CHECK(to_string(*r.best_expr).find("1.5") != std::string::npos);
}

TEST_CASE("best-so-far cost history never increases") {
  Grammar g = parse_grammar(
      "<e> ::= sum ( ( x < <n> ) != ( y <= 0.5 ) )\n"
      "<n> ::= range(0.5, 4.5, 0.5)\n");
  CostFunction f{CostKind::Identity, ""};
  EvolutionConfig cfg;
  cfg.iterations = 60;
  cfg.seed = 3;
  auto r = evolve(g, f, toy(), cfg);
  REQUIRE(!r.cost_history.empty());
  for (std::size_t i = 1; i < r.cost_history.size(); ++i)
    CHECK(r.cost_history[i] <= r.cost_history[i - 1]);
  CHECK(r.best_cost == r.cost_history.back());
}

TEST_CASE("same seed, same result") {
  Grammar g = parse_grammar(
      "<e> ::= sum ( ( x < <n> ) != ( y <= <n> ) )\n"
      "<n> ::= range(0, 4, 0.25)\n");
  CostFunction f{CostKind::Identity, ""};
  EvolutionConfig cfg;
  cfg.iterations = 40;
  cfg.seed = 99;
  auto a = evolve(g, f, toy(), cfg);
  auto b = evolve(g, f, toy(), cfg);
  CHECK(a.best_cost == b.best_cost);
  CHECK(a.best_genome.codons == b.best_genome.codons);
  CHECK(to_string(*a.best_expr) == to_string(*b.best_expr));
}

TEST_CASE("evolve matches exhaustive enumeration on a small phenotype space") {
  // 9 x-thresholds: enumerable by hand
  Grammar g = parse_grammar(
      "<e> ::= sum ( ( x < <n> ) != ( y <= 0.5 ) )\n"
      "<n> ::= range(0.5, 4.5, 0.5)\n");
  CostFunction f{CostKind::Identity, ""};

  double best = std::numeric_limits<double>::infinity();
  for (double t = 0.5; t <= 4.51; t += 0.5) {
    auto e = parse_expr("sum((x < " + std::to_string(t) + ") != (y <= 0.5))");
    best = std::min(best, evaluate_cost(f, *e, toy()));
  }

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EvolutionConfig cfg;
    cfg.iterations = 2000;
    cfg.seed = seed;
    auto r = evolve(g, f, toy(), cfg);
    CHECK(r.best_cost == best);
  }
}

TEST_CASE("mutation chance defaults to 10/(1+population)") {
  EvolutionConfig cfg;
  cfg.population_size = 8;
  CHECK(cfg.effective_mutation_chance() == doctest::Approx(10.0 / 9.0));
  cfg.mutation_chance = 0.25;
  CHECK(cfg.effective_mutation_chance() == 0.25);
}
