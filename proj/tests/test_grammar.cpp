#include <doctest.h>

#include "gebayes/grammar.hpp"

using namespace gebayes;

namespace {

Genome genome(std::initializer_list<std::uint32_t> codons) {
  return Genome{std::vector<std::uint32_t>(codons)};
}

}  // namespace

TEST_CASE("two-alternative grammar picks by codon mod") {
  Grammar g = parse_grammar("<e> ::= x | y\n");
  auto e = map_genome(g, genome({3}));
  CHECK(e->kind == Expr::Kind::Var);
  CHECK(e->name == "y");  // 3 mod 2 = 1
}

TEST_CASE("single-alternative grammar ignores codon values") {
  Grammar g = parse_grammar("<e> ::= x\n");
  auto e = map_genome(g, genome({0, 7, 2}));
  CHECK(e->kind == Expr::Kind::Var);
  CHECK(e->name == "x");
}

TEST_CASE("recursion past the wrap limit reports incomplete mapping") {
  Grammar g = parse_grammar("<e> ::= ( <e> + <e> ) | x\n");
  CHECK_THROWS_AS(map_genome(g, genome({0}), 2), MappingIncomplete);
}

TEST_CASE("mapping is deterministic") {
  Grammar g = parse_grammar(
      "<e> ::= <t> + <t> | <t>\n"
      "<t> ::= x | y | 1.5\n");
  Genome gen = genome({0, 4, 5, 11});
  auto a = map_genome(g, gen);
  auto b = map_genome(g, gen);
  CHECK(to_string(*a) == to_string(*b));
}

TEST_CASE("adding a multiple of the alternative count leaves the choice") {
  Grammar g = parse_grammar(
      "<e> ::= <t> + <t> | <t>\n"
      "<t> ::= x | y | 1.5\n");
  auto base = map_genome(g, genome({1, 4}));
  // <e> has 2 alternatives, <t> has 3
  auto shifted = map_genome(g, genome({1 + 2 * 7, 4 + 3 * 11}));
  CHECK(to_string(*base) == to_string(*shifted));
}

TEST_CASE("grammar text round-trips through render") {
  std::string text =
      "<e> ::= <t> + <t> | ifelse ( <c> , <t> , <t> )\n"
      "<c> ::= <t> < <t>\n"
      "<t> ::= x | y | 1.5\n";
  Grammar g = parse_grammar(text);
  Grammar again = parse_grammar(render(g));
  CHECK(g.start == again.start);
  CHECK(g.nonterminals == again.nonterminals);
  CHECK(g.terminals == again.terminals);
  CHECK(g.productions == again.productions);
}

TEST_CASE("range() expands to one alternative per step") {
  Grammar g = parse_grammar("<n> ::= range(4.1, 4.3, 0.1)\n");
  REQUIRE(g.productions.at("n").size() == 3);
  auto lo = map_genome(g, genome({0}));
  auto hi = map_genome(g, genome({2}));
  CHECK(lo->value == doctest::Approx(4.1));
  CHECK(hi->value == doctest::Approx(4.3));
}

TEST_CASE("undefined nonterminal is a parse error") {
  CHECK_THROWS_AS(parse_grammar("<e> ::= <missing>\n"), UndefinedSymbol);
}
