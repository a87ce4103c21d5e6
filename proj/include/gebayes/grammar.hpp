#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gebayes/errors.hpp"
#include "gebayes/expr.hpp"

namespace gebayes {

// One symbol of a production right-hand side.
struct Symbol {
  std::string text;
  bool nonterminal = false;

  bool operator==(const Symbol&) const = default;
};

using Alternative = std::vector<Symbol>;

struct Grammar {
  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::string start;
  std::map<std::string, std::vector<Alternative>> productions;
};

struct Genome {
  std::vector<std::uint32_t> codons;
};

// Grammar file format: one rule per line,
//   <name> ::= alt1 | alt2 | ...
// Angle-bracketed symbols are non-terminals, bare tokens terminals.
// range(lo, hi, step) expands to one alternative per enumerated value.
// '#' starts a comment; the first rule's LHS is the start symbol.
Grammar parse_grammar(const std::string& text);
Grammar load_grammar(const std::string& path);

// Inverse of parse_grammar up to range expansion.
std::string render(const Grammar& g);

// Canonical depth-first, leftmost expansion: each non-terminal expansion
// consumes one codon and picks alternative (codon mod #alternatives);
// the codon stream wraps at most max_wraps times. Throws MappingIncomplete
// when non-terminals remain after the last pass.
ExprPtr map_genome(const Grammar& g, const Genome& genome, int max_wraps = 3);

// The terminal sentence before expression parsing; useful for debugging
// grammars whose phenotypes are not valid expressions.
std::vector<std::string> map_genome_tokens(const Grammar& g,
                                           const Genome& genome,
                                           int max_wraps = 3);

}  // namespace gebayes
