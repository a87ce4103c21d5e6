#include "gebayes/grammar.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gebayes {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Enumerates {lo, lo+step, ..., hi}; hi must be hit within 1e-9.
std::vector<double> expand_range(double lo, double hi, double step, int line) {
  if (step <= 0)
    throw SyntaxError("line " + std::to_string(line) +
                      ": range step must be positive");
  std::vector<double> out;
  long n = std::lround((hi - lo) / step);
  if (n < 0 || std::abs(lo + static_cast<double>(n) * step - hi) > 1e-9)
    throw SyntaxError("line " + std::to_string(line) +
                      ": range(lo, hi, step) does not land on hi");
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

struct RawToken {
  std::string text;       // symbol text, or empty for a range directive
  std::vector<double> range_values;
  bool is_range = false;
};

// Splits one alternative into symbols; a range(...) directive becomes a
// single token carrying its enumerated values.
std::vector<RawToken> tokenize_alternative(const std::string& alt, int line) {
  std::vector<RawToken> out;
  std::size_t i = 0;
  while (i < alt.size()) {
    char c = alt[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (alt.compare(i, 6, "range(") == 0) {
      auto close = alt.find(')', i);
      if (close == std::string::npos)
        throw SyntaxError("line " + std::to_string(line) +
                          ": unterminated range(");
      std::string args = alt.substr(i + 6, close - i - 6);
      std::stringstream ss(args);
      std::string part;
      std::vector<double> vals;
      while (std::getline(ss, part, ',')) {
        try {
          vals.push_back(std::stod(trim(part)));
        } catch (const std::exception&) {
          throw SyntaxError("line " + std::to_string(line) +
                            ": bad range argument '" + part + "'");
        }
      }
      if (vals.size() != 3)
        throw SyntaxError("line " + std::to_string(line) +
                          ": range needs (lo, hi, step)");
      RawToken t;
      t.is_range = true;
      t.range_values = expand_range(vals[0], vals[1], vals[2], line);
      out.push_back(std::move(t));
      i = close + 1;
      continue;
    }
    if (c == '<') {
      auto close = alt.find('>', i);
      if (close == std::string::npos ||
          (close + 1 < alt.size() && alt[close + 1] == '=' &&
           close == i + 1)) {
        // bare "<" or "<=" operator terminal
      } else if (close > i + 1) {
        std::string inner = alt.substr(i + 1, close - i - 1);
        bool ident = !inner.empty();
        for (char ic : inner)
          ident &= (std::isalnum(static_cast<unsigned char>(ic)) || ic == '_');
        if (ident) {
          out.push_back(RawToken{"<" + inner + ">", {}, false});
          i = close + 1;
          continue;
        }
      }
    }
    // plain terminal token: up to next whitespace
    std::size_t j = i;
    while (j < alt.size() &&
           !std::isspace(static_cast<unsigned char>(alt[j])))
      ++j;
    out.push_back(RawToken{alt.substr(i, j - i), {}, false});
    i = j;
  }
  return out;
}

bool is_nonterminal_token(const std::string& t) {
  return t.size() > 2 && t.front() == '<' && t.back() == '>';
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
  Grammar g;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find("::=");
    if (sep == std::string::npos)
      throw SyntaxError("line " + std::to_string(lineno) +
                        ": expected '<name> ::= ...'");
    std::string lhs = trim(line.substr(0, sep));
    if (!is_nonterminal_token(lhs))
      throw SyntaxError("line " + std::to_string(lineno) +
                        ": rule LHS must be <name>, got '" + lhs + "'");
    std::string name = lhs.substr(1, lhs.size() - 2);
    if (g.productions.count(name))
      throw SyntaxError("line " + std::to_string(lineno) +
                        ": duplicate rule for <" + name + ">");
    std::string rhs = trim(line.substr(sep + 3));
    if (rhs.empty())
      throw EmptyProduction("line " + std::to_string(lineno) + ": <" + name +
                            "> has no alternatives");

    std::vector<Alternative> alts;
    std::stringstream alt_ss(rhs);
    std::string alt_text;
    while (std::getline(alt_ss, alt_text, '|')) {
      alt_text = trim(alt_text);
      if (alt_text.empty())
        throw EmptyProduction("line " + std::to_string(lineno) + ": <" + name +
                              "> has an empty alternative");
      auto raw = tokenize_alternative(alt_text, lineno);
      // expand at most one range directive per alternative
      std::vector<Alternative> expanded{Alternative{}};
      for (const auto& tok : raw) {
        if (tok.is_range) {
          std::vector<Alternative> next;
          for (const auto& prefix : expanded)
            for (double v : tok.range_values) {
              Alternative a = prefix;
              a.push_back(Symbol{format_number(v), false});
              next.push_back(std::move(a));
            }
          expanded = std::move(next);
        } else {
          Symbol s;
          if (is_nonterminal_token(tok.text)) {
            s.text = tok.text.substr(1, tok.text.size() - 2);
            s.nonterminal = true;
          } else {
            s.text = tok.text;
          }
          for (auto& a : expanded) a.push_back(s);
        }
      }
      for (auto& a : expanded) alts.push_back(std::move(a));
    }
    if (g.start.empty()) g.start = name;
    g.nonterminals.insert(name);
    g.productions.emplace(name, std::move(alts));
  }
  if (g.productions.empty()) throw SyntaxError("grammar has no rules");

  for (const auto& [name, alts] : g.productions)
    for (const auto& alt : alts)
      for (const auto& sym : alt) {
        if (sym.nonterminal) {
          if (!g.productions.count(sym.text))
            throw UndefinedSymbol("non-terminal <" + sym.text +
                                  "> has no production");
        } else {
          g.terminals.insert(sym.text);
        }
      }
  return g;
}

Grammar load_grammar(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open grammar file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_grammar(ss.str());
}

std::string render(const Grammar& g) {
  std::ostringstream os;
  // start symbol first, rest in map order
  std::vector<std::string> order{g.start};
  for (const auto& [name, _] : g.productions)
    if (name != g.start) order.push_back(name);
  for (const auto& name : order) {
    os << "<" << name << "> ::= ";
    const auto& alts = g.productions.at(name);
    for (std::size_t i = 0; i < alts.size(); ++i) {
      if (i) os << " | ";
      for (std::size_t j = 0; j < alts[i].size(); ++j) {
        if (j) os << " ";
        if (alts[i][j].nonterminal)
          os << "<" << alts[i][j].text << ">";
        else
          os << alts[i][j].text;
      }
    }
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> map_genome_tokens(const Grammar& g,
                                           const Genome& genome,
                                           int max_wraps) {
  if (genome.codons.empty()) throw Error("empty genome");
  // sentence holds the partially derived symbol string
  std::vector<Symbol> sentence{Symbol{g.start, true}};
  std::size_t next_codon = 0;
  int wraps = 0;
  for (;;) {
    // find leftmost non-terminal
    std::size_t pos = sentence.size();
    for (std::size_t i = 0; i < sentence.size(); ++i)
      if (sentence[i].nonterminal) {
        pos = i;
        break;
      }
    if (pos == sentence.size()) break;  // fully terminal
    if (next_codon == genome.codons.size()) {
      if (wraps == max_wraps)
        throw MappingIncomplete("non-terminals remain after " +
                                std::to_string(max_wraps) + " wraps");
      ++wraps;
      next_codon = 0;
    }
    const auto& alts = g.productions.at(sentence[pos].text);
    std::uint32_t codon = genome.codons[next_codon++];
    const Alternative& chosen = alts[codon % alts.size()];
    sentence.erase(sentence.begin() + static_cast<std::ptrdiff_t>(pos));
    sentence.insert(sentence.begin() + static_cast<std::ptrdiff_t>(pos),
                    chosen.begin(), chosen.end());
    // guard against runaway growth from pathological grammars
    if (sentence.size() > 100000)
      throw MappingIncomplete("derivation exceeds size limit");
  }
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (const auto& s : sentence) out.push_back(s.text);
  return out;
}

ExprPtr map_genome(const Grammar& g, const Genome& genome, int max_wraps) {
  return parse_expr(map_genome_tokens(g, genome, max_wraps));
}

}  // namespace gebayes
