#include "gebayes/rulebase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gebayes {

bool Antecedent::holds(double x) const {
  if (kind == Kind::Interval) return x >= lo && x <= hi;
  switch (op) {
    case CmpOp::Lt: return x < threshold;
    case CmpOp::Gt: return x > threshold;
    case CmpOp::Le: return x <= threshold;
    case CmpOp::Ge: return x >= threshold;
  }
  throw Error("bad CmpOp");
}

namespace {

bool cmp_holds(CmpOp op, double l, double r) {
  switch (op) {
    case CmpOp::Lt: return l < r;
    case CmpOp::Gt: return l > r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Ge: return l >= r;
  }
  throw Error("bad CmpOp");
}

struct VarCmp {
  std::string var;
  CmpOp op;
  double threshold;
};

struct VarOrder {
  std::string var_a;
  CmpOp op;
  std::string var_b;
};

// Compare node with a variable on one side and a constant on the other,
// normalized to variable-on-left.
std::optional<VarCmp> as_var_cmp(const Expr& e) {
  if (e.kind != Expr::Kind::Compare) return std::nullopt;
  if (e.a->kind == Expr::Kind::Var && e.b->kind == Expr::Kind::Const)
    return VarCmp{e.a->name, e.cmp, e.b->value};
  if (e.a->kind == Expr::Kind::Const && e.b->kind == Expr::Kind::Var) {
    // c op v  ==  v op' c with the inequality mirrored
    CmpOp mirrored;
    switch (e.cmp) {
      case CmpOp::Lt: mirrored = CmpOp::Gt; break;
      case CmpOp::Gt: mirrored = CmpOp::Lt; break;
      case CmpOp::Le: mirrored = CmpOp::Ge; break;
      case CmpOp::Ge: mirrored = CmpOp::Le; break;
      default: throw Error("bad CmpOp");
    }
    return VarCmp{e.b->name, mirrored, e.a->value};
  }
  return std::nullopt;
}

std::optional<VarOrder> as_var_order(const Expr& e) {
  if (e.kind != Expr::Kind::Compare) return std::nullopt;
  if (e.a->kind == Expr::Kind::Var && e.b->kind == Expr::Kind::Var)
    return VarOrder{e.a->name, e.cmp, e.b->name};
  return std::nullopt;
}

double original_units(const Dataset* data, const std::string& col, double v) {
  return data ? data->to_original(col, v) : v;
}

Antecedent make_antecedent(const Dataset* data, const VarCmp& c) {
  Antecedent a;
  a.kind = Antecedent::Kind::Compare;
  a.column = c.var;
  a.op = c.op;
  a.threshold = original_units(data, c.var, c.threshold);
  return a;
}

Antecedent negated(const Antecedent& a) {
  Antecedent out = a;
  out.op = negate(a.op);
  return out;
}

// sum((x op1 c) != (rhs)) and ifelse((x op1 c) != (rhs), ., .) shapes:
// two complementary rules, the second negating both sides.
std::vector<Rule> disagreement_rules(const Expr& lhs, const Expr& rhs,
                                     const Dataset* data) {
  auto ante = as_var_cmp(lhs);
  if (!ante) throw UnrecognizedShape("antecedent is not <var> <op> <const>");
  std::vector<Rule> rules(2);
  rules[0].antecedent = make_antecedent(data, *ante);
  rules[1].antecedent = negated(rules[0].antecedent);
  if (auto out = as_var_cmp(rhs)) {
    rules[0].consequent.kind = Consequent::Kind::OutputCompare;
    rules[0].consequent.output = out->var;
    rules[0].consequent.op = out->op;
    rules[0].consequent.threshold = original_units(data, out->var,
                                                   out->threshold);
    rules[1].consequent = rules[0].consequent;
    rules[1].consequent.op = negate(out->op);
    return rules;
  }
  if (auto ord = as_var_order(rhs)) {
    rules[0].consequent.kind = Consequent::Kind::OutputOrder;
    rules[0].consequent.col_a = ord->var_a;
    rules[0].consequent.op = ord->op;
    rules[0].consequent.col_b = ord->var_b;
    rules[1].consequent = rules[0].consequent;
    rules[1].consequent.op = negate(ord->op);
    return rules;
  }
  throw UnrecognizedShape("consequent is neither a comparison nor an order");
}

Consequent branch_consequent(const Expr& e) {
  Consequent c;
  if (e.kind == Expr::Kind::Const &&
      (e.value == 0.0 || e.value == 1.0)) {
    c.kind = Consequent::Kind::ClassLabel;
    c.label = static_cast<int>(e.value);
  } else {
    c.kind = Consequent::Kind::OutputFormula;
    c.formula = std::make_shared<Expr>(e);
  }
  return c;
}

}  // namespace

RuleBase extract_rules(const Expr& e, PenaltyVariant variant,
                       const Dataset* data) {
  RuleBase rb;
  rb.variant = variant;
  if (e.kind == Expr::Kind::SumOver) {
    const Expr& inner = *e.a;
    if (inner.kind != Expr::Kind::NotEqual)
      throw UnrecognizedShape("sum() argument is not a disagreement");
    rb.rules = disagreement_rules(*inner.a, *inner.b, data);
    return rb;
  }
  if (e.kind == Expr::Kind::IfElse) {
    const Expr& cond = *e.a;
    if (cond.kind == Expr::Kind::NotEqual) {
      // total-distance boundary form: branches carry the substitution value
      rb.rules = disagreement_rules(*cond.a, *cond.b, data);
      return rb;
    }
    auto ante = as_var_cmp(cond);
    if (!ante)
      throw UnrecognizedShape("ifelse condition is not <var> <op> <const>");
    std::vector<Rule> rules(2);
    rules[0].antecedent = make_antecedent(data, *ante);
    rules[1].antecedent = negated(rules[0].antecedent);
    Consequent then_c = branch_consequent(*e.b);
    Consequent else_c = branch_consequent(*e.c);
    // class rules only when both branches are 0/1 constants
    if (then_c.kind != else_c.kind) {
      auto as_formula = [](const Expr& branch) {
        Consequent c;
        c.kind = Consequent::Kind::OutputFormula;
        c.formula = std::make_shared<Expr>(branch);
        return c;
      };
      then_c = as_formula(*e.b);
      else_c = as_formula(*e.c);
    }
    rules[0].consequent = std::move(then_c);
    rules[1].consequent = std::move(else_c);
    rb.rules = std::move(rules);
    return rb;
  }
  throw UnrecognizedShape("expression is not a supported rule template");
}

RuleInputGrid make_grid(const RuleBase& rb, double n_min, double n_max,
                        int n_per_segment) {
  if (rb.rules.empty()) throw EmptyGrid("rule base has no rules");
  if (n_per_segment < 2) throw EmptyGrid("need at least 2 points per segment");
  // segment boundaries: limits plus the distinct antecedent thresholds
  std::vector<double> bounds{n_min, n_max};
  std::string column;
  for (const auto& r : rb.rules) {
    if (column.empty()) column = r.antecedent.column;
    if (r.antecedent.column != column)
      throw Error("grid requires a single rule-input column");
    if (r.antecedent.kind == Antecedent::Kind::Compare)
      bounds.push_back(r.antecedent.threshold);
    else {
      bounds.push_back(r.antecedent.lo);
      bounds.push_back(r.antecedent.hi);
    }
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  bounds.erase(std::remove_if(bounds.begin(), bounds.end(),
                              [&](double b) { return b < n_min || b > n_max; }),
               bounds.end());

  RuleInputGrid grid;
  grid.column = column;
  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    double lo = bounds[s], hi = bounds[s + 1];
    for (int i = 0; i < n_per_segment; ++i)
      grid.points.push_back(lo + (hi - lo) * i /
                            static_cast<double>(n_per_segment - 1));
  }
  if (grid.points.empty()) throw EmptyGrid("grid limits produce no points");
  return grid;
}

namespace {

bool violates(const Consequent& c, double x, const Predictor& predict) {
  switch (c.kind) {
    case Consequent::Kind::OutputCompare:
      return !cmp_holds(c.op, predict(c.output, x), c.threshold);
    case Consequent::Kind::OutputOrder:
      return !cmp_holds(c.op, predict(c.col_a, x), predict(c.col_b, x));
    case Consequent::Kind::ClassLabel: {
      int predicted = predict(c.output, x) >= 0.5 ? 1 : 0;
      return predicted != c.label;
    }
    case Consequent::Kind::OutputFormula:
      throw Error("formula consequents have no violation predicate");
  }
  throw Error("bad Consequent kind");
}

}  // namespace

double violation_proportion(const RuleBase& rb, const RuleInputGrid& grid,
                            const Predictor& predict) {
  if (grid.points.empty()) throw EmptyGrid("empty rule-input grid");
  // every rule whose antecedent covers a point counts; for complementary
  // pairs this is exactly one rule per point
  std::size_t violating = 0, covered = 0;
  for (double x : grid.points)
    for (const auto& rule : rb.rules) {
      if (!rule.antecedent.holds(x)) continue;
      ++covered;
      if (violates(rule.consequent, x, predict)) ++violating;
    }
  if (covered == 0) throw EmptyGrid("no grid point matches any antecedent");
  return static_cast<double>(violating) / static_cast<double>(covered);
}

double violation_distance(const RuleBase& rb, const RuleInputGrid& grid,
                          const Predictor& predict) {
  if (grid.points.empty()) throw EmptyGrid("empty rule-input grid");
  double total = 0.0;
  for (double x : grid.points)
    for (const auto& rule : rb.rules) {
      if (!rule.antecedent.holds(x)) continue;
      const Consequent& c = rule.consequent;
      switch (c.kind) {
        case Consequent::Kind::OutputCompare: {
          double v = predict(c.output, x);
          if (!cmp_holds(c.op, v, c.threshold))
            total += std::abs(v - c.threshold);
          break;
        }
        case Consequent::Kind::OutputOrder: {
          double va = predict(c.col_a, x), vb = predict(c.col_b, x);
          if (!cmp_holds(c.op, va, vb)) total += std::abs(va - vb);
          break;
        }
        default:
          throw Error("total-distance penalty needs comparison consequents");
      }
    }
  return total;
}

std::vector<double> rule_outputs(const RuleBase& rb, const Dataset& data) {
  std::vector<double> out(data.n_rows());
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    int idx = -1;
    for (std::size_t i = 0; i < rb.rules.size(); ++i) {
      const auto& col = rb.rules[i].antecedent.column;
      double x = data.to_original(col, data.col(col).at(r));
      if (rb.rules[i].antecedent.holds(x)) {
        idx = static_cast<int>(i);
        break;
      }
    }
    if (idx < 0) throw Error("row matches no rule antecedent");
    const Consequent& c = rb.rules[static_cast<std::size_t>(idx)].consequent;
    switch (c.kind) {
      case Consequent::Kind::OutputFormula:
        out[r] = std::get<double>(eval_row(*c.formula, data, r));
        break;
      case Consequent::Kind::ClassLabel:
        out[r] = static_cast<double>(c.label);
        break;
      default:
        throw Error("rule outputs need formula or class consequents");
    }
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string render_antecedent(const Antecedent& a) {
  if (a.kind == Antecedent::Kind::Interval)
    return a.column + " in [" + fmt(a.lo) + ", " + fmt(a.hi) + "]";
  return a.column + " " + to_string(a.op) + " " + fmt(a.threshold);
}

std::string render_consequent(const Consequent& c) {
  switch (c.kind) {
    case Consequent::Kind::OutputCompare:
      return c.output + " " + to_string(c.op) + " " + fmt(c.threshold);
    case Consequent::Kind::OutputOrder:
      return "order " + c.col_a + " " + to_string(c.op) + " " + c.col_b;
    case Consequent::Kind::OutputFormula:
      return "formula " + to_string(*c.formula);
    case Consequent::Kind::ClassLabel:
      return "class " + std::to_string(c.label);
  }
  throw Error("bad Consequent kind");
}

CmpOp parse_cmp_op(const std::string& s) {
  if (s == "<") return CmpOp::Lt;
  if (s == ">") return CmpOp::Gt;
  if (s == "<=") return CmpOp::Le;
  if (s == ">=") return CmpOp::Ge;
  throw SyntaxError("bad comparison operator: '" + s + "'");
}

}  // namespace

std::string render(const RuleBase& rb) {
  std::ostringstream os;
  for (const auto& r : rb.rules)
    os << "IF " << render_antecedent(r.antecedent) << " THEN "
       << render_consequent(r.consequent) << "\n";
  switch (rb.variant) {
    case PenaltyVariant::Proportion:
      os << "variant proportion a=" << fmt(rb.beta_a) << " b=" << fmt(rb.beta_b);
      break;
    case PenaltyVariant::TotalDistance:
      os << "variant distance lambda=" << fmt(rb.lambda);
      break;
    case PenaltyVariant::Piecewise:
      os << "variant piecewise sigma_r=" << fmt(rb.sigma_r);
      break;
  }
  os << " n=" << rb.discretization_n << "\n";
  return os.str();
}

RuleBase parse_rulebase(const std::string& text) {
  RuleBase rb;
  std::stringstream in(text);
  std::string line;
  bool saw_variant = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word[0] == '#') continue;
    if (word == "IF") {
      Rule rule;
      std::string col, op_s;
      ls >> col >> op_s;
      rule.antecedent.column = col;
      if (op_s == "in") {
        std::string rest;
        std::getline(ls, rest);
        auto open = rest.find('[');
        auto comma = rest.find(',');
        auto close = rest.find(']');
        if (open == std::string::npos || comma == std::string::npos ||
            close == std::string::npos)
          throw SyntaxError("bad interval antecedent: " + line);
        rule.antecedent.kind = Antecedent::Kind::Interval;
        rule.antecedent.lo = std::stod(rest.substr(open + 1, comma - open - 1));
        rule.antecedent.hi =
            std::stod(rest.substr(comma + 1, close - comma - 1));
        ls = std::istringstream(rest.substr(close + 1));
      } else {
        rule.antecedent.op = parse_cmp_op(op_s);
        double thr;
        ls >> thr;
        rule.antecedent.threshold = thr;
      }
      std::string then_kw;
      ls >> then_kw;
      if (then_kw != "THEN") throw SyntaxError("expected THEN in: " + line);
      std::string first;
      ls >> first;
      if (first == "class") {
        ls >> rule.consequent.label;
        rule.consequent.kind = Consequent::Kind::ClassLabel;
      } else if (first == "order") {
        rule.consequent.kind = Consequent::Kind::OutputOrder;
        std::string a, op2, b;
        ls >> a >> op2 >> b;
        rule.consequent.col_a = a;
        rule.consequent.op = parse_cmp_op(op2);
        rule.consequent.col_b = b;
      } else if (first == "formula") {
        std::string rest;
        std::getline(ls, rest);
        rule.consequent.kind = Consequent::Kind::OutputFormula;
        rule.consequent.formula = parse_expr(rest);
      } else {
        rule.consequent.kind = Consequent::Kind::OutputCompare;
        rule.consequent.output = first;
        std::string op2;
        double thr;
        ls >> op2 >> thr;
        rule.consequent.op = parse_cmp_op(op2);
        rule.consequent.threshold = thr;
      }
      rb.rules.push_back(std::move(rule));
    } else if (word == "variant") {
      saw_variant = true;
      std::string kind;
      ls >> kind;
      if (kind == "proportion")
        rb.variant = PenaltyVariant::Proportion;
      else if (kind == "distance")
        rb.variant = PenaltyVariant::TotalDistance;
      else if (kind == "piecewise")
        rb.variant = PenaltyVariant::Piecewise;
      else
        throw SyntaxError("unknown variant: " + kind);
      std::string kv;
      while (ls >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw SyntaxError("bad variant parameter: " + kv);
        std::string key = kv.substr(0, eq);
        double val = std::stod(kv.substr(eq + 1));
        if (key == "a") rb.beta_a = val;
        else if (key == "b") rb.beta_b = val;
        else if (key == "lambda") rb.lambda = val;
        else if (key == "sigma_r") rb.sigma_r = val;
        else if (key == "n") rb.discretization_n = static_cast<int>(val);
        else throw SyntaxError("unknown variant parameter: " + key);
      }
    } else {
      throw SyntaxError("unexpected rule line: " + line);
    }
  }
  if (rb.rules.empty()) throw SyntaxError("rule base text has no rules");
  if (!saw_variant) throw SyntaxError("rule base text has no variant footer");
  return rb;
}

}  // namespace gebayes
