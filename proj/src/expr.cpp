#include "gebayes/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace gebayes {

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Ge: return CmpOp::Lt;
  }
  throw Error("bad CmpOp");
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
  }
  throw Error("bad BinOp");
}

const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
  }
  throw Error("bad CmpOp");
}

ExprPtr make_const(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Const;
  e->value = v;
  return e;
}

ExprPtr make_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Binary;
  e->bin = op;
  e->a = std::move(lhs);
  e->b = std::move(rhs);
  return e;
}

ExprPtr make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Compare;
  e->cmp = op;
  e->a = std::move(lhs);
  e->b = std::move(rhs);
  return e;
}

ExprPtr make_not_equal(ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::NotEqual;
  e->a = std::move(lhs);
  e->b = std::move(rhs);
  return e;
}

ExprPtr make_ifelse(ExprPtr cond, ExprPtr then_e, ExprPtr else_e) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::IfElse;
  e->a = std::move(cond);
  e->b = std::move(then_e);
  e->c = std::move(else_e);
  return e;
}

ExprPtr make_sum_over(ExprPtr cond) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::SumOver;
  e->a = std::move(cond);
  return e;
}

bool is_boolean(const Expr& e) {
  return e.kind == Expr::Kind::Compare || e.kind == Expr::Kind::NotEqual;
}

namespace {

void check_types_impl(const Expr& e, bool is_root) {
  switch (e.kind) {
    case Expr::Kind::Const:
    case Expr::Kind::Var:
      return;
    case Expr::Kind::Binary:
      if (is_boolean(*e.a) || is_boolean(*e.b))
        throw TypeMismatch("arithmetic over boolean operand");
      check_types_impl(*e.a, false);
      check_types_impl(*e.b, false);
      return;
    case Expr::Kind::Compare:
      if (is_boolean(*e.a) || is_boolean(*e.b))
        throw TypeMismatch("comparison over boolean operand");
      check_types_impl(*e.a, false);
      check_types_impl(*e.b, false);
      return;
    case Expr::Kind::NotEqual:
      if (!is_boolean(*e.a) || !is_boolean(*e.b))
        throw TypeMismatch("!= requires boolean operands");
      check_types_impl(*e.a, false);
      check_types_impl(*e.b, false);
      return;
    case Expr::Kind::IfElse:
      if (!is_boolean(*e.a))
        throw TypeMismatch("ifelse condition must be boolean");
      if (is_boolean(*e.b) || is_boolean(*e.c))
        throw TypeMismatch("ifelse branches must be numeric");
      check_types_impl(*e.a, false);
      check_types_impl(*e.b, false);
      check_types_impl(*e.c, false);
      return;
    case Expr::Kind::SumOver:
      if (!is_root) throw TypeMismatch("sum() only allowed at the root");
      if (!is_boolean(*e.a))
        throw TypeMismatch("sum() requires a boolean argument");
      check_types_impl(*e.a, false);
      return;
  }
}

bool child_needs_parens(const Expr& child) {
  return child.kind == Expr::Kind::Binary ||
         child.kind == Expr::Kind::Compare ||
         child.kind == Expr::Kind::NotEqual;
}

std::string render(const Expr& e) {
  auto wrap = [](const Expr& c) {
    std::string s = to_string(c);
    return child_needs_parens(c) ? "(" + s + ")" : s;
  };
  std::ostringstream os;
  os.precision(15);
  switch (e.kind) {
    case Expr::Kind::Const:
      os << e.value;
      return os.str();
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Binary:
      return wrap(*e.a) + " " + to_string(e.bin) + " " + wrap(*e.b);
    case Expr::Kind::Compare:
      return wrap(*e.a) + " " + to_string(e.cmp) + " " + wrap(*e.b);
    case Expr::Kind::NotEqual:
      return wrap(*e.a) + " != " + wrap(*e.b);
    case Expr::Kind::IfElse:
      return "ifelse(" + to_string(*e.a) + ", " + to_string(*e.b) + ", " +
             to_string(*e.c) + ")";
    case Expr::Kind::SumOver:
      return "sum(" + to_string(*e.a) + ")";
  }
  throw Error("bad Expr kind");
}

// Recursive-descent parser over a token stream.
class Parser {
 public:
  explicit Parser(const std::vector<std::string>& tokens) : toks_(tokens) {}

  ExprPtr parse() {
    ExprPtr e = parse_neq();
    if (pos_ != toks_.size())
      throw SyntaxError("trailing tokens after expression: '" + peek() + "'");
    return e;
  }

 private:
  const std::vector<std::string>& toks_;
  std::size_t pos_ = 0;

  const std::string& peek() const {
    static const std::string kEnd = "<end>";
    return pos_ < toks_.size() ? toks_[pos_] : kEnd;
  }
  bool accept(const std::string& t) {
    if (peek() == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& t) {
    if (!accept(t))
      throw SyntaxError("expected '" + t + "', got '" + peek() + "'");
  }

  ExprPtr parse_neq() {
    ExprPtr e = parse_cmp();
    while (accept("!=")) e = make_not_equal(e, parse_cmp());
    return e;
  }

  ExprPtr parse_cmp() {
    ExprPtr e = parse_add();
    for (CmpOp op : {CmpOp::Le, CmpOp::Ge, CmpOp::Lt, CmpOp::Gt}) {
      if (accept(to_string(op))) return make_compare(op, e, parse_add());
    }
    return e;
  }

  ExprPtr parse_add() {
    ExprPtr e = parse_mul();
    for (;;) {
      if (accept("+"))
        e = make_binary(BinOp::Add, e, parse_mul());
      else if (accept("-"))
        e = make_binary(BinOp::Sub, e, parse_mul());
      else
        return e;
    }
  }

  ExprPtr parse_mul() {
    ExprPtr e = parse_primary();
    while (accept("*")) e = make_binary(BinOp::Mul, e, parse_primary());
    return e;
  }

  ExprPtr parse_primary() {
    const std::string t = peek();
    if (accept("(")) {
      ExprPtr e = parse_neq();
      expect(")");
      return e;
    }
    if (accept("ifelse")) {
      expect("(");
      ExprPtr c = parse_neq();
      expect(",");
      ExprPtr a = parse_neq();
      expect(",");
      ExprPtr b = parse_neq();
      expect(")");
      return make_ifelse(c, a, b);
    }
    if (accept("sum")) {
      expect("(");
      ExprPtr c = parse_neq();
      expect(")");
      return make_sum_over(c);
    }
    if (t.empty()) throw SyntaxError("unexpected end of expression");
    char c0 = t[0];
    if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.' ||
        ((c0 == '-' || c0 == '+') && t.size() > 1)) {
      std::size_t pos = 0;
      double v = std::stod(t, &pos);
      if (pos != t.size()) throw SyntaxError("bad numeric token: '" + t + "'");
      ++pos_;
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c0)) || c0 == '_') {
      ++pos_;
      return make_var(t);
    }
    throw SyntaxError("unexpected token: '" + t + "'");
  }
};

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')' || c == ',' || c == '+' || c == '*') {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    if (c == '-') {
      // unary minus glued to a number
      if (i + 1 < text.size() &&
          (std::isdigit(static_cast<unsigned char>(text[i + 1])) ||
           text[i + 1] == '.') &&
          (out.empty() || out.back() == "(" || out.back() == "," ||
           out.back() == "+" || out.back() == "-" || out.back() == "*" ||
           out.back() == "<" || out.back() == ">" || out.back() == "<=" ||
           out.back() == ">=" || out.back() == "!=")) {
        std::size_t j = i + 1;
        while (j < text.size() && is_ident(text[j])) ++j;
        out.push_back(text.substr(i, j - i));
        i = j;
      } else {
        out.emplace_back(1, c);
        ++i;
      }
      continue;
    }
    if (c == '<' || c == '>' || c == '!') {
      if (i + 1 < text.size() && text[i + 1] == '=') {
        out.push_back(text.substr(i, 2));
        i += 2;
      } else {
        out.emplace_back(1, c);
        ++i;
      }
      continue;
    }
    if (is_ident(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident(text[j])) ++j;
      out.push_back(text.substr(i, j - i));
      i = j;
      continue;
    }
    throw SyntaxError(std::string("unexpected character: '") + c + "'");
  }
  return out;
}

}  // namespace

void check_types(const Expr& root) { check_types_impl(root, true); }

std::string to_string(const Expr& e) { return render(e); }

ExprPtr parse_expr(const std::vector<std::string>& tokens) {
  ExprPtr e = Parser(tokens).parse();
  check_types(*e);
  return e;
}

ExprPtr parse_expr(const std::string& text) {
  return parse_expr(tokenize(text));
}

namespace {

Value eval_impl(const Expr& e, const Dataset& data, std::size_t row) {
  auto num = [&](const Expr& n) -> double {
    Value v = eval_impl(n, data, row);
    if (auto* d = std::get_if<double>(&v)) return *d;
    throw TypeMismatch("expected numeric value");
  };
  auto truth = [&](const Expr& n) -> bool {
    Value v = eval_impl(n, data, row);
    if (auto* b = std::get_if<bool>(&v)) return *b;
    throw TypeMismatch("expected boolean value");
  };
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      return data.col(e.name).at(row);
    case Expr::Kind::Binary: {
      double l = num(*e.a), r = num(*e.b);
      switch (e.bin) {
        case BinOp::Add: return l + r;
        case BinOp::Sub: return l - r;
        case BinOp::Mul: return l * r;
      }
      throw Error("bad BinOp");
    }
    case Expr::Kind::Compare: {
      double l = num(*e.a), r = num(*e.b);
      switch (e.cmp) {
        case CmpOp::Lt: return l < r;
        case CmpOp::Gt: return l > r;
        case CmpOp::Le: return l <= r;
        case CmpOp::Ge: return l >= r;
      }
      throw Error("bad CmpOp");
    }
    case Expr::Kind::NotEqual:
      return truth(*e.a) != truth(*e.b);
    case Expr::Kind::IfElse:
      return truth(*e.a) ? num(*e.b) : num(*e.c);
    case Expr::Kind::SumOver:
      throw TypeMismatch("sum() cannot be evaluated row-wise");
  }
  throw Error("bad Expr kind");
}

}  // namespace

Value eval_row(const Expr& e, const Dataset& data, std::size_t row) {
  return eval_impl(e, data, row);
}

double eval_aggregate(const Expr& e, const Dataset& data) {
  if (e.kind == Expr::Kind::SumOver) {
    double count = 0.0;
    for (std::size_t r = 0; r < data.n_rows(); ++r) {
      Value v = eval_impl(*e.a, data, r);
      if (std::get<bool>(v)) count += 1.0;
    }
    return count;
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < data.n_rows(); ++r)
    sum += std::get<double>(eval_impl(e, data, r));
  return sum;
}

std::vector<double> eval_rows(const Expr& e, const Dataset& data) {
  if (e.kind == Expr::Kind::SumOver)
    throw TypeMismatch("sum() has no row-wise value");
  std::vector<double> out(data.n_rows());
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    Value v = eval_impl(e, data, r);
    if (auto* d = std::get_if<double>(&v))
      out[r] = *d;
    else
      throw TypeMismatch("row-valued expression expected");
  }
  return out;
}

}  // namespace gebayes
