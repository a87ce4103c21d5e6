#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gebayes/dataset.hpp"
#include "gebayes/errors.hpp"

namespace gebayes {

enum class BinOp { Add, Sub, Mul };
enum class CmpOp { Lt, Gt, Le, Ge };

CmpOp negate(CmpOp op);
const char* to_string(BinOp op);
const char* to_string(CmpOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree. Compare/NotEqual/IfElse-condition nodes are
// boolean-valued; everything else is numeric. SumOver is only legal at the
// root and counts the rows where its boolean child holds.
struct Expr {
  enum class Kind { Const, Var, Binary, Compare, NotEqual, IfElse, SumOver };

  Kind kind = Kind::Const;
  double value = 0.0;  // Const
  std::string name;    // Var
  BinOp bin{};
  CmpOp cmp{};
  ExprPtr a, b, c;  // children: a,b for binary nodes; a=cond,b=then,c=else
};

ExprPtr make_const(double v);
ExprPtr make_var(std::string name);
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_compare(CmpOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_not_equal(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_ifelse(ExprPtr cond, ExprPtr then_e, ExprPtr else_e);
ExprPtr make_sum_over(ExprPtr cond);

bool is_boolean(const Expr& e);

// Throws TypeMismatch on ill-typed trees (boolean operand where a number is
// required and vice versa, or SumOver below the root).
void check_types(const Expr& root);

std::string to_string(const Expr& e);

// Parses the concrete expression syntax produced by genome mapping:
// numbers, column names, + - * with the usual precedence, comparisons,
// != between boolean groups, ifelse(c, a, b) and sum(b).
ExprPtr parse_expr(const std::vector<std::string>& tokens);
ExprPtr parse_expr(const std::string& text);

using Value = std::variant<double, bool>;

Value eval_row(const Expr& e, const Dataset& data, std::size_t row);

// SumOver root: number of rows where the condition holds. Numeric root:
// evaluated row-wise; the reduction is the caller's business.
double eval_aggregate(const Expr& e, const Dataset& data);
std::vector<double> eval_rows(const Expr& e, const Dataset& data);

}  // namespace gebayes
