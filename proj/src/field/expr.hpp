#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>

#include "field/number.hpp"

namespace bqw::field {

// Syntax tree of the field-expression grammar:
//   expr := integer | expr+expr | expr-expr | expr*expr | expr/expr
//         | sqrt(expr) | -expr | (expr)
struct Expr {
  enum class Op { Int, Add, Sub, Mul, Div, Sqrt, Neg };
  Op op = Op::Int;
  mpz_class value;
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;
};
using ExprPtr = std::shared_ptr<const Expr>;

// ParseError on malformed input.
ExprPtr parse_expr(std::string_view text);
// DomainError on division by zero or sqrt of a negative value.
Number evaluate(const Expr& e);
Number parse_number(std::string_view text);
std::string to_string(const Expr& e);

}  // namespace bqw::field
