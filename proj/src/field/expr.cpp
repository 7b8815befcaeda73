#include "field/expr.hpp"

#include <cctype>

#include "errors.hpp"

namespace bqw::field {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr run() {
    ExprPtr e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression \"" + std::string(s_) + "\" at offset " + std::to_string(pos_) +
                     ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static ExprPtr node(Expr::Op op, ExprPtr l, ExprPtr r = nullptr) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  ExprPtr sum() {
    ExprPtr e = product();
    for (;;) {
      if (eat('+')) {
        e = node(Expr::Op::Add, e, product());
      } else if (eat('-')) {
        e = node(Expr::Op::Sub, e, product());
      } else {
        return e;
      }
    }
  }

  ExprPtr product() {
    ExprPtr e = unary();
    for (;;) {
      if (eat('*')) {
        e = node(Expr::Op::Mul, e, unary());
      } else if (eat('/')) {
        e = node(Expr::Op::Div, e, unary());
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (eat('-')) return node(Expr::Op::Neg, unary());
    if (eat('+')) return unary();
    return primary();
  }

  ExprPtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      ExprPtr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto e = std::make_shared<Expr>();
      e->op = Expr::Op::Int;
      e->value = mpz_class(std::string(s_.substr(start, pos_ - start)));
      return e;
    }
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!eat('(')) fail("expected '(' after sqrt");
      ExprPtr inner = sum();
      if (!eat(')')) fail("expected ')'");
      return node(Expr::Op::Sqrt, inner);
    }
    fail("unexpected '" + std::string(1, s_[pos_]) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).run(); }

Number evaluate(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Int:
      return Number(e.value);
    case Expr::Op::Add:
      return evaluate(*e.lhs) + evaluate(*e.rhs);
    case Expr::Op::Sub:
      return evaluate(*e.lhs) - evaluate(*e.rhs);
    case Expr::Op::Mul:
      return evaluate(*e.lhs) * evaluate(*e.rhs);
    case Expr::Op::Div:
      return evaluate(*e.lhs) / evaluate(*e.rhs);
    case Expr::Op::Sqrt:
      return evaluate(*e.lhs).sqrt();
    case Expr::Op::Neg:
      return -evaluate(*e.lhs);
  }
  throw Error("bad expression node");
}

Number parse_number(std::string_view text) { return evaluate(*parse_expr(text)); }

std::string to_string(const Expr& e) {
  switch (e.op) {
    case Expr::Op::Int:
      return e.value.get_str();
    case Expr::Op::Add:
      return "(" + to_string(*e.lhs) + "+" + to_string(*e.rhs) + ")";
    case Expr::Op::Sub:
      return "(" + to_string(*e.lhs) + "-" + to_string(*e.rhs) + ")";
    case Expr::Op::Mul:
      return "(" + to_string(*e.lhs) + "*" + to_string(*e.rhs) + ")";
    case Expr::Op::Div:
      return "(" + to_string(*e.lhs) + "/" + to_string(*e.rhs) + ")";
    case Expr::Op::Sqrt:
      return "sqrt(" + to_string(*e.lhs) + ")";
    case Expr::Op::Neg:
      return "-(" + to_string(*e.lhs) + ")";
  }
  return "";
}

}  // namespace bqw::field
