#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "field/interval.hpp"

namespace bqw::field {

class TowerNode;

// One monomial of a tower element: coeff * prod_{i in mask} sqrt(r_i).
struct Term {
  std::uint64_t mask;
  mpq_class coeff;
};
using Terms = std::vector<Term>;

// An exact element of the real quadratic closure of Q.
//
// A number lives in a tower Q ⊂ Q(√r1) ⊂ ... ⊂ Q(√r1,...,√rk) where each r_i
// is a positive element of the previous level that is not a square there.
// Under that invariant the monomials prod √r_i form a basis, so the term list
// is a canonical form: a number is zero iff it has no terms. Towers are
// interned and shared; operands from different towers are re-expressed over
// a merged tower before combining.
//
// Values are immutable and cheap to copy.
class Number {
 public:
  Number();
  Number(int v);  // NOLINT(google-explicit-constructor): literals in formulas
  explicit Number(long v);
  explicit Number(const mpz_class& v);
  explicit Number(const mpq_class& v);

  // p/q in lowest terms; DomainError when q == 0.
  static Number rational(const mpz_class& p, const mpz_class& q);
  static Number rational(long p, long q);

  Number operator-() const;
  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  // DomainError on division by zero.
  friend Number operator/(const Number& a, const Number& b);
  Number& operator+=(const Number& b) { return *this = *this + b; }
  Number& operator-=(const Number& b) { return *this = *this - b; }
  Number& operator*=(const Number& b) { return *this = *this * b; }
  Number& operator/=(const Number& b) { return *this = *this / b; }

  friend bool operator==(const Number& a, const Number& b);
  friend std::strong_ordering operator<=>(const Number& a, const Number& b);

  // Nonnegative square root. The tower grows only when the argument is not
  // already a square. DomainError on negative input.
  Number sqrt() const;
  Number abs() const;
  Number squared() const { return *this * *this; }

  // Exact sign: 0 iff the number is zero. Nonzero signs are found by interval
  // refinement starting at 64 bits and doubling.
  int sign() const;
  bool is_zero() const { return terms_ == nullptr; }
  bool is_rational() const;
  // Requires is_rational().
  mpq_class rational_value() const;
  std::optional<mpz_class> as_integer() const;

  // Interval guaranteed to contain the value.
  Interval enclosure(mpfr_prec_t prec) const;
  double to_double() const;
  // Cheap floating estimate (long double evaluation, no guarantee).
  double approx_fast() const;
  // Decimal string with absolute error at most 10^-digits.
  std::string approx(int digits) const;
  // Serialization in the field-expression grammar.
  std::string to_expr() const;

  // Number of quadratic extensions in the tower this value lives in.
  int tower_depth() const;
  std::size_t term_count() const { return terms_ ? terms_->size() : 0; }
  const TowerNode* tower() const { return tower_; }
  const Terms& terms() const;

 private:
  friend class NumberAccess;
  Number(const TowerNode* tower, std::shared_ptr<const Terms> terms);

  const TowerNode* tower_;
  std::shared_ptr<const Terms> terms_;  // null for zero
};

inline Number sqrt(const Number& a) { return a.sqrt(); }
inline int sign(const Number& a) { return a.sign(); }

std::ostream& operator<<(std::ostream& os, const Number& n);

// Exact floor.
mpz_class floor(const Number& a);
// Smallest integer strictly greater than a.
mpz_class next_integer_above(const Number& a);

// Number of distinct radicands in the process-wide tower registry (for
// diagnostics only).
std::size_t registered_radicand_count();

}  // namespace bqw::field
