#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace bqw::field {

// Owning wrapper around an mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec);
  Mpfr(const Mpfr& other);
  Mpfr(Mpfr&& other) noexcept;
  Mpfr& operator=(const Mpfr& other);
  Mpfr& operator=(Mpfr&& other) noexcept;
  ~Mpfr();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

 private:
  mpfr_t value_;
};

// Closed interval [lo, hi] with outward rounding. Every operation returns an
// interval containing the exact result of the operation applied to any points
// of the operands.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec);
  static Interval from_rational(const mpq_class& q, mpfr_prec_t prec);

  const Mpfr& lo() const { return lo_; }
  const Mpfr& hi() const { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  Interval operator+(const Interval& rhs) const;
  Interval operator*(const Interval& rhs) const;
  Interval scaled(const mpq_class& q) const;
  // Enclosure of sqrt(max(x, 0)).
  Interval sqrt() const;

  bool contains_zero() const;
  // -1, +1 when the interval excludes zero, 0 otherwise.
  int certain_sign() const;
  bool contains(const mpq_class& q) const;
  double width() const;
  double midpoint() const;
  Mpfr midpoint_mpfr() const;

 private:
  Mpfr lo_;
  Mpfr hi_;
};

}  // namespace bqw::field
