#include "field/interval.hpp"

#include <algorithm>
#include <utility>

namespace bqw::field {

Mpfr::Mpfr(mpfr_prec_t prec) { mpfr_init2(value_, prec); mpfr_set_zero(value_, 1); }

Mpfr::Mpfr(const Mpfr& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
  // mpfr_t is an array type; steal the limbs by swapping with a fresh value.
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Mpfr::~Mpfr() { mpfr_clear(value_); }

Interval::Interval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

Interval Interval::from_rational(const mpq_class& q, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_q(out.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
  return out;
}

Interval Interval::operator+(const Interval& rhs) const {
  Interval out(std::max(precision(), rhs.precision()));
  mpfr_add(out.lo_.get(), lo_.get(), rhs.lo_.get(), MPFR_RNDD);
  mpfr_add(out.hi_.get(), hi_.get(), rhs.hi_.get(), MPFR_RNDU);
  return out;
}

Interval Interval::operator*(const Interval& rhs) const {
  const mpfr_prec_t prec = std::max(precision(), rhs.precision());
  Interval out(prec);
  Mpfr cand_lo(prec), cand_hi(prec);
  bool first = true;
  for (const Mpfr* a : {&lo_, &hi_}) {
    for (const Mpfr* b : {&rhs.lo_, &rhs.hi_}) {
      mpfr_mul(cand_lo.get(), a->get(), b->get(), MPFR_RNDD);
      mpfr_mul(cand_hi.get(), a->get(), b->get(), MPFR_RNDU);
      if (first || mpfr_less_p(cand_lo.get(), out.lo_.get()))
        mpfr_set(out.lo_.get(), cand_lo.get(), MPFR_RNDD);
      if (first || mpfr_greater_p(cand_hi.get(), out.hi_.get()))
        mpfr_set(out.hi_.get(), cand_hi.get(), MPFR_RNDU);
      first = false;
    }
  }
  return out;
}

Interval Interval::scaled(const mpq_class& q) const {
  Interval out(precision());
  if (sgn(q) >= 0) {
    mpfr_mul_q(out.lo_.get(), lo_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(out.hi_.get(), hi_.get(), q.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(out.lo_.get(), hi_.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(out.hi_.get(), lo_.get(), q.get_mpq_t(), MPFR_RNDU);
  }
  return out;
}

Interval Interval::sqrt() const {
  Interval out(precision());
  if (mpfr_sgn(lo_.get()) <= 0) {
    mpfr_set_zero(out.lo_.get(), 1);
  } else {
    mpfr_sqrt(out.lo_.get(), lo_.get(), MPFR_RNDD);
  }
  if (mpfr_sgn(hi_.get()) <= 0) {
    mpfr_set_zero(out.hi_.get(), 1);
  } else {
    mpfr_sqrt(out.hi_.get(), hi_.get(), MPFR_RNDU);
  }
  return out;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

int Interval::certain_sign() const {
  if (mpfr_sgn(lo_.get()) > 0) return 1;
  if (mpfr_sgn(hi_.get()) < 0) return -1;
  return 0;
}

bool Interval::contains(const mpq_class& q) const {
  return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
}

double Interval::width() const {
  Mpfr w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

Mpfr Interval::midpoint_mpfr() const {
  Mpfr m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

double Interval::midpoint() const { return mpfr_get_d(midpoint_mpfr().get(), MPFR_RNDN); }

}  // namespace bqw::field
