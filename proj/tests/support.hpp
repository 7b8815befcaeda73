#pragma once

// Shared helpers for the test binaries: random inputs and independent oracles.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "field/expr.hpp"
#include "field/number.hpp"
#include "gadgets/witness.hpp"
#include "verify/verify.hpp"

namespace testsupport {

using bqw::Number;
using bqw::Point;

// 400 bits is a little over 120 decimal digits.
constexpr mpfr_prec_t kOracleBits = 400;

// Plain RAII mpfr value used only by the oracle; the library's own interval
// code is deliberately not involved.
struct Big {
  mpfr_t v;
  Big() { mpfr_init2(v, kOracleBits); mpfr_set_zero(v, 1); }
  explicit Big(long x) { mpfr_init2(v, kOracleBits); mpfr_set_si(v, x, MPFR_RNDN); }
  Big(const Big& o) { mpfr_init2(v, kOracleBits); mpfr_set(v, o.v, MPFR_RNDN); }
  Big& operator=(const Big& o) { mpfr_set(v, o.v, MPFR_RNDN); return *this; }
  ~Big() { mpfr_clear(v); }
  double d() const { return mpfr_get_d(v, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v); }
  // |v| > 10^-k
  bool exceeds(int k) const {
    Big t;
    mpfr_abs(t.v, v, MPFR_RNDN);
    Big lim(10);
    mpfr_pow_si(lim.v, lim.v, -k, MPFR_RNDN);
    return mpfr_cmp(t.v, lim.v) > 0;
  }
};

// Random field expression with its oracle value.
struct Sample {
  std::string text;
  Big value;
};

class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Sample leaf() {
    Sample s;
    switch (uniform(0, 2)) {
      case 0: {
        const int k = uniform(-9, 9);
        s.text = "(" + std::to_string(k) + ")";
        mpfr_set_si(s.value.v, k, MPFR_RNDN);
        break;
      }
      case 1: {
        const int p = uniform(-20, 20), q = uniform(1, 12);
        s.text = "(" + std::to_string(p) + "/" + std::to_string(q) + ")";
        mpfr_set_si(s.value.v, p, MPFR_RNDN);
        mpfr_div_si(s.value.v, s.value.v, q, MPFR_RNDN);
        break;
      }
      default: {
        static const int radicands[] = {2, 3, 5, 6, 7, 10};
        const int r = radicands[uniform(0, 5)];
        s.text = "sqrt(" + std::to_string(r) + ")";
        mpfr_set_si(s.value.v, r, MPFR_RNDN);
        mpfr_sqrt(s.value.v, s.value.v, MPFR_RNDN);
        break;
      }
    }
    return s;
  }

  // depth bounds nesting; nested roots are limited to keep towers small.
  Sample expr(int depth, int roots = 1) {
    if (depth == 0 || uniform(0, 3) == 0) return leaf();
    const int op = uniform(0, roots > 0 ? 4 : 3);
    if (op == 4) {
      Sample a = expr(depth - 1, 0);
      if (a.value.sign() < 0) {
        a.text = "(0-" + a.text + ")";
        mpfr_neg(a.value.v, a.value.v, MPFR_RNDN);
      }
      Sample s;
      s.text = "sqrt(" + a.text + ")";
      mpfr_sqrt(s.value.v, a.value.v, MPFR_RNDN);
      return s;
    }
    Sample a = expr(depth - 1, roots);
    Sample b = expr(depth - 1, roots);
    Sample s;
    static const char* ops = "+-*/";
    char c = ops[op];
    if (c == '/' && !b.value.exceeds(30)) c = '+';
    s.text = "(" + a.text + c + b.text + ")";
    switch (c) {
      case '+': mpfr_add(s.value.v, a.value.v, b.value.v, MPFR_RNDN); break;
      case '-': mpfr_sub(s.value.v, a.value.v, b.value.v, MPFR_RNDN); break;
      case '*': mpfr_mul(s.value.v, a.value.v, b.value.v, MPFR_RNDN); break;
      default: mpfr_div(s.value.v, a.value.v, b.value.v, MPFR_RNDN); break;
    }
    return s;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Continued-fraction convergents of sqrt(n) for a non-square integer n,
// by the classical periodic expansion (integer arithmetic only).
inline std::vector<mpq_class> sqrt_convergents(long n, int count) {
  const long a0 = static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
  std::vector<mpq_class> out;
  mpz_class h_prev = 1, h = a0, k_prev = 0, k = 1;
  out.emplace_back(h, k);
  long m = 0, d = 1, a = a0;
  while (static_cast<int>(out.size()) < count) {
    m = d * a - m;
    d = (n - m * m) / d;
    a = (a0 + m) / d;
    mpz_class h2 = a * h + h_prev, k2 = a * k + k_prev;
    h_prev = h; h = h2; k_prev = k; k = k2;
    out.emplace_back(h, k);
  }
  return out;
}

// Brute-force count of exact unit pairs, independent of the verifier's scan.
inline std::size_t brute_unit_pairs(const bqw::WitnessSet& w) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    for (std::size_t j = i + 1; j < w.points.size(); ++j) {
      if (bqw::geom::dist_sq(w.points[i], w.points[j]) == Number(1)) ++c;
    }
  }
  return c;
}

// Every declared edge recomputed directly.
inline bool edges_exact(const bqw::WitnessSet& w) {
  for (const auto& [a, b] : w.unit_edges) {
    if (bqw::geom::dist_sq(w.points[static_cast<std::size_t>(a)], w.points[static_cast<std::size_t>(b)]) !=
        Number(1)) {
      return false;
    }
  }
  return true;
}

inline Point pt(std::initializer_list<Number> xs) { return Point(xs); }

inline Number q(long p, long d) { return Number::rational(p, d); }

// Depth-first search for the first derivation node with the given tag.
inline const bqw::GadgetNode* find_node(const bqw::GadgetNode& n, const std::string& tag) {
  if (n.figure == tag) return &n;
  for (const auto& c : n.children) {
    if (auto* r = find_node(c, tag)) return r;
  }
  return nullptr;
}

inline std::string param(const bqw::GadgetNode& n, const std::string& key) {
  for (const auto& [k, v] : n.params) {
    if (k == key) return v;
  }
  return {};
}

}  // namespace testsupport
