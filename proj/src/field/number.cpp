#include "field/number.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"

namespace bqw::field {

namespace {
constexpr int kMaxDepth = 64;
std::atomic<std::size_t> g_radicands{0};
}  // namespace

struct Join;

class TowerNode {
 public:
  const TowerNode* parent = nullptr;
  int depth = 0;
  std::optional<Number> radicand_;  // empty at the root
  const Number& radicand() const { return *radicand_; }
  bool rational_radicand = true;
  mpq_class radicand_q;
  bool all_rational = true;
  std::vector<const TowerNode*> chain;  // chain[i] has depth i + 1
  long double root_fast = 0;
  std::string root_expr;

  mutable std::mutex mu;
  mutable std::map<mpfr_prec_t, Interval> roots;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const Terms>> products;
  mutable std::map<std::string, std::unique_ptr<TowerNode>> children;
  mutable std::unordered_map<const TowerNode*, std::shared_ptr<const Join>> joins;

  const TowerNode* ancestor(int d) const;
};

namespace {

const TowerNode* root_node() {
  static const TowerNode* root = new TowerNode();
  return root;
}

}  // namespace

const TowerNode* TowerNode::ancestor(int d) const { return d == 0 ? root_node() : chain[d - 1]; }

// Re-expression of tower B inside a tower `merged` extending tower A.
// Levels of B below `prefix` are shared with A; higher levels map to images.
struct Join {
  const TowerNode* merged = nullptr;
  int prefix = 0;
  std::vector<Number> images;
  mutable std::mutex mu;
  mutable std::map<std::uint64_t, Number> mask_images;
};

class NumberAccess {
 public:
  static Number make(const TowerNode* t, Terms&& terms);
  static Number basis(const TowerNode* t, int level);
  static const Terms& terms_of(const Number& n) { return n.terms(); }
  static Number inverse(const Number& x);
  static std::pair<Number, Number> split(const Number& x, int level);
  static Terms mul_terms(const TowerNode* t, const Terms& a, const Terms& b);
  static std::shared_ptr<const Terms> monomial_product(const TowerNode* t, std::uint64_t a,
                                                       std::uint64_t b);
  static const TowerNode* intern_child(const TowerNode* t, const Number& r);
  static std::shared_ptr<const Join> join(const TowerNode* a, const TowerNode* b);
  static Terms lift(const Terms& t, const Join& j);
  static Number mask_image(const Join& j, std::uint64_t mask);
  static std::optional<Number> sqrt_in(const Number& x, const TowerNode* t, bool extend);
  static Number rational_sqrt(const mpq_class& q);
  static Interval root_enclosure(const TowerNode* n, mpfr_prec_t prec);
  static std::string key(const Number& x);
};

namespace {

using NA = NumberAccess;

int top_level(std::uint64_t mask) { return mask == 0 ? 0 : 64 - std::countl_zero(mask); }

bool is_ancestor(const TowerNode* a, const TowerNode* b) {
  return a->depth <= b->depth && b->ancestor(a->depth) == a;
}

Terms combine(std::vector<Term>&& raw) {
  std::sort(raw.begin(), raw.end(), [](const Term& x, const Term& y) { return x.mask < y.mask; });
  Terms out;
  out.reserve(raw.size());
  for (auto& t : raw) {
    if (!out.empty() && out.back().mask == t.mask) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && sgn(out.back().coeff) == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && sgn(out.back().coeff) == 0) out.pop_back();
  return out;
}

struct Aligned {
  const TowerNode* tower;
  Terms lifted_b;
  bool use_lifted = false;
};

Aligned align(const Number& x, const Number& y) {
  const TowerNode* tx = x.tower();
  const TowerNode* ty = y.tower();
  if (tx == ty) return {tx, {}, false};
  if (is_ancestor(tx, ty)) return {ty, {}, false};
  if (is_ancestor(ty, tx)) return {tx, {}, false};
  auto j = NA::join(tx, ty);
  return {j->merged, NA::lift(y.terms(), *j), true};
}

const mpq_class& radicand_q(const TowerNode* t, int level) { return t->chain[level]->radicand_q; }

}  // namespace

Number NumberAccess::make(const TowerNode* t, Terms&& terms) {
  if (terms.empty()) return Number();
  std::uint64_t all = 0;
  for (const auto& term : terms) all |= term.mask;
  return Number(t->ancestor(top_level(all)), std::make_shared<const Terms>(std::move(terms)));
}

Number NumberAccess::basis(const TowerNode* t, int level) {
  Terms terms;
  terms.push_back({std::uint64_t{1} << level, mpq_class(1)});
  return Number(t->ancestor(level + 1), std::make_shared<const Terms>(std::move(terms)));
}

namespace {

// Integer accumulators keyed by mask, reused across calls on the same thread.
struct MaskAccumulator {
  std::vector<std::int32_t> slots;
  std::vector<std::uint64_t> masks;
  std::vector<mpz_class> vals;
  std::size_t used = 0;

  void reset(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    slots.assign(cap, -1);
    masks.clear();
    used = 0;
  }
  mpz_class& at(std::uint64_t mask) {
    const std::size_t m = slots.size() - 1;
    std::size_t h = static_cast<std::size_t>((mask * 0x9E3779B97F4A7C15ULL) >> 17) & m;
    while (slots[h] >= 0) {
      if (masks[static_cast<std::size_t>(slots[h])] == mask) return vals[static_cast<std::size_t>(slots[h])];
      h = (h + 1) & m;
    }
    slots[h] = static_cast<std::int32_t>(used);
    masks.push_back(mask);
    if (vals.size() <= used) vals.emplace_back();
    mpz_set_ui(vals[used].get_mpz_t(), 0);
    return vals[used++];
  }
};

// Coefficients as integers over one common denominator.
void to_integers(const Terms& a, std::vector<mpz_class>& out, mpz_class& den) {
  den = 1;
  for (const auto& t : a) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  out.resize(std::max(out.size(), a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    mpz_divexact(out[i].get_mpz_t(), den.get_mpz_t(), a[i].coeff.get_den_mpz_t());
    mpz_mul(out[i].get_mpz_t(), out[i].get_mpz_t(), a[i].coeff.get_num_mpz_t());
  }
}

bool integer_radicands(const TowerNode* t) {
  for (const TowerNode* c : t->chain) {
    if (mpz_cmp_ui(c->radicand_q.get_den_mpz_t(), 1) != 0) return false;
  }
  return true;
}

}  // namespace

Terms NumberAccess::mul_terms(const TowerNode* t, const Terms& a, const Terms& b) {
  if (t->all_rational && integer_radicands(t)) {
    thread_local std::vector<mpz_class> ia, ib;
    thread_local mpz_class da, db, c;
    thread_local MaskAccumulator acc;
    const bool square = &a == &b;
    to_integers(a, ia, da);
    if (!square) to_integers(b, ib, db);
    const auto& jb = square ? ia : ib;
    const Terms& tb = square ? a : b;
    acc.reset(a.size() * tb.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = square ? i : 0; j < tb.size(); ++j) {
        mpz_mul(c.get_mpz_t(), ia[i].get_mpz_t(), jb[j].get_mpz_t());
        if (square && j != i) mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), 1);
        std::uint64_t both = a[i].mask & tb[j].mask;
        while (both) {
          mpz_mul(c.get_mpz_t(), c.get_mpz_t(), radicand_q(t, std::countr_zero(both)).get_num_mpz_t());
          both &= both - 1;
        }
        mpz_class& slot = acc.at(a[i].mask ^ tb[j].mask);
        mpz_add(slot.get_mpz_t(), slot.get_mpz_t(), c.get_mpz_t());
      }
    }
    mpz_class den = square ? mpz_class(da * da) : mpz_class(da * db);
    std::vector<std::size_t> order(acc.used);
    for (std::size_t k = 0; k < acc.used; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return acc.masks[x] < acc.masks[y]; });
    Terms out;
    out.reserve(acc.used);
    for (std::size_t k : order) {
      if (sgn(acc.vals[k]) == 0) continue;
      mpq_class q;
      mpz_set(q.get_num_mpz_t(), acc.vals[k].get_mpz_t());
      mpz_set(q.get_den_mpz_t(), den.get_mpz_t());
      q.canonicalize();
      out.push_back({acc.masks[k], std::move(q)});
    }
    return out;
  }
  std::vector<Term> raw;
  raw.reserve(a.size() * b.size());
  if (t->all_rational) {
    for (const auto& ta : a) {
      for (const auto& tb : b) {
        mpq_class c = ta.coeff * tb.coeff;
        std::uint64_t both = ta.mask & tb.mask;
        while (both) {
          int i = std::countr_zero(both);
          c *= radicand_q(t, i);
          both &= both - 1;
        }
        raw.push_back({ta.mask ^ tb.mask, std::move(c)});
      }
    }
  } else {
    for (const auto& ta : a) {
      for (const auto& tb : b) {
        if ((ta.mask & tb.mask) == 0) {
          raw.push_back({ta.mask | tb.mask, ta.coeff * tb.coeff});
          continue;
        }
        auto prod = monomial_product(t, ta.mask, tb.mask);
        mpq_class c = ta.coeff * tb.coeff;
        for (const auto& p : *prod) raw.push_back({p.mask, c * p.coeff});
      }
    }
  }
  return combine(std::move(raw));
}

std::shared_ptr<const Terms> NumberAccess::monomial_product(const TowerNode* t, std::uint64_t a,
                                                            std::uint64_t b) {
  if (a > b) std::swap(a, b);
  const TowerNode* owner = t->ancestor(top_level(a | b));
  const auto k = std::make_pair(a, b);
  {
    std::lock_guard lock(owner->mu);
    auto it = owner->products.find(k);
    if (it != owner->products.end()) return it->second;
  }
  std::uint64_t both = a & b;
  Number r(1);
  while (both) {
    int i = std::countr_zero(both);
    r = r * owner->chain[i]->radicand();
    both &= both - 1;
  }
  Terms unit;
  unit.push_back({a ^ b, mpq_class(1)});
  auto out = std::make_shared<const Terms>(mul_terms(owner, r.terms(), unit));
  std::lock_guard lock(owner->mu);
  return owner->products.emplace(k, out).first->second;
}

std::pair<Number, Number> NumberAccess::split(const Number& x, int level) {
  const std::uint64_t bit = std::uint64_t{1} << (level - 1);
  Terms a, b;
  for (const auto& t : x.terms()) {
    if (t.mask & bit) {
      b.push_back({t.mask & ~bit, t.coeff});
    } else {
      a.push_back(t);
    }
  }
  const TowerNode* below = x.tower()->ancestor(std::min(level - 1, x.tower_depth()));
  return {make(below, std::move(a)), make(below, std::move(b))};
}

Number NumberAccess::inverse(const Number& x) {
  if (x.is_zero()) throw DomainError("division by zero");
  if (x.is_rational()) return Number(mpq_class(1) / x.rational_value());
  const int level = x.tower_depth();
  if (x.term_count() == 1) {
    // c * rho_m has inverse rho_m / (c * prod r_i).
    const Term& t = x.terms().front();
    Number denom(t.coeff);
    std::uint64_t m = t.mask;
    while (m) {
      denom = denom * x.tower()->chain[std::countr_zero(m)]->radicand();
      m &= m - 1;
    }
    Terms mono;
    mono.push_back({t.mask, mpq_class(1)});
    return make(x.tower(), std::move(mono)) * inverse(denom);
  }
  auto [a, b] = split(x, level);
  const Number& r = x.tower()->radicand();
  Number conj = a - b * basis(x.tower(), level - 1);
  Number den = a * a - b * b * r;
  return conj * inverse(den);
}

std::string NumberAccess::key(const Number& x) {
  std::string k;
  for (const auto& t : x.terms()) {
    k += std::to_string(t.mask);
    k += ':';
    k += t.coeff.get_str();
    k += ';';
  }
  return k;
}

const TowerNode* NumberAccess::intern_child(const TowerNode* t, const Number& r) {
  if (t->depth >= kMaxDepth) throw Error("quadratic tower depth limit exceeded");
  std::string k = key(r);
  std::lock_guard lock(t->mu);
  auto it = t->children.find(k);
  if (it != t->children.end()) return it->second.get();
  auto node = std::make_unique<TowerNode>();
  node->parent = t;
  node->depth = t->depth + 1;
  node->radicand_ = r;
  node->rational_radicand = r.is_rational();
  if (node->rational_radicand) node->radicand_q = r.rational_value();
  node->all_rational = t->all_rational && node->rational_radicand;
  node->chain = t->chain;
  node->chain.push_back(node.get());
  node->root_fast = std::sqrt(static_cast<long double>(r.approx_fast()));
  node->root_expr = "sqrt(" + r.to_expr() + ")";
  ++g_radicands;
  return t->children.emplace(std::move(k), std::move(node)).first->second.get();
}

Number NumberAccess::mask_image(const Join& j, std::uint64_t mask) {
  {
    std::lock_guard lock(j.mu);
    auto it = j.mask_images.find(mask);
    if (it != j.mask_images.end()) return it->second;
  }
  const std::uint64_t low_mask = j.prefix >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << j.prefix) - 1;
  Number out;
  {
    Terms low;
    low.push_back({mask & low_mask, mpq_class(1)});
    out = make(j.merged, std::move(low));
  }
  std::uint64_t high = mask & ~low_mask;
  while (high) {
    int i = std::countr_zero(high);
    out = out * j.images[i - j.prefix];
    high &= high - 1;
  }
  std::lock_guard lock(j.mu);
  return j.mask_images.emplace(mask, out).first->second;
}

Terms NumberAccess::lift(const Terms& t, const Join& j) {
  const std::uint64_t low_mask = j.prefix >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << j.prefix) - 1;
  std::vector<Term> raw;
  bool touched = false;
  for (const auto& term : t) {
    if ((term.mask & ~low_mask) == 0) {
      raw.push_back(term);
      continue;
    }
    touched = true;
    Number img = mask_image(j, term.mask);
    for (const auto& it : img.terms()) raw.push_back({it.mask, term.coeff * it.coeff});
  }
  if (!touched) return raw;
  return combine(std::move(raw));
}

std::shared_ptr<const Join> NumberAccess::join(const TowerNode* a, const TowerNode* b) {
  {
    std::lock_guard lock(a->mu);
    auto it = a->joins.find(b);
    if (it != a->joins.end()) return it->second;
  }
  int common = 0;
  const int lim = std::min(a->depth, b->depth);
  while (common < lim && a->chain[common] == b->chain[common]) ++common;

  auto j = std::make_shared<Join>();
  j->prefix = common;
  j->merged = a;
  for (int i = common; i < b->depth; ++i) {
    const Number& r = b->chain[i]->radicand();
    Number mapped = make(j->merged, lift(r.terms(), *j));
    auto s = sqrt_in(mapped, j->merged, false);
    if (s) {
      if (s->sign() < 0) s = -*s;
      j->images.push_back(*s);
    } else {
      j->merged = intern_child(j->merged, mapped);
      j->images.push_back(basis(j->merged, j->merged->depth - 1));
    }
    j->mask_images.clear();
  }
  std::lock_guard lock(a->mu);
  return a->joins.emplace(b, j).first->second;
}

Number NumberAccess::rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) throw DomainError("square root of a negative number");
  if (sgn(q) == 0) return Number();
  mpz_class v = q.get_num() * q.get_den();
  mpz_class outside = 1;
  std::vector<mpz_class> factors;
  for (unsigned long p = 2; p <= 10000; p += (p == 2 ? 1 : 2)) {
    mpz_class pp(p);
    if (pp * pp > v) break;
    int e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
      ++e;
    }
    for (int k = 0; k < e / 2; ++k) outside *= p;
    if (e % 2) factors.push_back(pp);
  }
  if (v > 1) {
    if (mpz_perfect_square_p(v.get_mpz_t())) {
      mpz_class s;
      mpz_sqrt(s.get_mpz_t(), v.get_mpz_t());
      outside *= s;
    } else {
      factors.push_back(v);
    }
  }
  std::sort(factors.begin(), factors.end());
  Number out(mpq_class(outside, q.get_den()));
  for (const auto& f : factors) out = out * basis(intern_child(root_node(), Number(f)), 0);
  return out;
}

// A square root of x inside tower t (x must live in t or an ancestor), or
// nullopt when x is not a square there. With `extend`, rational square roots
// may adjoin new radicands.
std::optional<Number> NumberAccess::sqrt_in(const Number& x, const TowerNode* t, bool extend) {
  if (x.is_zero()) return Number();
  if (t->depth == 0) {
    const mpq_class q = x.rational_value();
    if (sgn(q) < 0) return std::nullopt;
    if (mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t())) {
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
      mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
      return Number(mpq_class(n, d));
    }
    if (extend) return rational_sqrt(q);
    return std::nullopt;
  }
  if (x.tower_depth() < t->depth) {
    // x has no component along the top radicand.
    auto direct = sqrt_in(x, t->parent, extend);
    if (direct) return direct;
    auto scaled = sqrt_in(x * t->radicand(), t->parent, extend);
    if (scaled) return *scaled * basis(t, t->depth - 1) / t->radicand();
    return std::nullopt;
  }
  auto [a, b] = split(x, t->depth);
  const Number& r = t->radicand();
  if (b.is_zero()) return sqrt_in(a, t, extend);
  Number norm = a * a - b * b * r;
  auto s = sqrt_in(norm, t->parent, false);
  if (!s) return std::nullopt;
  for (int side : {1, -1}) {
    Number c2 = (side > 0 ? a + *s : a - *s) / 2;
    if (c2.is_zero()) continue;
    auto c = sqrt_in(c2, t->parent, extend);
    if (!c) continue;
    Number e = b / (*c * 2);
    return *c + e * basis(t, t->depth - 1);
  }
  return std::nullopt;
}

Interval NumberAccess::root_enclosure(const TowerNode* n, mpfr_prec_t prec) {
  {
    std::lock_guard lock(n->mu);
    auto it = n->roots.find(prec);
    if (it != n->roots.end()) return it->second;
  }
  Interval root = n->radicand().enclosure(prec + 8).sqrt();
  std::lock_guard lock(n->mu);
  return n->roots.emplace(prec, root).first->second;
}

// ---------------------------------------------------------------------------

Number::Number() : tower_(root_node()), terms_(nullptr) {}
Number::Number(int v) : Number(mpq_class(v)) {}
Number::Number(long v) : Number(mpq_class(v)) {}
Number::Number(const mpz_class& v) : Number(mpq_class(v)) {}
Number::Number(const mpq_class& v) : tower_(root_node()) {
  if (sgn(v) != 0) {
    Terms t;
    t.push_back({0, v});
    t.back().coeff.canonicalize();
    terms_ = std::make_shared<const Terms>(std::move(t));
  }
}
Number::Number(const TowerNode* tower, std::shared_ptr<const Terms> terms)
    : tower_(tower), terms_(std::move(terms)) {}

Number Number::rational(const mpz_class& p, const mpz_class& q) {
  if (q == 0) throw DomainError("zero denominator");
  mpq_class v(p, q);
  v.canonicalize();
  return Number(v);
}

Number Number::rational(long p, long q) { return rational(mpz_class(p), mpz_class(q)); }

const Terms& Number::terms() const {
  static const Terms empty;
  return terms_ ? *terms_ : empty;
}

int Number::tower_depth() const { return tower_->depth; }

bool Number::is_rational() const { return tower_->depth == 0; }

mpq_class Number::rational_value() const {
  if (!is_rational()) throw PreconditionError("number is not rational");
  return terms_ ? terms_->front().coeff : mpq_class(0);
}

std::optional<mpz_class> Number::as_integer() const {
  if (!is_rational()) return std::nullopt;
  mpq_class q = rational_value();
  if (q.get_den() != 1) return std::nullopt;
  return q.get_num();
}

Number Number::operator-() const {
  if (!terms_) return *this;
  Terms t = *terms_;
  for (auto& term : t) term.coeff = -term.coeff;
  return Number(tower_, std::make_shared<const Terms>(std::move(t)));
}

Number operator+(const Number& a, const Number& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Aligned al = align(a, b);
  const Terms& x = a.terms();
  const Terms& y = al.use_lifted ? al.lifted_b : b.terms();
  Terms out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].mask < y[j].mask)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].mask < x[i].mask) {
      out.push_back(y[j++]);
    } else {
      mpq_class c = x[i].coeff + y[j].coeff;
      if (sgn(c) != 0) out.push_back({x[i].mask, std::move(c)});
      ++i;
      ++j;
    }
  }
  return NA::make(al.tower, std::move(out));
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
  if (a.is_zero() || b.is_zero()) return Number();
  if (a.is_rational() && b.is_rational()) return Number(a.rational_value() * b.rational_value());
  if (a.is_rational() || b.is_rational()) {
    const Number& q = a.is_rational() ? a : b;
    const Number& x = a.is_rational() ? b : a;
    const mpq_class f = q.rational_value();
    Terms t = x.terms();
    for (auto& term : t) term.coeff *= f;
    return NA::make(x.tower(), std::move(t));
  }
  Aligned al = align(a, b);
  const Terms& y = al.use_lifted ? al.lifted_b : b.terms();
  return NA::make(al.tower, NA::mul_terms(al.tower, a.terms(), y));
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) throw DomainError("division by zero");
  if (a.is_zero()) return Number();
  if (b.is_rational()) return a * Number(mpq_class(1) / b.rational_value());
  return a * NA::inverse(b);
}

bool operator==(const Number& a, const Number& b) {
  if (a.tower() == b.tower()) {
    const Terms& x = a.terms();
    const Terms& y = b.terms();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].mask != y[i].mask || x[i].coeff != y[i].coeff) return false;
    }
    return true;
  }
  return (a - b).is_zero();
}

std::strong_ordering operator<=>(const Number& a, const Number& b) {
  const int s = (a - b).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {
std::mutex g_sqrt_mu;
std::unordered_map<std::string, Number>& sqrt_memo() {
  static auto* memo = new std::unordered_map<std::string, Number>();
  return *memo;
}
}  // namespace

Number Number::sqrt() const {
  if (is_zero()) return Number();
  const int s = sign();
  if (s < 0) throw DomainError("square root of a negative number");
  if (is_rational()) {
    const mpq_class q = rational_value();
    if (mpz_perfect_square_p(q.get_num_mpz_t()) && mpz_perfect_square_p(q.get_den_mpz_t())) {
      return *NA::sqrt_in(*this, tower_, false);
    }
  }
  std::ostringstream k;
  k << static_cast<const void*>(tower_) << '|' << NA::key(*this);
  {
    std::lock_guard lock(g_sqrt_mu);
    auto it = sqrt_memo().find(k.str());
    if (it != sqrt_memo().end()) return it->second;
  }
  Number root;
  if (is_rational()) {
    root = NA::rational_sqrt(rational_value());
  } else if (auto found = NA::sqrt_in(*this, tower_, true)) {
    root = *found;
    if (root.sign() < 0) root = -root;
  } else {
    const TowerNode* node = NA::intern_child(tower_, *this);
    root = NA::basis(node, node->depth - 1);
  }
  std::lock_guard lock(g_sqrt_mu);
  return sqrt_memo().emplace(k.str(), root).first->second;
}

Number Number::abs() const { return sign() < 0 ? -*this : *this; }

Interval Number::enclosure(mpfr_prec_t prec) const {
  Interval sum = Interval::from_rational(mpq_class(0), prec);
  for (const auto& t : terms()) {
    Interval mono = Interval::from_rational(t.coeff, prec);
    std::uint64_t m = t.mask;
    while (m) {
      mono = mono * NA::root_enclosure(tower_->chain[std::countr_zero(m)], prec);
      m &= m - 1;
    }
    sum = sum + mono;
  }
  return sum;
}

int Number::sign() const {
  if (!terms_) return 0;
  if (is_rational()) return sgn(terms_->front().coeff);
  for (mpfr_prec_t prec = 64; prec <= (1 << 20); prec *= 2) {
    const int s = enclosure(prec).certain_sign();
    if (s != 0) return s;
  }
  throw Error("sign could not be resolved");
}

double Number::approx_fast() const {
  long double sum = 0;
  for (const auto& t : terms()) {
    long double mono = t.coeff.get_d();
    std::uint64_t m = t.mask;
    while (m) {
      mono *= tower_->chain[std::countr_zero(m)]->root_fast;
      m &= m - 1;
    }
    sum += mono;
  }
  return static_cast<double>(sum);
}

double Number::to_double() const {
  if (is_rational()) return rational_value().get_d();
  return enclosure(128).midpoint();
}

std::string Number::approx(int digits) const {
  if (digits < 0) throw PreconditionError("negative digit count");
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpz_class n;
  if (is_rational()) {
    mpq_class v = rational_value() * scale;
    // round half away from zero
    mpz_class num = ::abs(v.get_num()) * 2 + v.get_den();
    mpz_class den = v.get_den() * 2;
    mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (sgn(v) < 0) n = -n;
  } else {
    const double mag = std::fabs(approx_fast()) + 1.0;
    mpfr_prec_t prec = static_cast<mpfr_prec_t>((digits + 10) * 3.33 + std::log2(mag) + 64);
    for (;; prec *= 2) {
      Interval iv = enclosure(prec);
      Mpfr lo(prec + 64), hi(prec + 64);
      mpfr_mul_z(lo.get(), iv.lo().get(), scale.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(hi.get(), iv.hi().get(), scale.get_mpz_t(), MPFR_RNDU);
      Mpfr w(prec + 64);
      mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
      if (mpfr_cmp_d(w.get(), 0.25) <= 0) {
        Mpfr mid(prec + 64);
        mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
        mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
        mpfr_get_z(n.get_mpz_t(), mid.get(), MPFR_RNDNA);
        break;
      }
      if (prec > (1 << 22)) throw Error("approximation did not converge");
    }
  }
  const bool neg = sgn(n) < 0;
  std::string digits_str = mpz_class(::abs(n)).get_str();
  if (digits == 0) return (neg ? "-" : "") + digits_str;
  if (static_cast<int>(digits_str.size()) <= digits) {
    digits_str.insert(0, static_cast<std::size_t>(digits + 1) - digits_str.size(), '0');
  }
  digits_str.insert(digits_str.size() - static_cast<std::size_t>(digits), ".");
  return (neg ? "-" : "") + digits_str;
}

std::string Number::to_expr() const {
  if (!terms_) return "0";
  // Factors and terms are sorted by text so the output does not depend on
  // the order in which radicands entered the tower.
  struct Mono {
    std::vector<std::string> factors;
    mpq_class coeff;
  };
  std::vector<Mono> monos;
  for (const auto& t : *terms_) {
    Mono mo{{}, t.coeff};
    for (std::uint64_t m = t.mask; m; m &= m - 1) mo.factors.push_back(tower_->chain[std::countr_zero(m)]->root_expr);
    std::sort(mo.factors.begin(), mo.factors.end());
    monos.push_back(std::move(mo));
  }
  std::sort(monos.begin(), monos.end(), [](const Mono& a, const Mono& b) {
    if (a.factors.size() != b.factors.size()) return a.factors.size() < b.factors.size();
    return a.factors < b.factors;
  });
  std::string out;
  bool first = true;
  for (const auto& mo : monos) {
    mpq_class c = mo.coeff;
    const bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    first = false;
    std::string mono;
    for (const auto& f : mo.factors) {
      if (!mono.empty()) mono += "*";
      mono += f;
    }
    if (mono.empty()) {
      out += c.get_str();
    } else if (c == 1) {
      out += mono;
    } else if (c.get_den() == 1) {
      out += c.get_str() + "*" + mono;
    } else if (c.get_num() == 1) {
      out += mono + "/" + c.get_den().get_str();
    } else {
      out += c.get_num().get_str() + "*" + mono + "/" + c.get_den().get_str();
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Number& n) { return os << n.to_expr(); }

mpz_class floor(const Number& a) {
  if (a.is_rational()) {
    mpq_class q = a.rational_value();
    mpz_class out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
  }
  // Irrational values are never integers, so refinement terminates.
  for (mpfr_prec_t prec = 64;; prec *= 2) {
    Interval iv = a.enclosure(prec);
    mpz_class lo, hi;
    mpfr_get_z(lo.get_mpz_t(), iv.lo().get(), MPFR_RNDD);
    mpfr_get_z(hi.get_mpz_t(), iv.hi().get(), MPFR_RNDD);
    if (lo == hi) return lo;
    if (prec > (1 << 22)) throw Error("floor did not converge");
  }
}

mpz_class next_integer_above(const Number& a) { return floor(a) + 1; }

std::size_t registered_radicand_count() { return g_radicands.load(); }

}  // namespace bqw::field
