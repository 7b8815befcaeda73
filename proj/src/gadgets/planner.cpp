#include "gadgets/planner.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <queue>
#include <sstream>

#include "errors.hpp"

namespace bqw::gadgets {

namespace {

constexpr double kInf = 1e300;
constexpr long kMaxInteger = 1000000;

double add_cost(std::initializer_list<double> xs) {
  double s = 0;
  for (double x : xs) s += x;
  return std::min(s, kInf);
}

mpz_class measure(const mpq_class& v) { return v.get_num() * v.get_den(); }

std::vector<long> divisors(long v) {
  std::vector<long> out;
  for (long d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string ptr_key(const void* p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

bool perfect_square(const mpq_class& t, mpq_class* root) {
  if (sgn(t) < 0) return false;
  if (!mpz_perfect_square_p(t.get_num_mpz_t()) || !mpz_perfect_square_p(t.get_den_mpz_t())) return false;
  mpz_class a, b;
  mpz_sqrt(a.get_mpz_t(), t.get_num_mpz_t());
  mpz_sqrt(b.get_mpz_t(), t.get_den_mpz_t());
  *root = mpq_class(a, b);
  root->canonicalize();
  return true;
}

void cf_terms(mpq_class x, int count, std::vector<mpz_class>& out) {
  for (int i = 0; i < count; ++i) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    out.push_back(a);
    x -= a;
    if (sgn(x) == 0) return;
    x = 1 / x;
  }
}

// Cheapest compositions for small rationals p/q (p, q <= kMax), found by a
// Dijkstra-style search over gadget hyperedges. Every gadget costs more than
// each of its inputs, so settled choices form a DAG.
class RationalTable {
 public:
  static constexpr long kMax = 60;
  enum class Kind : std::uint8_t { None, Unit, Multiple, Twice, Divide, ScaleUp2, Bound, Ratio };
  struct Choice {
    Kind kind = Kind::None;
    std::array<int, 4> in = {-1, -1, -1, -1};
    int k = 0;
  };

  explicit RationalTable(int n);

  // -1 when p/q (reduced) is outside the table.
  static int index(long p, long q) {
    const long g = std::gcd(p, q);
    p /= g;
    q /= g;
    if (p < 1 || q < 1 || p > kMax || q > kMax) return -1;
    return static_cast<int>(p * (kMax + 1) + q);
  }
  static long num(int i) { return i / (kMax + 1); }
  static long den(int i) { return i % (kMax + 1); }
  const Choice& choice(int i) const { return choice_[static_cast<std::size_t>(i)]; }
  double cost(int i) const { return cost_[static_cast<std::size_t>(i)]; }
  // Indices of the cheapest entries, cheapest first.
  const std::vector<int>& cheapest() const { return cheapest_; }

 private:
  struct Edge {
    Choice c;
    int target = -1;
    int pending = 0;
  };
  double eval(const Edge& e) const;
  void add_edge(Choice c, int target);

  int n_;
  std::vector<double> cost_;
  std::vector<Choice> choice_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> users_;
  std::vector<int> cheapest_;
};

double su_cost(int n, double c) { return add_cost({2.0 * n + 1, (4.0 * n + n * (n - 1.0) + 1) * c}); }
double bound_cost(int n, double c) {
  if (n == 2) return c;
  return add_cost({static_cast<double>(n), n * (n - 1) / 2.0 * su_cost(n, c), 2.0 * n * c});
}
double double_cost(int n, double c) { return add_cost({2, 2 * c, su_cost(n, su_cost(n, c)), bound_cost(n, c)}); }

double RationalTable::eval(const Edge& e) const {
  auto c = [&](int slot) { return cost_[static_cast<std::size_t>(e.c.in[static_cast<std::size_t>(slot)])]; };
  const int k = e.c.k;
  switch (e.c.kind) {
    case Kind::Multiple: return add_cost({k - 1.0, k * c(0), (k - 1.0) * double_cost(n_, c(0))});
    case Kind::Twice: return double_cost(n_, c(0));
    case Kind::Divide: return add_cost({3, c(0), 2 * c(1), 2 * c(2), 2 * c(3)});
    case Kind::ScaleUp2: return su_cost(n_, su_cost(n_, c(0)));
    case Kind::Bound: return bound_cost(n_, c(0));
    case Kind::Ratio: return add_cost({3, 2 * c(0), 2 * c(1), 2 * c(2), c(3)});
    case Kind::None:
    case Kind::Unit: break;
  }
  return kInf;
}

void RationalTable::add_edge(Choice c, int target) {
  if (target < 0) return;
  std::vector<int> ins;
  for (int i : c.in) {
    if (i == -1) continue;
    if (i == target) return;
    if (std::find(ins.begin(), ins.end(), i) == ins.end()) ins.push_back(i);
  }
  const int id = static_cast<int>(edges_.size());
  edges_.push_back({c, target, static_cast<int>(ins.size())});
  for (int i : ins) users_[static_cast<std::size_t>(i)].push_back(id);
}

RationalTable::RationalTable(int n) : n_(n) {
  const std::size_t size = static_cast<std::size_t>((kMax + 1) * (kMax + 1));
  cost_.assign(size, kInf);
  choice_.assign(size, {});
  users_.assign(size, {});
  auto integer = [](long v) { return index(v, 1); };
  for (long p = 1; p <= kMax; ++p) {
    for (long q = 1; q <= kMax; ++q) {
      if (std::gcd(p, q) != 1) continue;
      const int w = index(p, q);
      for (long k = 2; k <= kMax; ++k) {
        add_edge({Kind::Multiple, {w, -1, -1, -1}, static_cast<int>(k)}, index(k * p, q));
        // m: least integer with w < 2km
        const long m = p / (2 * k * q) + 1;
        const int a = integer((k - 1) * m), b = integer(m), c = integer(k * m);
        if (a >= 0 && b >= 0 && c >= 0) {
          add_edge({Kind::Divide, {w, a, b, c}, static_cast<int>(k)}, index(p, q * k));
        }
      }
      add_edge({Kind::Twice, {w, -1, -1, -1}, 2}, index(2 * p, q));
      add_edge({Kind::ScaleUp2, {w, -1, -1, -1}, 0}, index(p * (2L * n + 2), q * n));
      if (n > 2) add_edge({Kind::Bound, {w, -1, -1, -1}, 0}, index(2 * p, q * n));
      // a * b / c with small integers a != c
      for (long a = 1; a <= 12; ++a) {
        for (long c = 1; c <= 12; ++c) {
          if (a == c) continue;
          const long m = p / (2 * c * q) + 1;
          const int ma = integer(m * a), mc = integer(m * c), mg = integer(m * std::labs(a - c));
          if (ma < 0 || mc < 0 || mg < 0) continue;
          add_edge({Kind::Ratio, {ma, mc, mg, w}, static_cast<int>(m)}, index(a * p, c * q));
        }
      }
    }
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int one = index(1, 1);
  cost_[static_cast<std::size_t>(one)] = 0;
  choice_[static_cast<std::size_t>(one)].kind = Kind::Unit;
  pq.push({0, one});
  std::vector<bool> settled(size, false);
  while (!pq.empty()) {
    auto [c, u] = pq.top();
    pq.pop();
    if (settled[static_cast<std::size_t>(u)]) continue;
    settled[static_cast<std::size_t>(u)] = true;
    for (int id : users_[static_cast<std::size_t>(u)]) {
      Edge& e = edges_[static_cast<std::size_t>(id)];
      if (--e.pending != 0) continue;
      const double nc = eval(e);
      const auto t = static_cast<std::size_t>(e.target);
      if (!settled[t] && nc < cost_[t]) {
        cost_[t] = nc;
        choice_[t] = e.c;
        pq.push({nc, e.target});
      }
    }
  }
  edges_.clear();
  users_.clear();
  for (std::size_t i = 0; i < size; ++i) {
    if (cost_[i] < kInf) cheapest_.push_back(static_cast<int>(i));
  }
  std::stable_sort(cheapest_.begin(), cheapest_.end(),
                   [&](int a, int b) { return cost_[static_cast<std::size_t>(a)] < cost_[static_cast<std::size_t>(b)]; });
  cheapest_.resize(std::min<std::size_t>(cheapest_.size(), 8));
}

const RationalTable& rational_table(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RationalTable>> tables;
  std::lock_guard lock(mu);
  auto& t = tables[n];
  if (!t) t = std::make_unique<RationalTable>(n);
  return *t;
}

}  // namespace

const char* fig_tag(Fig f) {
  switch (f) {
    case Fig::Unit: return "unit";
    case Fig::ScaleUp: return "Fig1";
    case Fig::Bound: return "Fig2";
    case Fig::Double: return "Fig3";
    case Fig::Multiple: return "Fig4";
    case Fig::Divide: return "Fig5";
    case Fig::Approx: return "Fig6";
    case Fig::Pyth: return "Fig7";
    case Fig::Diff: return "Fig8";
    case Fig::Sum: return "Fig8";
    case Fig::Ratio: return "Fig9";
    case Fig::Sqrt: return "sqrt";
  }
  return "?";
}

std::vector<mpq_class> sqrt_convergents(const Number& d2, int count) {
  std::vector<mpz_class> terms;
  mpq_class root;
  if (d2.is_rational() && perfect_square(d2.rational_value(), &root)) {
    cf_terms(root, count, terms);
  } else {
    field::Interval iv = d2.enclosure(1024).sqrt();
    mpq_class lo, hi;
    mpfr_get_q(lo.get_mpq_t(), iv.lo().get());
    mpfr_get_q(hi.get_mpq_t(), iv.hi().get());
    std::vector<mpz_class> tl, th;
    cf_terms(lo, count, tl);
    cf_terms(hi, count, th);
    // The final agreed term may still differ in the true expansion, so stop
    // one short of the first disagreement.
    std::size_t i = 0;
    while (i < tl.size() && i < th.size() && tl[i] == th[i]) ++i;
    if (i > 0) --i;
    terms.assign(tl.begin(), tl.begin() + static_cast<std::ptrdiff_t>(i));
  }
  std::vector<mpq_class> out;
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  for (const auto& a : terms) {
    mpz_class h = a * h1 + h2;
    mpz_class k = a * k1 + k2;
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    out.emplace_back(h, k);
    out.back().canonicalize();
  }
  return out;
}

Planner::Planner(int n) : n_(n) {
  if (n < 2) throw PreconditionError("dimension must be at least 2");
  su_factor_ = Number::rational(2L * n + 2, n).sqrt();
  unit_ = make(Fig::Unit, Number(1), {}, 0);
}

RecipePtr Planner::make(Fig fig, Number value, std::vector<RecipePtr> parts, double cost, int k,
                        int m, Number eps) {
  auto r = std::make_shared<Recipe>();
  r->fig = fig;
  r->value = std::move(value);
  r->parts = std::move(parts);
  r->cost = std::min(cost, kInf);
  r->k = k;
  r->m = m;
  r->eps = std::move(eps);
  keep_.push_back(r);
  return r;
}

RecipePtr Planner::unit() { return unit_; }

RecipePtr Planner::scale_up(const RecipePtr& d) {
  const std::string key = "su|" + ptr_key(d.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const long pairs = 4L * n_ + static_cast<long>(n_) * (n_ - 1) + 1;
  auto r = make(Fig::ScaleUp, d->value * su_factor_, {d},
                add_cost({2.0 * n_ + 1, static_cast<double>(pairs) * d->cost}));
  return memo_[key] = r;
}

RecipePtr Planner::bound(const RecipePtr& d) {
  const std::string key = "bd|" + ptr_key(d.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  RecipePtr r;
  if (n_ == 2) {
    // |f(x)f(y)| <= d is implied by forcing the distance d itself.
    r = make(Fig::Bound, d->value, {d}, d->cost);
  } else {
    auto su = scale_up(d);
    const double pairs = n_ * (n_ - 1) / 2.0;
    r = make(Fig::Bound, d->value * Number::rational(2, n_), {d, su},
             add_cost({static_cast<double>(n_), pairs * su->cost, 2.0 * n_ * d->cost}));
  }
  return memo_[key] = r;
}

RecipePtr Planner::twice(const RecipePtr& d) {
  const std::string key = "tw|" + ptr_key(d.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto far = scale_up(scale_up(d));
  auto z = bound(d);
  auto r = make(Fig::Double, d->value * 2, {d, far, z}, add_cost({2, 2 * d->cost, far->cost, z->cost}));
  return memo_[key] = r;
}

RecipePtr Planner::multiple(const RecipePtr& d, int k) {
  if (k < 1) throw PreconditionError("multiple needs k >= 1");
  if (k == 1) return d;
  const std::string key = "mu|" + ptr_key(d.get()) + "|" + std::to_string(k);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto dd = twice(d);
  auto r = make(Fig::Multiple, d->value * k, {d, dd},
                add_cost({k - 1.0, k * d->cost, (k - 1.0) * dd->cost}), k);
  return memo_[key] = r;
}

RecipePtr Planner::divide(const RecipePtr& d, int k) {
  if (k < 1) throw PreconditionError("divide needs k >= 1");
  if (k == 1) return d;
  const std::string key = "dv|" + ptr_key(d.get()) + "|" + std::to_string(k);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // least m with d < 2km
  const mpz_class mz = field::floor(d->value / (2 * k)) + 1;
  if (mz > kMaxInteger) throw PreconditionError("divide: apex leg too large");
  const long m = mz.get_si();
  auto outer = rational(mpq_class((k - 1) * m));
  auto leg = rational(mpq_class(m));
  auto big = rational(mpq_class(k * m));
  auto r = make(Fig::Divide, d->value / k, {d, outer, leg, big},
                add_cost({3, d->cost, 2 * outer->cost, 2 * leg->cost, 2 * big->cost}), k,
                static_cast<int>(m));
  return memo_[key] = r;
}

RecipePtr Planner::approx(const Number& dist, const Number& dist_sq, const Number& eps) {
  if (eps.sign() <= 0) throw PreconditionError("approximation needs eps > 0");
  if (dist_sq.sign() <= 0) throw PreconditionError("approximation of coincident points");
  const std::string key = "ap|" + dist_sq.to_expr() + "|" + eps.to_expr();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // r: largest power of 1/2 with r <= eps/2 and r <= dist.
  mpq_class r(1);
  const Number half_eps = eps / 2;
  for (int j = 0;; ++j) {
    if (j > 4000) throw PreconditionError("approximation tolerance too small");
    const Number rn(r);
    if ((rn - half_eps).sign() <= 0 && (rn * rn - dist_sq).sign() <= 0) break;
    r /= 2;
  }
  const mpq_class tol = r / 2;
  RecipePtr best;
  mpq_class best_q;
  int seen = 0;
  for (int count = 32; !best && count <= 4096; count *= 4) {
    for (const auto& q : sqrt_convergents(dist_sq, count)) {
      if (sgn(q) <= 0) continue;
      const mpq_class lo = q - tol, hi = q + tol;
      const bool above_lo = sgn(lo) <= 0 || (dist_sq - Number(lo * lo)).sign() >= 0;
      const bool below_hi = (Number(hi * hi) - dist_sq).sign() >= 0;
      if (!above_lo || !below_hi) continue;
      auto cand = rational(q);
      if (!best || cand->cost < best->cost) {
        best = cand;
        best_q = q;
      }
      if (++seen >= 3) break;
    }
  }
  if (!best) throw Error("no rational approximation found");
  auto rr = rational(r);
  auto out = make(Fig::Approx, dist, {best, rr}, add_cost({1, best->cost, rr->cost}), 0, 0, eps);
  return memo_[key] = out;
}

RecipePtr Planner::pyth(const RecipePtr& a, const RecipePtr& b) {
  if ((a->value - b->value).sign() <= 0) throw PreconditionError("pyth needs a > b");
  const std::string key = "py|" + ptr_key(a.get()) + "|" + ptr_key(b.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto b2 = scaled(b, mpq_class(2));
  const Number v = (a->value * a->value - b->value * b->value).sqrt();
  auto r = make(Fig::Pyth, v, {a, b, b2}, add_cost({2, 2 * a->cost, 2 * b->cost, b2->cost}));
  return memo_[key] = r;
}

RecipePtr Planner::diff(const RecipePtr& a, const RecipePtr& b) {
  if ((a->value - b->value).sign() <= 0) throw PreconditionError("difference needs a > b");
  const std::string key = "df|" + ptr_key(a.get()) + "|" + ptr_key(b.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const mpq_class c2 = 1 - mpq_class(1, n_ * n_);
  auto edge = scale_up(unit_);
  auto lx = leg(a, c2);
  auto ly = leg(b, c2);
  const Number v = a->value - b->value;
  auto chain = approx(v, v * v, b->value);
  const double pairs = n_ * (n_ - 1) / 2.0;
  auto r = make(Fig::Diff, v, {a, b, edge, lx, ly, chain},
                add_cost({static_cast<double>(n_), pairs * edge->cost, n_ * lx->cost, n_ * ly->cost,
                          chain->cost}),
                0, 0, b->value);
  return memo_[key] = r;
}

RecipePtr Planner::sum(const RecipePtr& a, const RecipePtr& b) {
  const std::string key = "sm|" + ptr_key(a.get()) + "|" + ptr_key(b.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const mpq_class c2 = 1 - mpq_class(1, n_ * n_);
  auto edge = scale_up(unit_);
  auto lx = leg(a, c2);
  auto ly = leg(b, c2);
  const Number v = a->value + b->value;
  const Number eps = (a->value < b->value) ? a->value : b->value;
  auto chain = approx(v, v * v, eps);
  const double pairs = n_ * (n_ - 1) / 2.0;
  auto r = make(Fig::Sum, v, {a, b, edge, lx, ly, chain},
                add_cost({static_cast<double>(n_), pairs * edge->cost, n_ * lx->cost, n_ * ly->cost,
                          chain->cost}),
                0, 0, eps);
  return memo_[key] = r;
}

RecipePtr Planner::ratio(const RecipePtr& a, const RecipePtr& b, const RecipePtr& c) {
  if (a->value == c->value) return b;
  const std::string key = "ra|" + ptr_key(a.get()) + "|" + ptr_key(b.get()) + "|" + ptr_key(c.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // least m with b < 2mc
  const mpz_class mz = field::floor(b->value / (c->value * 2)) + 1;
  if (mz > kMaxInteger) throw PreconditionError("ratio: multiplier too large");
  const long m = mz.get_si();
  RecipePtr gap;
  if (a->value.is_rational() && c->value.is_rational()) {
    mpq_class g = a->value.rational_value() - c->value.rational_value();
    gap = rational(sgn(g) < 0 ? mpq_class(-g) : g);
  } else {
    gap = (a->value > c->value) ? diff(a, c) : diff(c, a);
  }
  auto ma = scaled(a, mpq_class(m));
  auto mc = scaled(c, mpq_class(m));
  auto mg = scaled(gap, mpq_class(m));
  auto r = make(Fig::Ratio, a->value * b->value / c->value, {a, b, c, ma, mc, mg},
                add_cost({3, 2 * ma->cost, 2 * mc->cost, 2 * mg->cost, b->cost}), 0,
                static_cast<int>(m));
  return memo_[key] = r;
}

RecipePtr Planner::sqrt_gadget(const RecipePtr& a) {
  const std::string key = "sq|" + ptr_key(a.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (a->value.sign() <= 0) throw PreconditionError("sqrt of a nonpositive distance");
  RecipePtr inner;
  const int cmp = (a->value - Number(1)).sign();
  if (a->value.is_rational()) {
    inner = sqrt_rational(a->value.rational_value());
  } else if (cmp > 0) {
    // sqrt(a) = sqrt((a+1)^2 - (a-1)^2) / 2
    inner = divide(pyth(sum(a, unit_), diff(a, unit_)), 2);
  } else {
    auto recip = ratio(unit_, unit_, a);
    inner = ratio(unit_, unit_, sqrt_gadget(recip));
  }
  auto r = make(Fig::Sqrt, inner->value, {inner}, inner->cost);
  return memo_[key] = r;
}

RecipePtr Planner::rational(const mpq_class& v) {
  if (sgn(v) <= 0) throw PreconditionError("nonpositive rational distance");
  const std::string key = v.get_str();
  if (auto it = rational_memo_.find(key); it != rational_memo_.end()) {
    if (!it->second) throw Error("cyclic rational plan for " + key);
    return it->second;
  }
  if (abs(v.get_num()) > kMaxInteger || v.get_den() > kMaxInteger) {
    throw PreconditionError("rational " + key + " is too large to realize");
  }
  rational_memo_[key] = nullptr;
  RecipePtr best;
  auto consider = [&](const RecipePtr& r) {
    if (r && (!best || r->cost < best->cost)) best = r;
  };
  const long p = v.get_num().get_si();
  const long q = v.get_den().get_si();
  if (const int idx = RationalTable::index(p, q); idx >= 0) {
    const auto& table = rational_table(n_);
    const auto& c = table.choice(idx);
    auto in = [&](int slot) {
      const int i = c.in[static_cast<std::size_t>(slot)];
      return rational(mpq_class(RationalTable::num(i), RationalTable::den(i)));
    };
    using K = RationalTable::Kind;
    switch (c.kind) {
      case K::Unit: best = unit_; break;
      case K::Multiple: best = multiple(in(0), c.k); break;
      case K::Twice: best = twice(in(0)); break;
      case K::Divide: best = divide(in(0), c.k); break;
      case K::ScaleUp2: best = scale_up(scale_up(in(0))); break;
      case K::Bound: best = bound(in(0)); break;
      case K::Ratio: {
        const long a = RationalTable::num(c.in[0]) / c.k;
        const long cc = RationalTable::num(c.in[1]) / c.k;
        best = ratio(rational(mpq_class(a)), in(3), rational(mpq_class(cc)));
        break;
      }
      case K::None: break;
    }
    if (best) {
      rational_memo_[key] = best;
      return best;
    }
  }
  // Integers depend only on smaller integers; other rationals on integers
  // or on rationals of smaller num * den. This keeps the search acyclic.
  const mpz_class mv = measure(v);
  const bool integral = q == 1;
  auto smaller = [&](const mpq_class& w) {
    if (sgn(w) <= 0) return false;
    if (w.get_den() == 1) return !integral || w < v;
    return !integral && measure(w) < mv;
  };

  if (v == 1) {
    best = unit_;
  } else {
    if (integral) consider(multiple(unit_, static_cast<int>(p)));
    for (long j : divisors(p)) {
      if (j == 1 || j > 64 || (q == 1 && j == p)) continue;
      const mpq_class w = v / j;
      consider(multiple(rational(w), static_cast<int>(j)));
      if (j == 2) consider(twice(rational(w)));
    }
    for (long kk : divisors(q)) {
      if (kk == 1 || kk > 64) continue;
      consider(divide(rational(v * kk), static_cast<int>(kk)));
    }
    // v = a*b/c with integers a*b = p, c = q
    for (long a : divisors(p)) {
      const long b = p / a;
      if (a == q) continue;
      const long m = b / (2 * q) + 1;
      const long gap = a > q ? a - q : q - a;
      if (!smaller(mpq_class(m * a)) || !smaller(mpq_class(m * q)) ||
          !smaller(mpq_class(m * gap)) || !smaller(mpq_class(b))) {
        continue;
      }
      consider(ratio(rational(mpq_class(a)), rational(mpq_class(b)), rational(mpq_class(q))));
    }
    const mpq_class w1 = v * n_ / (2 * n_ + 2);
    if (smaller(w1)) consider(scale_up(scale_up(rational(w1))));
    if (n_ > 2) {
      const mpq_class w2 = v * n_ / 2;
      if (smaller(w2)) consider(bound(rational(w2)));
    }
  }
  if (!best) throw Error("no plan for rational " + key);
  rational_memo_[key] = best;
  return best;
}

RecipePtr Planner::sqrt_rational(const mpq_class& t) { return sqrt_rational_depth(t, 3); }

RecipePtr Planner::sqrt_rational_depth(const mpq_class& t, int depth) {
  if (sgn(t) <= 0) throw PreconditionError("sqrt of a nonpositive rational");
  mpq_class root;
  if (perfect_square(t, &root)) return rational(root);
  if (depth <= 0) return nullptr;
  const std::string key = "sr|" + t.get_str() + "|" + std::to_string(depth);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  memo_[key] = nullptr;
  RecipePtr best;
  auto consider = [&](const RecipePtr& r) {
    if (r && (!best || r->cost < best->cost)) best = r;
  };
  // sqrt(t) = sqrt(2+2/n) * sqrt(t n / (2n+2))
  if (auto sub = sqrt_rational_depth(t * n_ / (2 * n_ + 2), depth - 1)) consider(scale_up(sub));
  if (n_ > 2) {
    if (auto sub = sqrt_rational_depth(t * n_ * n_ / 4, depth - 1)) consider(bound(sub));
  }
  // square part: t = (s/den)^2 * core
  {
    mpz_class v = t.get_num() * t.get_den();
    mpz_class s = 1;
    for (unsigned long f = 2; f * f <= 1000000 && mpz_class(f * f) <= v; ++f) {
      while (mpz_divisible_ui_p(v.get_mpz_t(), f * f)) {
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), f * f);
        s *= f;
      }
    }
    mpq_class factor(s, t.get_den());
    factor.canonicalize();
    if (factor != 1) {
      if (auto sub = sqrt_rational_depth(mpq_class(v), depth - 1)) consider(scaled(sub, factor));
    }
  }
  // right triangles with rational sides: A^2 - B^2 = t, A - B = alpha
  std::vector<mpq_class> alphas = {mpq_class(1),    mpq_class(2),    mpq_class(3),
                                   mpq_class(4),    mpq_class(1, 2), mpq_class(1, 3),
                                   mpq_class(2, 3), mpq_class(3, 2), mpq_class(1, 4),
                                   mpq_class(3, 4), t / 2,           t / 3};
  std::vector<std::string> seen;
  for (auto alpha : alphas) {
    alpha.canonicalize();
    if (sgn(alpha) <= 0 || alpha * alpha >= t) continue;
    if (std::find(seen.begin(), seen.end(), alpha.get_str()) != seen.end()) continue;
    seen.push_back(alpha.get_str());
    const mpq_class big = (alpha + t / alpha) / 2;
    const mpq_class small = (t / alpha - alpha) / 2;
    // Stay inside the precomputed table; larger sides are never cheap.
    if (big.get_num() > RationalTable::kMax || big.get_den() > RationalTable::kMax ||
        small.get_num() > RationalTable::kMax || small.get_den() > RationalTable::kMax) {
      continue;
    }
    consider(pyth(rational(big), rational(small)));
  }
  // One irrational leg next to a cheap rational one.
  if (depth >= 2) {
    for (int i : rational_table(n_).cheapest()) {
      const mpq_class c(RationalTable::num(i), RationalTable::den(i));
      if (auto a = sqrt_rational_depth(t + c * c, depth - 1)) consider(pyth(a, rational(c)));
      if (c * c > t) {
        if (auto b = sqrt_rational_depth(c * c - t, depth - 1)) consider(pyth(rational(c), b));
      }
    }
  }
  memo_[key] = best;
  return best;
}

RecipePtr Planner::scaled(const RecipePtr& x, const mpq_class& r) {
  if (sgn(r) <= 0) throw PreconditionError("nonpositive scale factor");
  if (r == 1) return x;
  if (x->value.is_rational()) return rational(x->value.rational_value() * r);
  const std::string key = "sc|" + ptr_key(x.get()) + "|" + r.get_str();
  if (auto it = memo_.find(key); it != memo_.end()) {
    if (!it->second) throw Error("cyclic scaling plan");
    return it->second;
  }
  memo_[key] = nullptr;
  RecipePtr best;
  auto consider = [&](const RecipePtr& c) {
    if (c && (!best || c->cost < best->cost)) best = c;
  };
  const auto& p = x->parts;
  switch (x->fig) {
    case Fig::ScaleUp: consider(scale_up(scaled(p[0], r))); break;
    case Fig::Bound: consider(bound(scaled(p[0], r))); break;
    case Fig::Double: consider(twice(scaled(p[0], r))); break;
    case Fig::Multiple: consider(multiple(scaled(p[0], r), x->k)); break;
    case Fig::Divide: consider(divide(scaled(p[0], r), x->k)); break;
    case Fig::Pyth: consider(pyth(scaled(p[0], r), scaled(p[1], r))); break;
    case Fig::Diff: consider(diff(scaled(p[0], r), scaled(p[1], r))); break;
    case Fig::Sum: consider(sum(scaled(p[0], r), scaled(p[1], r))); break;
    case Fig::Ratio: consider(ratio(p[0], scaled(p[1], r), p[2])); break;
    case Fig::Sqrt: consider(scaled(p[0], r)); break;
    case Fig::Unit:
    case Fig::Approx: break;
  }
  const mpz_class& num = r.get_num();
  const mpz_class& den = r.get_den();
  if (num <= kMaxInteger && den <= kMaxInteger) {
    consider(ratio(rational(mpq_class(num)), x, rational(mpq_class(den))));
    if (den == 1 && num <= 64) consider(multiple(x, static_cast<int>(num.get_si())));
    if (num == 1 && den <= 64) consider(divide(x, static_cast<int>(den.get_si())));
    if (r == 2) consider(twice(x));
  }
  if (!best) throw Error("no plan for scaling");
  memo_[key] = best;
  return best;
}

RecipePtr Planner::root3_times(const RecipePtr& a) {
  const std::string key = "r3|" + ptr_key(a.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  RecipePtr best = pyth(scaled(a, mpq_class(2)), a);
  if (n_ == 2) {
    auto su = scale_up(a);
    if (su->cost < best->cost) best = su;
  }
  return memo_[key] = best;
}

RecipePtr Planner::root2_times(const RecipePtr& a) {
  const std::string key = "r2|" + ptr_key(a.get());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  RecipePtr best = pyth(root3_times(a), a);
  const Number sq = a->value * a->value;
  if (sq.is_rational()) {
    auto direct = sqrt_rational(sq.rational_value() * 2);
    if (direct && direct->cost < best->cost) best = direct;
  }
  return memo_[key] = best;
}

RecipePtr Planner::leg(const RecipePtr& a, const mpq_class& c2) {
  const std::string key = "lg|" + ptr_key(a.get()) + "|" + c2.get_str();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const Number a2 = a->value * a->value;
  RecipePtr r;
  if (a2.is_rational()) {
    r = sqrt_rational(a2.rational_value() + c2);
  } else {
    // sqrt(a^2 + c^2) = sqrt((sqrt(2) a)^2 - (sqrt(a^2 - c^2))^2), roles
    // swapped when c > a.
    auto c = sqrt_rational(c2);
    const int cmp = (a->value - c->value).sign();
    if (cmp > 0) {
      r = pyth(root2_times(a), pyth(a, c));
    } else if (cmp < 0) {
      r = pyth(root2_times(c), pyth(c, a));
    } else {
      r = root2_times(a);
    }
  }
  return memo_[key] = r;
}

namespace {

void flatten_sum(const field::ExprPtr& e, int sign, std::vector<std::pair<int, field::ExprPtr>>& out) {
  using Op = field::Expr::Op;
  switch (e->op) {
    case Op::Add:
      flatten_sum(e->lhs, sign, out);
      flatten_sum(e->rhs, sign, out);
      return;
    case Op::Sub:
      flatten_sum(e->lhs, sign, out);
      flatten_sum(e->rhs, -sign, out);
      return;
    case Op::Neg:
      flatten_sum(e->lhs, -sign, out);
      return;
    default:
      out.emplace_back(sign, e);
  }
}

}  // namespace

RecipePtr Planner::lower(const field::Expr& e) { return lower_value(e, field::evaluate(e)); }

RecipePtr Planner::lower_sum(const field::Expr& e) {
  std::vector<std::pair<int, field::ExprPtr>> terms;
  auto self = std::make_shared<field::Expr>(e);
  flatten_sum(self, 1, terms);
  mpq_class rational_part = 0;
  std::vector<RecipePtr> pos, neg;
  for (const auto& [sign, t] : terms) {
    const Number tv = field::evaluate(*t);
    if (tv.is_rational()) {
      rational_part += sign * tv.rational_value();
      continue;
    }
    if (tv.sign() < 0) throw DomainError("cannot realize a negative term inside a sum");
    (sign > 0 ? pos : neg).push_back(lower_value(*t, tv));
  }
  if (sgn(rational_part) > 0) pos.insert(pos.begin(), rational(rational_part));
  if (sgn(rational_part) < 0) neg.insert(neg.begin(), rational(-rational_part));
  auto fold = [&](const std::vector<RecipePtr>& xs) -> RecipePtr {
    if (xs.empty()) return nullptr;
    RecipePtr acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
      acc = (acc->value == xs[i]->value) ? scaled(acc, mpq_class(2)) : sum(acc, xs[i]);
    }
    return acc;
  };
  RecipePtr p = fold(pos);
  RecipePtr n = fold(neg);
  if (!p) throw DomainError("sum has no positive part");
  if (!n) return p;
  return diff(p, n);
}

RecipePtr Planner::lower_value(const field::Expr& e, const Number& v) {
  using Op = field::Expr::Op;
  if (v.sign() <= 0) {
    throw DomainError("subexpression " + field::to_string(e) + " is not positive");
  }
  if (v.is_rational()) return rational(v.rational_value());
  const Number v2 = v * v;
  if (v2.is_rational()) return sqrt_rational(v2.rational_value());
  switch (e.op) {
    case Op::Add:
    case Op::Sub:
    case Op::Neg:
      return lower_sum(e);
    case Op::Mul: {
      const Number lv = field::evaluate(*e.lhs);
      const Number rv = field::evaluate(*e.rhs);
      if (lv.is_rational()) return scaled(lower_value(*e.rhs, rv), lv.rational_value());
      if (rv.is_rational()) return scaled(lower_value(*e.lhs, lv), rv.rational_value());
      auto a = lower_value(*e.lhs, lv);
      auto b = lower_value(*e.rhs, rv);
      auto x = ratio(a, b, unit_);
      auto y = ratio(b, a, unit_);
      return x->cost <= y->cost ? x : y;
    }
    case Op::Div: {
      const Number lv = field::evaluate(*e.lhs);
      const Number rv = field::evaluate(*e.rhs);
      if (rv.is_rational()) return scaled(lower_value(*e.lhs, lv), 1 / rv.rational_value());
      auto a = lower_value(*e.lhs, lv);
      auto c = lower_value(*e.rhs, rv);
      auto x = ratio(a, unit_, c);
      auto y = ratio(unit_, a, c);
      return x->cost <= y->cost ? x : y;
    }
    case Op::Sqrt:
      return sqrt_gadget(lower(*e.lhs));
    case Op::Int:
      break;
  }
  throw Error("unreachable expression kind");
}

RecipePtr Planner::plan(const Number& v) { return lower(*field::parse_expr(v.to_expr())); }

}  // namespace bqw::gadgets
