#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "field/expr.hpp"
#include "field/number.hpp"

namespace bqw::gadgets {

using field::Number;

enum class Fig { Unit, ScaleUp, Bound, Double, Multiple, Divide, Approx, Pyth, Diff, Sum, Ratio, Sqrt };
const char* fig_tag(Fig f);

struct Recipe;
using RecipePtr = std::shared_ptr<const Recipe>;

// How to force one distance: a gadget kind plus the recipes of the
// sub-distances it needs. Recipes are position independent; the realizer
// instantiates them on concrete pairs.
//
// parts by kind:
//   ScaleUp  [d]
//   Bound    [d, scale_up(d)]
//   Double   [d, scale_up(scale_up(d)), bound(d)]
//   Multiple [d, double(d)]
//   Divide   [d, (k-1)m, m, km]
//   Approx   [q, r]                      (two-leg chain, legs rational)
//   Pyth     [a, b, 2b]
//   Diff/Sum [a, b, simplex edge, leg through x, leg through y, chain x-y]
//   Ratio    [a, b, c, ma, mc, m|a-c|]
//   Sqrt     [inner]
struct Recipe {
  Fig fig = Fig::Unit;
  Number value;
  std::vector<RecipePtr> parts;
  int k = 0;
  int m = 0;
  Number eps;
  // Estimated number of points added on top of the pair itself.
  double cost = 0;
};

// Builds recipes for a fixed dimension, choosing among equivalent
// compositions by estimated size. All choices are deterministic.
class Planner {
 public:
  explicit Planner(int n);
  int dim() const { return n_; }

  RecipePtr unit();
  RecipePtr scale_up(const RecipePtr& d);
  RecipePtr bound(const RecipePtr& d);
  RecipePtr twice(const RecipePtr& d);
  RecipePtr multiple(const RecipePtr& d, int k);
  RecipePtr divide(const RecipePtr& d, int k);
  // Approximation chain for a pair at distance sqrt(dist_sq) = dist.
  RecipePtr approx(const Number& dist, const Number& dist_sq, const Number& eps);
  RecipePtr pyth(const RecipePtr& a, const RecipePtr& b);
  RecipePtr diff(const RecipePtr& a, const RecipePtr& b);
  RecipePtr sum(const RecipePtr& a, const RecipePtr& b);
  RecipePtr ratio(const RecipePtr& a, const RecipePtr& b, const RecipePtr& c);
  // sqrt(a) for a > 0 by the (a+1, a-1) right triangle, or via 1/a when a < 1.
  RecipePtr sqrt_gadget(const RecipePtr& a);

  // Cheapest known recipe for a positive rational.
  RecipePtr rational(const mpq_class& v);
  // Cheapest known recipe for sqrt(t), t a positive rational.
  RecipePtr sqrt_rational(const mpq_class& t);
  // A recipe for r * x.
  RecipePtr scaled(const RecipePtr& x, const mpq_class& r);
  // A recipe for sqrt(a^2 + c2), c2 a positive rational.
  RecipePtr leg(const RecipePtr& a, const mpq_class& c2);
  // sqrt(2) * a and sqrt(3) * a.
  RecipePtr root2_times(const RecipePtr& a);
  RecipePtr root3_times(const RecipePtr& a);

  RecipePtr lower(const field::Expr& e);
  RecipePtr plan(const Number& v);

 private:
  RecipePtr make(Fig fig, Number value, std::vector<RecipePtr> parts, double cost, int k = 0,
                 int m = 0, Number eps = Number());
  RecipePtr sqrt_rational_depth(const mpq_class& t, int depth);
  RecipePtr lower_value(const field::Expr& e, const Number& v);
  RecipePtr lower_sum(const field::Expr& e);

  int n_;
  Number su_factor_;  // sqrt(2 + 2/n)
  RecipePtr unit_;
  std::map<std::string, RecipePtr> rational_memo_;
  std::map<std::string, RecipePtr> memo_;
  std::vector<RecipePtr> keep_;  // keeps pointer memo keys alive
};

// Continued-fraction convergents of sqrt(d2) (d2 > 0), at most `count`.
std::vector<mpq_class> sqrt_convergents(const Number& d2, int count);

}  // namespace bqw::gadgets
