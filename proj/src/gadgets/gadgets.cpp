#include "gadgets/gadgets.hpp"

#include "errors.hpp"
#include "field/expr.hpp"
#include "gadgets/planner.hpp"
#include "gadgets/realize.hpp"

namespace bqw::gadgets {

namespace {

int dim_of(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw PreconditionError("points of different dimension");
  if (x.size() < 2) throw PreconditionError("dimension must be at least 2");
  return static_cast<int>(x.size());
}

void require_positive(const Number& v, const char* what) {
  if (v.sign() <= 0) throw PreconditionError(std::string(what) + " must be positive");
}

void require_distance(const Point& x, const Point& y, const Number& v) {
  if (geom::dist_sq(x, y) != v * v) {
    throw PreconditionError("pair is not at distance " + v.to_expr());
  }
}

WitnessSet build(Planner& planner, const Point& x, const Point& y, const RecipePtr& recipe,
                 ClaimKind kind) {
  require_distance(x, y, recipe->value);
  Builder b(planner.dim());
  const int ix = b.add_point(x);
  const int iy = b.add_point(y);
  Realizer real(planner, b);
  GadgetNode node = real.realize(recipe, ix, iy);
  Claim claim;
  claim.kind = kind;
  claim.points = {ix, iy};
  claim.value = recipe->value;
  if (kind == ClaimKind::Approx) {
    claim.epsilon = recipe->eps;
    claim.via = real.last_via();
  }
  return b.finish({claim}, std::move(node));
}

}  // namespace

WitnessSet unit_pair(const Point& x, const Point& y) {
  Planner p(dim_of(x, y));
  return build(p, x, y, p.unit(), ClaimKind::ExactDistance);
}

WitnessSet scale_up(const Point& x, const Point& y, const Number& d) {
  require_positive(d, "d");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.scale_up(p.plan(d)), ClaimKind::ExactDistance);
}

WitnessSet bound_gadget(const Point& x, const Point& y, const Number& d) {
  require_positive(d, "d");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.bound(p.plan(d)), ClaimKind::UpperBound);
}

WitnessSet double_gadget(const Point& x, const Point& y, const Number& d) {
  require_positive(d, "d");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.twice(p.plan(d)), ClaimKind::ExactDistance);
}

WitnessSet multiple(const Point& x, const Point& y, const Number& d, int k) {
  require_positive(d, "d");
  if (k < 1) throw PreconditionError("k must be a positive integer");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.multiple(p.plan(d), k), ClaimKind::ExactDistance);
}

WitnessSet divide(const Point& x, const Point& y, const Number& d, int k) {
  require_positive(d, "d");
  if (k < 1) throw PreconditionError("k must be a positive integer");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.divide(p.plan(d), k), ClaimKind::ExactDistance);
}

WitnessSet approx_gadget(const Point& x, const Point& y, const Number& eps) {
  require_positive(eps, "eps");
  Planner p(dim_of(x, y));
  const Number d2 = geom::dist_sq(x, y);
  if (d2.is_zero()) throw PreconditionError("approximation needs x != y");
  return build(p, x, y, p.approx(d2.sqrt(), d2, eps), ClaimKind::Approx);
}

WitnessSet pyth_diff(const Point& x, const Point& y, const Number& a, const Number& b) {
  require_positive(b, "b");
  if (a <= b) throw PreconditionError("pyth_diff needs a > b");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.pyth(p.plan(a), p.plan(b)), ClaimKind::ExactDistance);
}

WitnessSet diff_sum(const Point& x, const Point& y, const Number& a, const Number& b, Mode mode) {
  require_positive(a, "a");
  require_positive(b, "b");
  if (mode == Mode::Diff && a <= b) throw PreconditionError("difference needs a > b");
  Planner p(dim_of(x, y));
  auto ra = p.plan(a);
  auto rb = p.plan(b);
  return build(p, x, y, mode == Mode::Diff ? p.diff(ra, rb) : p.sum(ra, rb),
               ClaimKind::ExactDistance);
}

WitnessSet ratio(const Point& A, const Point& B, const Number& a, const Number& b, const Number& c) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(c, "c");
  Planner p(dim_of(A, B));
  return build(p, A, B, p.ratio(p.plan(a), p.plan(b), p.plan(c)), ClaimKind::ExactDistance);
}

WitnessSet sqrt_gadget(const Point& x, const Point& y, const Number& a) {
  require_positive(a, "a");
  Planner p(dim_of(x, y));
  return build(p, x, y, p.sqrt_gadget(p.plan(a)), ClaimKind::ExactDistance);
}

WitnessSet compile(const std::string& expr, int n, const Point& anchor, const Point& direction) {
  if (n < 2) throw PreconditionError("dimension must be at least 2");
  if (static_cast<int>(anchor.size()) != n || static_cast<int>(direction.size()) != n) {
    throw PreconditionError("anchor and direction must have dimension n");
  }
  if (geom::dot(direction, direction) != Number(1)) {
    throw PreconditionError("direction must be a unit vector");
  }
  const field::ExprPtr tree = field::parse_expr(expr);
  const Number v = field::evaluate(*tree);
  if (v.sign() <= 0) throw DomainError("expression value " + v.to_expr() + " is not positive");
  Planner p(n);
  const RecipePtr recipe = p.lower(*tree);
  const Point y = geom::add(anchor, geom::scale(direction, v));
  WitnessSet w = build(p, anchor, y, recipe, ClaimKind::ExactDistance);
  GadgetNode root = make_node("compile", {0, 1});
  root.params.emplace_back("expr", field::to_string(*tree));
  add_param(root, "value", v);
  root.children.push_back(std::move(w.derivation));
  w.derivation = std::move(root);
  return w;
}

WitnessSet compile(const std::string& expr, int n) {
  return compile(expr, n, geom::origin(n), geom::axis(n, 0));
}

}  // namespace bqw::gadgets
