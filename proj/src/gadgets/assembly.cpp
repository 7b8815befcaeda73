#include "gadgets/assembly.hpp"

#include "errors.hpp"

namespace bqw::gadgets {

void Assembly::force(int i, int j, GadgetNode& parent) {
  if (!forced_.insert(std::minmax(i, j)).second) return;
  const Number d2 = geom::dist_sq(at(i), at(j));
  if (d2.is_zero()) throw PreconditionError("forcing a distance between coincident points");
  parent.children.push_back(real_.realize(planner_.plan(d2.sqrt()), i, j));
}

Claim Assembly::approx(int i, int j, const Number& eps, GadgetNode& parent) {
  const Number d2 = geom::dist_sq(at(i), at(j));
  if (d2.is_zero()) throw PreconditionError("approximation needs distinct points");
  if (eps.sign() <= 0) throw PreconditionError("eps must be positive");
  const Number d = d2.sqrt();
  parent.children.push_back(real_.realize(planner_.approx(d, d2, eps), i, j));
  Claim c;
  c.kind = ClaimKind::Approx;
  c.points = {i, j};
  c.value = d;
  c.epsilon = eps;
  c.via = real_.last_via();
  return c;
}

void Assembly::separate(int i, int j, GadgetNode& parent) {
  if (!separated_.insert(std::minmax(i, j)).second) return;
  const Number d = geom::dist_sq(at(i), at(j)).sqrt();
  approx(i, j, d / 2, parent);
}

}  // namespace bqw::gadgets
