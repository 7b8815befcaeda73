#pragma once

#include <set>
#include <utility>

#include "gadgets/planner.hpp"
#include "gadgets/realize.hpp"

namespace bqw::gadgets {

// Shared point set into which several sub-witnesses are realized.
class Assembly {
 public:
  explicit Assembly(int n) : planner_(n), b_(n), real_(planner_, b_) {}

  int dim() const { return b_.dim(); }
  int add(const Point& p) { return b_.add_point(p); }
  const Point& at(int i) const { return b_.point(i); }

  // S_ij at the pair's own distance; repeated pairs are skipped.
  void force(int i, int j, GadgetNode& parent);
  // T_ij(eps); returns the matching Approx claim.
  Claim approx(int i, int j, const Number& eps, GadgetNode& parent);
  // T_ij(|ij| / 2); repeated pairs are skipped.
  void separate(int i, int j, GadgetNode& parent);

  WitnessSet finish(std::vector<Claim> claims, GadgetNode root, bool approximate = false) const {
    return b_.finish(std::move(claims), std::move(root), approximate);
  }

 private:
  Planner planner_;
  Builder b_;
  Realizer real_;
  std::set<std::pair<int, int>> forced_, separated_;
};

}  // namespace bqw::gadgets
