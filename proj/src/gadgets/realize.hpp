#pragma once

#include <unordered_map>

#include "gadgets/planner.hpp"
#include "gadgets/witness.hpp"

namespace bqw::gadgets {

// Columns of an orthogonal matrix.
using Mat = std::vector<geom::Vec>;

// Canonical placement of one gadget: x at the origin, y = value * e0.
struct Skeleton {
  struct Sub {
    int i = 0, j = 0;
    RecipePtr recipe;
    Mat frame;  // maps e0 to the unit direction from point i to point j; empty for units
  };
  std::vector<Point> points;  // points[0] = x, points[1] = y
  std::vector<Sub> subs;
  std::string figure;
  std::vector<std::pair<std::string, std::string>> params;
};

// Instantiates recipes on concrete point pairs of a Builder. Skeletons are
// computed once per recipe and placed by composing orthogonal frames, so
// coordinates only ever multiply by fixed local numbers.
class Realizer {
 public:
  Realizer(Planner& planner, Builder& builder) : planner_(planner), b_(builder) {}

  // Forces |xy| = r.value; the pair must already be at that distance.
  GadgetNode realize(const RecipePtr& r, int x, int y);
  // Index of the middle point of the last approximation chain.
  int last_via() const { return last_via_; }

  const Skeleton& skeleton(const RecipePtr& r);

 private:
  GadgetNode place(const RecipePtr& r, int x, int y, const Mat& frame);
  Skeleton build_skeleton(const Recipe& r) const;

  Planner& planner_;
  Builder& b_;
  std::unordered_map<const Recipe*, Skeleton> cache_;
  int last_via_ = -1;
};

GadgetNode make_node(const std::string& figure, std::vector<int> pair);
void add_param(GadgetNode& node, const std::string& key, const Number& v);
void add_param(GadgetNode& node, const std::string& key, long v);

}  // namespace bqw::gadgets
