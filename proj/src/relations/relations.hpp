#pragma once

#include <optional>
#include <vector>

#include "gadgets/witness.hpp"

namespace bqw::relations {

using geom::Hyperplane;

// Index layout of one inversor cell inside a hyperplane witness.
struct PeaucellierCell {
  int P = -1, O = -1, T = -1, X = -1, A = -1;
  std::vector<int> B;
  long u = 0;
};

struct HyperplaneWitness {
  WitnessSet witness;
  std::vector<PeaucellierCell> cells;
};

// Forces the points X (which must lie exactly on a common affine hyperplane)
// to stay on some hyperplane under unit-distance preserving maps.
HyperplaneWitness hyperplane_construct(const std::vector<Point>& X, int n);
WitnessSet hyperplane_witness(const std::vector<Point>& X, int n);

// Two mirrors reducing |JK| = |LM| to symmetric instances. An empty mirror
// stands for the identity.
struct Reflections {
  Point A, B;
  std::optional<Hyperplane> H1, H2;
};
Reflections proposition_reflections(const Point& J, const Point& K, const Point& L, const Point& M);

// Forces |f(J)f(K)| = |f(L)f(M)|; requires |JK| = |LM|.
WitnessSet equal_distance_witness(const Point& J, const Point& K, const Point& L, const Point& M,
                                  int n);
// Forces f(p) != f(q).
WitnessSet distinct_witness(const Point& p, const Point& q);
// Forces |f(J)f(K)| < |f(L)f(M)|; requires |JK| < |LM|.
WitnessSet less_than_witness(const Point& J, const Point& K, const Point& L, const Point& M);

}  // namespace bqw::relations
