#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geom/geom.hpp"

namespace bqw {

using field::Number;
using geom::Point;

enum class ClaimKind { ExactDistance, UpperBound, Approx, Distinct, Hyperplane, EqualDistance, LessThan };

const char* claim_kind_name(ClaimKind k);
ClaimKind claim_kind_from_name(const std::string& s);

struct Claim {
  ClaimKind kind = ClaimKind::ExactDistance;
  // A pair for distance-type claims, two pairs for EqualDistance/LessThan,
  // the incident points for Hyperplane.
  std::vector<int> points;
  Number value;    // ExactDistance, UpperBound, Approx
  Number epsilon;  // Approx
  int via = -1;    // Approx: index of the point z of the two-leg chain
};

struct GadgetNode {
  std::string figure;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<int> pair;
  std::vector<GadgetNode> children;

  std::size_t size() const;
  std::size_t depth() const;
};

struct WitnessSet {
  int dim = 2;
  std::vector<Point> points;
  std::vector<std::pair<int, int>> unit_edges;
  std::vector<Claim> claims;
  GadgetNode derivation;
  bool approximate = false;
};

// Incremental construction with exact point deduplication.
class Builder {
 public:
  explicit Builder(int dim);

  int dim() const { return dim_; }
  // Index of p, reusing an existing exactly equal point.
  int add_point(const Point& p);
  void add_edge(int a, int b);
  const Point& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return points_.size(); }
  // Copies a witness in; returns the index map.
  std::vector<int> absorb(const WitnessSet& w);

  WitnessSet finish(std::vector<Claim> claims, GadgetNode derivation, bool approximate = false) const;

 private:
  using Cell = std::pair<long long, long long>;
  Cell cell_of(const std::vector<double>& a) const;

  int dim_;
  std::vector<Point> points_;
  std::vector<std::vector<double>> approx_;
  std::map<Cell, std::vector<int>> grid_;
  std::set<std::pair<int, int>> edges_;
};

std::vector<double> approx_point(const Point& p);

}  // namespace bqw
