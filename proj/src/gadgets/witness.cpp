#include "gadgets/witness.hpp"

#include <cmath>

#include "errors.hpp"

namespace bqw {

namespace {
constexpr double kCell = 1e-6;
constexpr double kNear = 1e-7;
}  // namespace

const char* claim_kind_name(ClaimKind k) {
  switch (k) {
    case ClaimKind::ExactDistance: return "ExactDistance";
    case ClaimKind::UpperBound: return "UpperBound";
    case ClaimKind::Approx: return "Approx";
    case ClaimKind::Distinct: return "Distinct";
    case ClaimKind::Hyperplane: return "Hyperplane";
    case ClaimKind::EqualDistance: return "EqualDistance";
    case ClaimKind::LessThan: return "LessThan";
  }
  return "?";
}

ClaimKind claim_kind_from_name(const std::string& s) {
  for (ClaimKind k : {ClaimKind::ExactDistance, ClaimKind::UpperBound, ClaimKind::Approx,
                      ClaimKind::Distinct, ClaimKind::Hyperplane, ClaimKind::EqualDistance,
                      ClaimKind::LessThan}) {
    if (s == claim_kind_name(k)) return k;
  }
  throw ParseError("unknown claim kind '" + s + "'");
}

std::size_t GadgetNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t GadgetNode::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::vector<double> approx_point(const Point& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& x : p) out.push_back(x.approx_fast());
  return out;
}

Builder::Builder(int dim) : dim_(dim) {
  if (dim < 2) throw PreconditionError("dimension must be at least 2");
}

Builder::Cell Builder::cell_of(const std::vector<double>& a) const {
  return {static_cast<long long>(std::floor(a[0] / kCell)),
          static_cast<long long>(std::floor(a[1] / kCell))};
}

int Builder::add_point(const Point& p) {
  if (static_cast<int>(p.size()) != dim_) throw PreconditionError("point dimension mismatch");
  std::vector<double> a = approx_point(p);
  const Cell c = cell_of(a);
  for (long long dx = -1; dx <= 1; ++dx) {
    for (long long dy = -1; dy <= 1; ++dy) {
      auto it = grid_.find({c.first + dx, c.second + dy});
      if (it == grid_.end()) continue;
      for (int idx : it->second) {
        const auto& b = approx_[static_cast<std::size_t>(idx)];
        bool near = true;
        for (int k = 0; k < dim_ && near; ++k) {
          near = std::fabs(a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]) < kNear;
        }
        if (near && geom::same_point(p, points_[static_cast<std::size_t>(idx)])) return idx;
      }
    }
  }
  const int idx = static_cast<int>(points_.size());
  points_.push_back(p);
  approx_.push_back(std::move(a));
  grid_[c].push_back(idx);
  return idx;
}

void Builder::add_edge(int a, int b) {
  if (a == b) throw PreconditionError("unit edge with coincident endpoints");
  edges_.insert({std::min(a, b), std::max(a, b)});
}

std::vector<int> Builder::absorb(const WitnessSet& w) {
  std::vector<int> map;
  map.reserve(w.points.size());
  for (const auto& p : w.points) map.push_back(add_point(p));
  for (const auto& [a, b] : w.unit_edges) {
    add_edge(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]);
  }
  return map;
}

WitnessSet Builder::finish(std::vector<Claim> claims, GadgetNode derivation, bool approximate) const {
  WitnessSet w;
  w.dim = dim_;
  w.points = points_;
  w.unit_edges.assign(edges_.begin(), edges_.end());
  w.claims = std::move(claims);
  w.derivation = std::move(derivation);
  w.approximate = approximate;
  return w;
}

}  // namespace bqw
