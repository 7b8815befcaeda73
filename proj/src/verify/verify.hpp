#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gadgets/witness.hpp"
#include "rigidity/framework.hpp"

namespace bqw::verify {

struct EdgeFailure {
  int a = -1, b = -1;
  std::string reason;
};

struct ClaimResult {
  ClaimKind kind = ClaimKind::ExactDistance;
  std::vector<int> points;
  bool holds = false;
  bool exact = true;   // false when checked to floating tolerance (approximate witnesses)
  std::string detail;  // offending quantity when the claim fails
};

struct VerifyReport {
  std::size_t points = 0;
  std::size_t declared_edges = 0;
  std::size_t discovered_edges = 0;
  std::vector<EdgeFailure> bad_edges;
  // Exact unit pairs that were not declared.
  std::vector<std::pair<int, int>> incidental;
  std::vector<ClaimResult> claims;
  int max_tower_depth = 0;
  std::size_t derivation_depth = 0;
  std::size_t derivation_size = 0;
  bool approximate = false;
  bool passed = false;
};

// Tolerance for claims of approximate witnesses.
constexpr double kApproxClaimTol = 1e-9;

VerifyReport verify(const WitnessSet& w);

// All pairs of points at exact distance 1, sorted.
std::vector<std::pair<int, int>> unit_pairs(const WitnessSet& w);

// Floating embedding of the points with every exact unit pair as an edge.
rigidity::Framework unit_graph(const WitnessSet& w);

// Maximum tower depth over all coordinates.
int max_tower_depth(const WitnessSet& w);

}  // namespace bqw::verify
