#pragma once

#include <utility>
#include <vector>

namespace bqw::rigidity {

// A graph embedded with floating coordinates; edges have target length 1.
struct Framework {
  int dim = 2;
  std::vector<std::vector<double>> vertices;
  std::vector<std::pair<int, int>> edges;
  int alpha = -1;
  int beta = -1;
};

// Default tolerance on |edge length - 1|.
constexpr double kEdgeTol = 1e-12;

}  // namespace bqw::rigidity
