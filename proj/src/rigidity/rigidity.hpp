#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gadgets/witness.hpp"
#include "rigidity/framework.hpp"

namespace bqw::rigidity {

enum class Verdict { Rigid, Flexible, Indeterminate };
const char* verdict_name(Verdict v);

struct RigidityReport {
  int rank = 0;
  int expected_rank = 0;
  // Singular value at position expected_rank (1-based); 0 when absent.
  double margin = 0;
  std::vector<double> singular_values;
  Verdict verdict = Verdict::Indeterminate;
  std::string note;
};

// Distances from y to the n+1 vertices of an exact unit simplex.
std::vector<Number> phi_map(const std::vector<Point>& p, const Point& y);

// One row per edge, blocks (x_u - x_v) and (x_v - x_u).
Eigen::MatrixXd rigidity_matrix(const Framework& f);

constexpr double kRankTol = 1e-8;
RigidityReport is_rigid(const Framework& f, double tol = kRankTol);

// Throws PreconditionError when an edge is off by more than tol.
void check_edges(const Framework& f, double tol = kEdgeTol);

// Exact unit simplex plus, for every vertex x of the rigid graph, the
// approximation chains T_{p_i x}(eps) to a rational point within kEdgeTol of
// x. The result is flagged approximate.
WitnessSet assemble_from_rigid(const Framework& f, int alpha, int beta, const Number& eps);

struct SearchOptions {
  int restarts = 200;
  std::uint64_t seed = 42;
  double unit_tol = 1e-10;   // max |edge length - 1| of a near-feasible map
  double margin = 0.25;      // distance the claim is pushed from its value
  double violation = 1e-5;   // deviation that counts as a violation
  int max_iterations = 200;
  int keep = 20;             // near-feasible maps listed in the report
};

struct NearFeasible {
  int trial = 0;
  double residual = 0;
  double deviation = 0;
};

struct SearchReport {
  int trials = 0;
  int near_feasible = 0;
  int violations = 0;
  double best_residual = 0;
  double worst_deviation = 0;  // over near-feasible maps
  std::vector<NearFeasible> maps;
};

// Searches for maps of the points preserving every declared unit edge while
// breaking a claim. Deterministic for a fixed seed.
SearchReport falsify_search(const WitnessSet& w, const SearchOptions& opt = {});

// Claim deviation of a floating map (0 when the claim holds).
double claim_deviation(const Claim& c, const std::vector<Eigen::VectorXd>& g);

// Unit-edge residual vector and its Jacobian at x (points stacked).
void edge_residuals(const std::vector<std::pair<int, int>>& edges, int dim, const Eigen::VectorXd& x,
                    Eigen::VectorXd& r, Eigen::MatrixXd* jac);

}  // namespace bqw::rigidity
