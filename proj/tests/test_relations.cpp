#include "doctest.h"

#include "errors.hpp"
#include "relations/relations.hpp"
#include "support.hpp"
#include "verify/verify.hpp"

using namespace bqw;
using namespace bqw::relations;
using geom::dist_sq;
using testsupport::find_node;
using testsupport::param;
using testsupport::pt;
using testsupport::q;

namespace {

const Point& at(const WitnessSet& w, int i) { return w.points[static_cast<std::size_t>(i)]; }

void check_cell(const WitnessSet& w, const PeaucellierCell& c) {
  const Number u(c.u);
  CHECK(dist_sq(at(w, c.P), at(w, c.O)) == 16 * u * u);
  CHECK(dist_sq(at(w, c.P), at(w, c.A)) == 16 * u * u);
  CHECK(dist_sq(at(w, c.P), at(w, c.T)) == u * u);
  CHECK(dist_sq(at(w, c.T), at(w, c.X)) == u * u);
  REQUIRE(c.B.size() == static_cast<std::size_t>(w.dim));
  for (std::size_t i = 0; i < c.B.size(); ++i) {
    CHECK(dist_sq(at(w, c.O), at(w, c.B[i])) == 36 * u * u);
    CHECK(dist_sq(at(w, c.X), at(w, c.B[i])) == 4 * u * u);
    CHECK(dist_sq(at(w, c.A), at(w, c.B[i])) == 4 * u * u);
    for (std::size_t j = i + 1; j < c.B.size(); ++j) CHECK(!geom::same_point(at(w, c.B[i]), at(w, c.B[j])));
  }
  // |OX| |OA| = 32 u^2
  const Number p = Number(32) * u * u;
  CHECK(dist_sq(at(w, c.O), at(w, c.X)) * dist_sq(at(w, c.O), at(w, c.A)) == p * p);
}

Point random_rational_point(testsupport::ExprGen& g, int n) {
  Point p;
  for (int i = 0; i < n; ++i) p.push_back(q(g.uniform(-6, 6), g.uniform(1, 3)));
  return p;
}

}  // namespace

TEST_CASE("hyperplane witness, three collinear points") {
  const auto h = hyperplane_construct({pt({0, 0}), pt({1, 0}), pt({2, 0})}, 2);
  REQUIRE(h.cells.size() == 3);
  CHECK(h.cells[0].u == 1);
  CHECK(dist_sq(at(h.witness, h.cells[0].P), at(h.witness, h.cells[0].O)) == Number(16));
  for (const auto& c : h.cells) check_cell(h.witness, c);
  CHECK(h.witness.claims[0].kind == ClaimKind::Hyperplane);
  CHECK(verify::verify(h.witness).passed);
}

TEST_CASE("hyperplane witness, single point") {
  const auto h = hyperplane_construct({pt({q(1, 2), 3})}, 2);
  REQUIRE(h.cells.size() == 1);
  check_cell(h.witness, h.cells[0]);
  CHECK(verify::verify(h.witness).passed);
}

TEST_CASE("hyperplane witness, larger u") {
  for (long a : {3L, 5L}) {
    const auto h = hyperplane_construct({pt({Number(-a), 0}), pt({Number(a), 0})}, 2);
    const long u = h.cells[0].u;
    // Least u with |PX| <= 2u, P the centroid.
    CHECK(2 * u >= a);
    CHECK(2 * (u - 1) < a);
    for (const auto& c : h.cells) check_cell(h.witness, c);
  }
}

TEST_CASE("hyperplane witness rejects points off a common hyperplane") {
  CHECK_THROWS_AS(hyperplane_witness({pt({0, 0}), pt({1, 0}), pt({0, 1})}, 2), PreconditionError);
  CHECK_THROWS_AS(hyperplane_witness({}, 2), PreconditionError);
}

TEST_CASE("inversion detects displacement off the hyperplane") {
  const auto h = hyperplane_construct({pt({0, 0}), pt({2, 0})}, 2);
  const auto& w = h.witness;
  const auto& c = h.cells[0];
  const Point& P = at(w, c.P);
  const Point& O = at(w, c.O);
  const Number u(c.u);
  for (const Point& x : {pt({q(1, 3), 0}), pt({q(-5, 2), 0}), pt({Number(2).sqrt(), 0})}) {
    CHECK(dist_sq(P, geom::invert(O, 32 * u * u, x)) == 16 * u * u);
  }
  for (const Point& x : {pt({q(1, 3), q(1, 100)}), pt({1, -1}), pt({0, Number(2).sqrt() / 7})}) {
    CHECK(dist_sq(P, geom::invert(O, 32 * u * u, x)) != 16 * u * u);
  }
}

TEST_CASE("proposition reflections") {
  SUBCASE("identity case") {
    const auto r = proposition_reflections(pt({0, 0}), pt({1, 0}), pt({0, 0}), pt({1, 0}));
    CHECK(!r.H1);
    CHECK(!r.H2);
  }
  SUBCASE("J=(0,0), K=(1,0), L=(0,2), M=(1,2)") {
    const Point J = pt({0, 0}), K = pt({1, 0}), L = pt({0, 2}), M = pt({1, 2});
    const auto r = proposition_reflections(J, K, L, M);
    REQUIRE(r.H1);
    CHECK(geom::same_point(r.A, L));
    CHECK(geom::same_point(geom::reflect(J, *r.H1), r.A));
    CHECK(geom::same_point(geom::reflect(K, *r.H1), r.B));
    if (r.H2) {
      CHECK(geom::same_point(geom::reflect(r.A, *r.H2), r.A));
      CHECK(geom::same_point(geom::reflect(r.B, *r.H2), M));
    } else {
      CHECK(geom::same_point(r.B, M));
    }
  }
  SUBCASE("random inputs") {
    testsupport::ExprGen g(8);
    for (int i = 0; i < 20; ++i) {
      const Point J = random_rational_point(g, 3), K = random_rational_point(g, 3);
      const Point L = random_rational_point(g, 3);
      // M: rotate K - J by a rational rotation and translate to L.
      const geom::Vec d = geom::sub(K, J);
      const Point M = pt({L[0] + q(3, 5) * d[0] - q(4, 5) * d[1], L[1] + q(4, 5) * d[0] + q(3, 5) * d[1], L[2] + d[2]});
      const auto r = proposition_reflections(J, K, L, M);
      CHECK(dist_sq(r.A, r.B) == dist_sq(J, K));
      CHECK(dist_sq(r.A, M) == dist_sq(J, K));
      if (r.H2) CHECK(geom::same_point(geom::reflect(r.A, *r.H2), r.A));
    }
  }
  CHECK_THROWS_AS(proposition_reflections(pt({0, 0}), pt({1, 0}), pt({0, 0}), pt({2, 0})), PreconditionError);
}

TEST_CASE("equal distance: J=L, K=M is the bare pair") {
  const auto w = equal_distance_witness(pt({0, 0}), pt({1, 1}), pt({0, 0}), pt({1, 1}), 2);
  CHECK(w.points.size() == 2);
  CHECK(w.claims[0].kind == ClaimKind::EqualDistance);
  CHECK(verify::verify(w).passed);
}

TEST_CASE("equal distance: one coincident pair") {
  SUBCASE("J=L") {
    const auto w = equal_distance_witness(pt({0, 0}), pt({1, 0}), pt({0, 0}), pt({0, 1}), 2);
    CHECK(find_node(w.derivation, "Fig11c") != nullptr);
    CHECK(verify::verify(w).passed);
  }
  SUBCASE("K=M") {
    const auto w = equal_distance_witness(pt({1, 0}), pt({0, 0}), pt({0, 1}), pt({0, 0}), 2);
    CHECK(find_node(w.derivation, "Fig11c") != nullptr);
    CHECK(verify::verify(w).passed);
  }
}

TEST_CASE("equal distance: mirror-symmetric pairs across the y-axis") {
  const Point J = pt({q(-3, 2), 0}), K = pt({q(-1, 2), 0});
  const Point L = pt({q(3, 2), 0}), M = pt({q(1, 2), 0});
  const auto w = equal_distance_witness(J, K, L, M, 2);
  const GadgetNode* node = find_node(w.derivation, "Fig11ab");
  REQUIRE(node != nullptr);
  // |JK| = 1, |JM| = 2
  CHECK(param(*node, "delta") == "1/3");
  // s, t: least integers above the distances 3/2 and 1/2 to the mirror.
  CHECK(param(*node, "s") == "2");
  CHECK(param(*node, "t") == "1");
  const auto r = verify::verify(w);
  CHECK(r.passed);
  CHECK(w.claims[0].points == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("equal distance preconditions") {
  CHECK_THROWS_AS(equal_distance_witness(pt({0, 0}), pt({1, 0}), pt({0, 0}), pt({2, 0}), 2), PreconditionError);
  CHECK_THROWS_AS(equal_distance_witness(pt({0, 0}), pt({1, 0}), pt({0, 0}), pt({1, 0}), 3), PreconditionError);
}

TEST_CASE("distinct witness") {
  const auto w = distinct_witness(pt({0, 0}), pt({1, 0}));
  REQUIRE(w.claims.size() == 2);
  CHECK(w.claims[0].kind == ClaimKind::Distinct);
  CHECK(w.claims[1].kind == ClaimKind::Approx);
  CHECK(w.claims[1].epsilon == q(1, 2));
  CHECK(verify::verify(w).passed);
  testsupport::ExprGen g(4);
  for (int i = 0; i < 3; ++i) {
    const Point p = random_rational_point(g, 2), r = random_rational_point(g, 2);
    if (geom::same_point(p, r)) continue;
    CHECK(verify::verify(distinct_witness(p, r)).passed);
  }
  CHECK_THROWS_AS(distinct_witness(pt({1, 1}), pt({1, 1})), PreconditionError);
}

TEST_CASE("less-than witness") {
  const Point J = pt({0, 0}), K = pt({1, 0}), L = pt({0, 1}), M = pt({4, 1});
  const auto w = less_than_witness(J, K, L, M);
  CHECK(w.claims[0].kind == ClaimKind::LessThan);
  const Number eps = w.claims[1].epsilon;
  CHECK(eps == Number(1));
  // Interval separation with a 3 eps gap.
  const Number jk = dist_sq(J, K).sqrt(), lm = dist_sq(L, M).sqrt();
  CHECK(jk + eps < lm - eps);
  CHECK((lm - eps) - (jk + eps) == eps);
  CHECK(verify::verify(w).passed);

  testsupport::ExprGen g(12);
  for (int i = 0; i < 3; ++i) {
    const Point a = random_rational_point(g, 2), b = random_rational_point(g, 2);
    const Point c = random_rational_point(g, 2), d = random_rational_point(g, 2);
    const Number x = dist_sq(a, b), y = dist_sq(c, d);
    if (x == y) continue;
    const auto lw = x < y ? less_than_witness(a, b, c, d) : less_than_witness(c, d, a, b);
    CHECK(verify::verify(lw).passed);
  }
  CHECK_THROWS_AS(less_than_witness(L, M, J, K), PreconditionError);
  CHECK_THROWS_AS(less_than_witness(J, K, J, K), PreconditionError);
}
