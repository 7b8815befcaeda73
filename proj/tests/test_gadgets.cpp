#include "doctest.h"

#include <algorithm>

#include "errors.hpp"
#include "gadgets/gadgets.hpp"
#include "support.hpp"
#include "verify/verify.hpp"

using namespace bqw;
using namespace bqw::gadgets;
using geom::dist_sq;
using testsupport::find_node;
using testsupport::param;
using testsupport::pt;
using testsupport::q;

namespace {

Point on_axis(int n, const Number& v) { return geom::scale(geom::axis(n, 0), v); }

bool has_point(const WitnessSet& w, const Point& p) {
  return std::any_of(w.points.begin(), w.points.end(), [&](const Point& x) { return geom::same_point(x, p); });
}

// Points at the given squared distances from points 0 and 1.
int count_at(const WitnessSet& w, const Number& dx2, const Number& dy2) {
  int c = 0;
  for (const auto& p : w.points) {
    if (dist_sq(p, w.points[0]) == dx2 && dist_sq(p, w.points[1]) == dy2) ++c;
  }
  return c;
}

void check_passes(const WitnessSet& w) {
  const auto r = verify::verify(w);
  CHECK(r.passed);
  CHECK(r.bad_edges.empty());
  CHECK(testsupport::edges_exact(w));
}

int count_children(const GadgetNode& n, const std::string& tag) {
  return static_cast<int>(
      std::count_if(n.children.begin(), n.children.end(), [&](const GadgetNode& c) { return c.figure == tag; }));
}

}  // namespace

TEST_CASE("unit pair") {
  const auto w = unit_pair(pt({0, 0}), pt({1, 0}));
  CHECK(w.points.size() == 2);
  CHECK(w.unit_edges.size() == 1);
  REQUIRE(w.claims.size() == 1);
  CHECK(w.claims[0].value == Number(1));
  CHECK(unit_pair(pt({0, 0, 0}), pt({0, 1, 0})).points.size() == 2);
  CHECK_THROWS_AS(unit_pair(pt({0, 0}), pt({2, 0})), PreconditionError);
}

TEST_CASE("scale_up skeleton, n=2, d=1") {
  const Point x = pt({0, 0}), y = on_axis(2, Number(3).sqrt());
  const auto w = scale_up(x, y, 1);
  CHECK(w.points.size() == 7);
  CHECK(w.claims[0].value * w.claims[0].value == Number(3));
  CHECK(w.derivation.figure == "Fig1");
  // x, y and the rotated copy each see the simplex points at distance d.
  CHECK(count_at(w, 1, 1) == 2);
  // The rotated copy of y: |x y~| = sqrt(3), |y y~| = 1.
  CHECK(count_at(w, 3, 1) == 1);
  check_passes(w);
  // Two rhombi sharing x plus the edge y y~.
  CHECK(w.unit_edges.size() == 11);
  CHECK(testsupport::brute_unit_pairs(w) == 11);
}

TEST_CASE("scale_up in n=3 verifies") {
  const Number v = (Number(2) + q(2, 3)).sqrt();
  check_passes(scale_up(pt({0, 0, 0}), on_axis(3, v), 1));
  CHECK_THROWS_AS(scale_up(pt({0, 0}), pt({1, 0}), 1), PreconditionError);
}

TEST_CASE("bound gadget") {
  SUBCASE("n=3, d=1") {
    const auto w = bound_gadget(pt({0, 0, 0}), on_axis(3, q(2, 3)), 1);
    CHECK(w.claims[0].kind == ClaimKind::UpperBound);
    CHECK(w.claims[0].value == q(2, 3));
    // Simplex of edge^2 8/3 around the midpoint z at squared radius 8/9.
    const Point z = on_axis(3, q(1, 3));
    std::vector<Point> ring;
    for (const auto& p : w.points) {
      if (dist_sq(p, z) == q(8, 9) && dist_sq(p, w.points[0]) == Number(1)) ring.push_back(p);
    }
    REQUIRE(ring.size() == 3);
    CHECK(dist_sq(ring[0], ring[1]) == q(8, 3));
    CHECK(dist_sq(ring[1], ring[2]) == q(8, 3));
    check_passes(w);
  }
  SUBCASE("n=2 is the bare pair") {
    const auto w = bound_gadget(pt({0, 0}), pt({1, 0}), 1);
    CHECK(w.points.size() == 2);
    CHECK(w.claims[0].kind == ClaimKind::UpperBound);
    CHECK(w.claims[0].value == Number(1));
  }
  SUBCASE("n=4, d=1") { check_passes(bound_gadget(geom::origin(4), on_axis(4, q(1, 2)), 1)); }
}

TEST_CASE("double gadget") {
  SUBCASE("n=2, d=1") {
    const auto w = double_gadget(pt({0, 0}), pt({2, 0}), 1);
    CHECK(w.claims[0].value == Number(2));
    CHECK(has_point(w, pt({1, 0})));
    CHECK(has_point(w, pt({3, 0})));
    check_passes(w);
  }
  SUBCASE("n=3, d=1: t collinear beyond y") {
    const auto w = double_gadget(pt({0, 0, 0}), pt({2, 0, 0}), 1);
    const Point t = on_axis(3, q(8, 3));
    CHECK(has_point(w, t));
    CHECK(dist_sq(t, w.points[1]) == q(4, 9));
    CHECK(dist_sq(t, w.points[0]) == q(64, 9));
    // |xt| = |xy| + |yt|
    CHECK(dist_sq(t, w.points[0]).sqrt() == Number(2) + dist_sq(t, w.points[1]).sqrt());
    check_passes(w);
  }
  CHECK(double_gadget(pt({0, 0}), pt({0, 3}), q(3, 2)).claims[0].value == Number(3));
}

TEST_CASE("multiple") {
  SUBCASE("k=1 reduces to d") {
    const auto w = multiple(pt({0, 0}), pt({1, 0}), 1, 1);
    CHECK(w.points.size() == 2);
    CHECK(w.claims[0].value == Number(1));
  }
  SUBCASE("k=3, d=1, n=2") {
    const auto w = multiple(pt({0, 0}), pt({3, 0}), 1, 3);
    for (long i = 0; i <= 3; ++i) CHECK(has_point(w, pt({Number(i), 0})));
    CHECK(w.derivation.figure == "Fig4");
    CHECK(count_children(w.derivation, "unit") == 3);
    CHECK(count_children(w.derivation, "Fig3") == 2);
    CHECK(w.claims[0].value == Number(3));
    check_passes(w);
  }
  CHECK_THROWS_AS(multiple(pt({0, 0}), pt({3, 0}), 1, 0), PreconditionError);
  CHECK_THROWS_AS(multiple(pt({0, 0}), pt({2, 0}), 1, 3), PreconditionError);
}

TEST_CASE("divide") {
  SUBCASE("k=1 reduces to d") { CHECK(divide(pt({0, 0}), pt({1, 0}), 1, 1).points.size() == 2); }
  SUBCASE("d=1, k=3, n=2") {
    const auto w = divide(pt({0, 0}), on_axis(2, q(1, 3)), 1, 3);
    CHECK(w.claims[0].value == q(1, 3));
    CHECK(w.derivation.figure == "Fig5");
    CHECK(w.derivation.children.size() == 7);
    // The scaled copy x~ y~ of the pair is at distance d = 1 and the ratio
    // |xy| / |x~y~| is exactly 1/k.
    const auto m = std::stol(param(w.derivation, "m"));
    int scaled_pairs = 0;
    for (std::size_t i = 0; i < w.points.size(); ++i) {
      for (std::size_t j = 0; j < w.points.size(); ++j) {
        const Point& a = w.points[i];
        const Point& b = w.points[j];
        if (dist_sq(a, b) != Number(1)) continue;
        if (dist_sq(a, w.points[0]) == Number(4 * m * m) && dist_sq(b, w.points[1]) == Number(4 * m * m)) {
          ++scaled_pairs;
          CHECK(dist_sq(w.points[0], w.points[1]) * 9 == dist_sq(a, b));
        }
      }
    }
    CHECK(scaled_pairs >= 1);
    check_passes(w);
  }
}

TEST_CASE("rationals via multiple and divide") {
  for (auto [p, d] : {std::pair{2, 3}, {5, 4}, {7, 2}}) {
    const Number v = q(p, d);
    const auto w = compile(std::to_string(p) + "/" + std::to_string(d), 2);
    CHECK(w.claims[0].value == v);
    check_passes(w);
  }
}

TEST_CASE("approximation gadget") {
  SUBCASE("x=(0,0), y=(sqrt2,0), eps=1/10") {
    const auto w = approx_gadget(pt({0, 0}), on_axis(2, Number(2).sqrt()), q(1, 10));
    const GadgetNode* t = find_node(w.derivation, "Fig6");
    REQUIRE(t != nullptr);
    const Number qv = field::parse_number(param(*t, "q"));
    const Number rv = field::parse_number(param(*t, "r"));
    CHECK(rv * 2 <= q(1, 10));
    CHECK(((qv - Number(2).sqrt()).abs() * 2) <= rv);
    // q is one of the continued-fraction convergents of sqrt(2).
    const auto conv = testsupport::sqrt_convergents(2, 12);
    CHECK(std::find(conv.begin(), conv.end(), qv.rational_value()) != conv.end());
    const Claim& c = w.claims[0];
    REQUIRE(c.kind == ClaimKind::Approx);
    const Point& z = w.points[static_cast<std::size_t>(c.via)];
    CHECK(dist_sq(z, w.points[0]) == qv * qv);
    CHECK(dist_sq(z, w.points[1]) == rv * rv);
    check_passes(w);
  }
  SUBCASE("rational distance, large eps: two rational legs") {
    const auto w = approx_gadget(pt({0, 0}), pt({3, 0}), 100);
    const Claim& c = w.claims[0];
    const Point& z = w.points[static_cast<std::size_t>(c.via)];
    CHECK(dist_sq(z, w.points[0]).sqrt().is_rational());
    CHECK(dist_sq(z, w.points[1]).sqrt().is_rational());
    check_passes(w);
  }
  CHECK_THROWS_AS(approx_gadget(pt({0, 0}), pt({1, 0}), 0), PreconditionError);
  CHECK_THROWS_AS(approx_gadget(pt({0, 0}), pt({1, 0}), -1), PreconditionError);
}

TEST_CASE("Apollonius difference") {
  SUBCASE("a=2, b=1") {
    const auto w = pyth_diff(pt({0, 0}), on_axis(2, Number(3).sqrt()), 2, 1);
    CHECK(w.claims[0].value == Number(3).sqrt());
    check_passes(w);
  }
  SUBCASE("a=sqrt3, b=1") {
    const auto w = pyth_diff(pt({0, 0}), on_axis(2, Number(2).sqrt()), Number(3).sqrt(), 1);
    CHECK(w.claims[0].value == Number(2).sqrt());
    check_passes(w);
  }
  SUBCASE("a=5, b=4") {
    const auto w = pyth_diff(pt({0, 0}), pt({3, 0}), 5, 4);
    CHECK(w.claims[0].value == Number(3));
    CHECK(w.derivation.children.size() == 5);
    check_passes(w);
  }
  CHECK_THROWS_AS(pyth_diff(pt({0, 0}), pt({3, 0}), 4, 5), PreconditionError);
}

TEST_CASE("difference and sum") {
  SUBCASE("a=2, b=1, n=2") {
    const auto w = diff_sum(pt({0, 0}), pt({1, 0}), 2, 1, Mode::Diff);
    CHECK(w.claims[0].value == Number(1));
    // Leg lengths: a^2 + 1 - 1/n^2 and b^2 + 1 - 1/n^2.
    int legs_x = 0, legs_y = 0;
    for (const auto& c : w.derivation.children) {
      if (c.figure != "Fig7" || c.pair.size() != 2) continue;
      const Number d2 = dist_sq(w.points[static_cast<std::size_t>(c.pair[0])],
                                w.points[static_cast<std::size_t>(c.pair[1])]);
      if (d2 == q(19, 4)) ++legs_x;
      if (d2 == q(7, 4)) ++legs_y;
    }
    CHECK(legs_x == 2);
    CHECK(legs_y == 2);
    CHECK(find_node(w.derivation, "Fig6") != nullptr);
    check_passes(w);
  }
  SUBCASE("sum a=1, b=1/2 equals the rational path") {
    const auto w = diff_sum(pt({0, 0}), on_axis(2, q(3, 2)), 1, q(1, 2), Mode::Sum);
    CHECK(w.claims[0].value == compile("3/2", 2).claims[0].value);
    check_passes(w);
  }
  CHECK_THROWS_AS(diff_sum(pt({0, 0}), pt({1, 0}), 1, 2, Mode::Diff), PreconditionError);
}

TEST_CASE("ratio") {
  SUBCASE("a = c gives b") {
    const auto w = ratio(pt({0, 0}), pt({2, 0}), 3, 2, 3);
    CHECK(w.claims[0].value == Number(2));
    check_passes(w);
  }
  SUBCASE("a=2, b=1, c=3") {
    const auto w = ratio(pt({0, 0}), on_axis(2, q(2, 3)), 2, 1, 3);
    CHECK(w.claims[0].value == compile("2/3", 2).claims[0].value);
    const long m = std::stol(param(w.derivation, "m"));
    CHECK(Number(1) < Number(2 * m * 3));
    check_passes(w);
  }
  SUBCASE("reciprocal") {
    const auto w = ratio(pt({0, 0}), on_axis(2, q(1, 5)), 1, 1, 5);
    CHECK(w.claims[0].value == q(1, 5));
    check_passes(w);
  }
  CHECK_THROWS_AS(ratio(pt({0, 0}), pt({1, 0}), 0, 1, 1), PreconditionError);
}

TEST_CASE("square root gadget") {
  SUBCASE("a=4 matches the integer path") {
    const auto w = sqrt_gadget(pt({0, 0}), pt({2, 0}), 4);
    CHECK(w.claims[0].value == compile("2", 2).claims[0].value);
    check_passes(w);
  }
  SUBCASE("a=2") {
    const auto w = sqrt_gadget(pt({0, 0}), on_axis(2, Number(2).sqrt()), 2);
    CHECK(w.claims[0].value * w.claims[0].value == Number(2));
    check_passes(w);
  }
  SUBCASE("a=1/3 through the reciprocal") {
    const auto w = sqrt_gadget(pt({0, 0}), on_axis(2, q(1, 3).sqrt()), q(1, 3));
    CHECK(w.claims[0].value == Number(1) / Number(3).sqrt());
    CHECK(find_node(w.derivation, "Fig9") != nullptr);
    check_passes(w);
  }
  CHECK_THROWS_AS(sqrt_gadget(pt({0, 0}), pt({1, 0}), 0), PreconditionError);
}

TEST_CASE("compile") {
  SUBCASE("1 is a unit pair") {
    const auto w = compile("1", 2);
    CHECK(w.points.size() == 2);
    CHECK(w.unit_edges.size() == 1);
  }
  SUBCASE("3/5") {
    const auto w = compile("3/5", 2);
    CHECK(w.claims[0].value == q(3, 5));
    check_passes(w);
  }
  SUBCASE("sqrt(2+2/2) matches scale_up") {
    const auto w = compile("sqrt(2+2/2)", 2);
    CHECK(w.claims[0].value == scale_up(pt({0, 0}), on_axis(2, Number(3).sqrt()), 1).claims[0].value);
    check_passes(w);
  }
  SUBCASE("anchor and direction") {
    const Point anchor = pt({1, q(1, 2)});
    const Point dir = pt({q(3, 5), q(4, 5)});
    const auto w = compile("sqrt(2)", 2, anchor, dir);
    CHECK(geom::same_point(w.points[0], anchor));
    CHECK(dist_sq(w.points[0], w.points[1]) == Number(2));
    check_passes(w);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(compile("1", 1), PreconditionError);
    CHECK_THROWS_AS(compile("1-1", 2), DomainError);
    CHECK_THROWS_AS(compile("sqrt(", 2), ParseError);
    CHECK_THROWS_AS(compile("1", 2, pt({0, 0}), pt({1, 1})), PreconditionError);
  }
}

TEST_CASE("deduplication never merges distinct points") {
  const auto w = compile("1+sqrt(2)", 2);
  for (std::size_t i = 0; i < w.points.size(); ++i) {
    for (std::size_t j = i + 1; j < w.points.size(); ++j) CHECK(!geom::same_point(w.points[i], w.points[j]));
  }
}

TEST_CASE("construction is deterministic") {
  const auto a = compile("22/7", 3), b = compile("22/7", 3);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(geom::same_point(a.points[i], b.points[i]));
  CHECK(a.unit_edges == b.unit_edges);
  CHECK(a.derivation.size() == b.derivation.size());
}
