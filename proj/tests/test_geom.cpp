#include "doctest.h"

#include "errors.hpp"
#include "geom/geom.hpp"
#include "support.hpp"

using namespace bqw::geom;
using bqw::field::Number;
using testsupport::pt;
using testsupport::q;

namespace {

Frame frame_perp_to_axis0(int n) {
  Frame f;
  for (int k = 1; k < n; ++k) f.push_back(axis(n, k));
  return f;
}

Point random_point(testsupport::ExprGen& g, int n) {
  Point p;
  for (int i = 0; i < n; ++i) {
    p.push_back(g.uniform(0, 3) == 0 ? Number(g.uniform(2, 7)).sqrt() : q(g.uniform(-20, 20), g.uniform(1, 6)));
  }
  return p;
}

}  // namespace

TEST_CASE("dist_sq") {
  const Point p = pt({q(1, 3), Number(2).sqrt()});
  CHECK(dist_sq(p, p).is_zero());
  CHECK(dist_sq(pt({0, 0}), pt({1, 1})) == Number(2));
  CHECK_THROWS(dist_sq(pt({0, 0}), pt({0, 0, 0})));
}

TEST_CASE("two apexes of a unit triangle pair are sqrt(3) apart") {
  // Edge d = 1 in the plane: apexes of the segment at radius 1.
  const auto s = regular_simplex(2, 1, origin(2), frame_perp_to_axis0(2));
  const Point x = apex(s, 1, 1), y = apex(s, 1, -1);
  CHECK(dist_sq(x, y) == Number(3));
}

TEST_CASE("regular simplex") {
  SUBCASE("n=2 edge 1") {
    const auto s = regular_simplex(2, 1, origin(2), frame_perp_to_axis0(2));
    REQUIRE(s.size() == 2);
    CHECK(dist_sq(s[0], s[1]) == Number(1));
    CHECK(dist_sq(s[0], origin(2)) == q(1, 4));
  }
  SUBCASE("n=3 edge sqrt(2+2/3)") {
    const Number e = (Number(2) + q(2, 3)).sqrt();
    const auto s = regular_simplex(3, e, origin(3), frame_perp_to_axis0(3));
    for (const auto& v : s) CHECK(dist_sq(v, origin(3)) == q(8, 9));
    CHECK(simplex_circumradius_sq(3, e) == q(8, 9));
  }
  SUBCASE("n=4 edge 1, all pairs") {
    const Point c = pt({1, q(1, 2), 0, Number(2).sqrt()});
    const auto s = regular_simplex(4, 1, c, frame_perp_to_axis0(4));
    int pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j, ++pairs) CHECK(dist_sq(s[i], s[j]) == Number(1));
    }
    CHECK(pairs == 6);
    Point centroid = origin(4);
    for (const auto& v : s) centroid = add(centroid, v);
    CHECK(same_point(scale(centroid, q(1, 4)), c));
    for (const auto& v : s) CHECK(dot(sub(v, c), axis(4, 0)).is_zero());
  }
}

TEST_CASE("apex heights and separations") {
  const auto s = regular_simplex(2, 1, origin(2), frame_perp_to_axis0(2));
  const Point a = apex(s, 1, 1);
  CHECK(dist_sq(a, origin(2)) == q(3, 4));
  CHECK_THROWS_AS(apex(s, q(1, 3), 1), bqw::DomainError);
}

TEST_CASE("simplex identity chain for n = 2..6") {
  testsupport::ExprGen g(3);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 3; ++trial) {
      const Number d = trial == 0 ? Number(1) : (trial == 1 ? q(g.uniform(1, 9), g.uniform(1, 9)) : Number(5).sqrt());
      const Frame f = frame_perp_to_axis0(n);
      // Edge d, apex radius d.
      const auto s1 = regular_simplex(n, d, origin(n), f);
      CHECK(dist_sq(apex(s1, d, 1), apex(s1, d, -1)) == (Number(2) + Number(2) / n) * d * d);
      // Edge sqrt(2+2/n) d, apex radius d.
      const Number e = (Number(2) + Number(2) / n).sqrt() * d;
      const auto s2 = regular_simplex(n, e, origin(n), f);
      CHECK(simplex_circumradius_sq(n, e) == (Number(1) - Number(1) / (n * n)) * d * d);
      CHECK(dist_sq(s2[0], origin(n)) == (Number(1) - Number(1) / (n * n)) * d * d);
      const Number two_over_n = Number(2) / n;
      CHECK(dist_sq(apex(s2, d, 1), apex(s2, d, -1)) == two_over_n * two_over_n * d * d);
    }
  }
}

TEST_CASE("reflections") {
  const Hyperplane h{origin(2), pt({1, 0})};
  CHECK(same_point(reflect(pt({2, 0}), h), pt({-2, 0})));
  CHECK(same_point(reflect(pt({0, 5}), h), pt({0, 5})));
  const Hyperplane m = mirror_between(pt({0, 0}), pt({2, 0}));
  CHECK(same_point(m.base, pt({1, 0})));
  CHECK(m.normal[1].is_zero());
  CHECK(m.normal[0].sign() != 0);
  CHECK_THROWS_AS(mirror_between(pt({1, 1}), pt({1, 1})), bqw::PreconditionError);

  testsupport::ExprGen g(17);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 3;
    const Point x = random_point(g, n), y = random_point(g, n);
    if (same_point(x, y)) continue;
    const Hyperplane hxy = mirror_between(x, y);
    CHECK(same_point(reflect(x, hxy), y));
    const Point p = random_point(g, n), r = random_point(g, n);
    CHECK(same_point(reflect(reflect(p, hxy), hxy), p));
    CHECK(dist_sq(reflect(p, hxy), reflect(r, hxy)) == dist_sq(p, r));
  }
}

TEST_CASE("inversion") {
  CHECK(same_point(invert(origin(2), 32, pt({4, 0})), pt({8, 0})));
  const Point on_circle = pt({4, 4});
  CHECK(same_point(invert(origin(2), 32, on_circle), on_circle));
  CHECK_THROWS_AS(invert(origin(2), 32, origin(2)), bqw::DomainError);

  testsupport::ExprGen g(23);
  const Point c = pt({1, q(1, 2), 0});
  for (int i = 0; i < 30; ++i) {
    const Point p = random_point(g, 3);
    if (same_point(p, c)) continue;
    const Number power = q(g.uniform(1, 40), g.uniform(1, 3));
    const Point ip = invert(c, power, p);
    CHECK(same_point(invert(c, power, ip), p));
    CHECK(dist_sq(c, p) * dist_sq(c, ip) == power * power);
  }
}

TEST_CASE("inversion maps a hyperplane onto a sphere through the center") {
  // Plane x = 3 inverted in the unit power circle at the origin lands on the
  // sphere with diameter [0, 1/3] along the first axis.
  testsupport::ExprGen g(31);
  const Point centre = pt({q(1, 6), 0, 0});
  for (int i = 0; i < 30; ++i) {
    const Point p = pt({3, q(g.uniform(-9, 9), g.uniform(1, 4)), Number(g.uniform(0, 5)).sqrt()});
    const Point ip = invert(origin(3), 1, p);
    CHECK(dist_sq(ip, centre) == q(1, 36));
  }
}

TEST_CASE("sphere intersection") {
  SUBCASE("tangent") {
    const Point z = sphere_intersect_point(pt({0, 0}), 1, pt({3, 0}), 2);
    CHECK(same_point(z, pt({1, 0})));
  }
  SUBCASE("symmetric lens") {
    const Number r = Number(2).sqrt();
    const Point z = sphere_intersect_point(pt({0, 0}), r, pt({2, 0}), r);
    CHECK(z[0] == Number(1));
    CHECK(z[1].abs() == Number(1));
    const Point w = sphere_intersect_point(pt({0, 0}), r, pt({2, 0}), r, {}, -1);
    CHECK(w[1] == -z[1]);
  }
  SUBCASE("empty") {
    CHECK_THROWS_AS(sphere_intersect_point(pt({0, 0}), 1, pt({5, 0}), 1), bqw::DomainError);
  }
  SUBCASE("random constructible inputs") {
    testsupport::ExprGen g(41);
    for (int i = 0; i < 30; ++i) {
      const int n = 2 + i % 2;
      const Point a = random_point(g, n), b = random_point(g, n);
      if (same_point(a, b)) continue;
      const Number d = dist_sq(a, b).sqrt();
      const Number r1 = d * q(g.uniform(5, 9), 10);
      const Number r2 = d * q(g.uniform(5, 9), 10);
      const Point z = sphere_intersect_point(a, r1, b, r2);
      CHECK(dist_sq(z, a) == r1 * r1);
      CHECK(dist_sq(z, b) == r2 * r2);
    }
  }
}

TEST_CASE("exact rank and null vectors") {
  CHECK(rank({pt({1, 0, 0}), pt({0, 1, 0}), pt({1, 1, 0})}) == 2);
  CHECK(rank({pt({1, Number(2).sqrt()}), pt({Number(2).sqrt(), 2})}) == 1);
  const Vec v = null_vector({pt({1, 2, 3}), pt({0, 1, 1})}, 3);
  CHECK(!is_zero_vec(v));
  CHECK(dot(v, pt({1, 2, 3})).is_zero());
  CHECK(dot(v, pt({0, 1, 1})).is_zero());
  CHECK(affinely_degenerate({pt({0, 0}), pt({1, 1}), pt({2, 2})}));
  CHECK(!affinely_degenerate({pt({0, 0}), pt({1, 0}), pt({0, 1})}));
}
