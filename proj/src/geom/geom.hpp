#pragma once

#include <vector>

#include "field/number.hpp"

namespace bqw::geom {

using field::Number;
using Point = std::vector<Number>;
using Vec = std::vector<Number>;
// Pairwise orthogonal unit vectors.
using Frame = std::vector<Vec>;

struct Hyperplane {
  Point base;
  Vec normal;
};

Point origin(int dim);
Vec axis(int dim, int k);
Vec sub(const Point& a, const Point& b);
Point add(const Point& a, const Vec& v);
Vec scale(const Vec& v, const Number& s);
Number dot(const Vec& a, const Vec& b);
Number dist_sq(const Point& a, const Point& b);
Point midpoint(const Point& a, const Point& b);
// a + t (b - a)
Point lerp(const Point& a, const Point& b, const Number& t);
bool same_point(const Point& a, const Point& b);
bool is_zero_vec(const Vec& v);

// n-1 orthonormal vectors perpendicular to e, where len = |e| > 0 is known
// exactly. Entries stay in the field of e and len.
Frame complement_frame(const Vec& e, const Number& len);

// n vertices with pairwise distance `edge`, centroid `center`, spanning
// center + span(frame); frame holds n-1 orthonormal vectors.
std::vector<Point> regular_simplex(int n, const Number& edge, const Point& center,
                                   const Frame& frame);
// Squared circumradius of the regular simplex with n vertices and given edge.
Number simplex_circumradius_sq(int n, const Number& edge);

// Point at distance r from every vertex of a simplex with n vertices in
// n-space, on the side `side` of its hull.
Point apex(const std::vector<Point>& simplex, const Number& r, int side = 1);

Point reflect(const Point& p, const Hyperplane& h);
Hyperplane mirror_between(const Point& x, const Point& y);
Point invert(const Point& center, const Number& power, const Point& p);

// A point at distance r1 from c1 and r2 from c2 in the plane spanned by c2-c1
// and the first hint vector not parallel to it (axes when hints are empty).
Point sphere_intersect_point(const Point& c1, const Number& r1, const Point& c2, const Number& r2,
                             const Frame& hints = {}, int side = 1);

// Exact rank of a list of vectors (Gaussian elimination over the field).
int rank(std::vector<Vec> rows);
// A nonzero vector orthogonal to every row; the rows (each of length n) must
// have rank < n. The first free column of the echelon form is set to 1.
Vec null_vector(std::vector<Vec> rows, int n);
// True when the points lie on a common affine hyperplane of their space.
bool affinely_degenerate(const std::vector<Point>& pts);

}  // namespace bqw::geom
