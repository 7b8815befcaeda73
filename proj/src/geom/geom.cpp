#include "geom/geom.hpp"

#include <algorithm>

#include "errors.hpp"

namespace bqw::geom {

namespace {
void check_dims(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw PreconditionError("dimension mismatch");
}
}  // namespace

Point origin(int dim) { return Point(static_cast<std::size_t>(dim), Number(0)); }

Vec axis(int dim, int k) {
  Vec v = origin(dim);
  v[static_cast<std::size_t>(k)] = Number(1);
  return v;
}

Vec sub(const Point& a, const Point& b) {
  check_dims(a, b);
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Point add(const Point& a, const Vec& v) {
  check_dims(a, v);
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + v[i];
  return out;
}

Vec scale(const Vec& v, const Number& s) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * s;
  return out;
}

Number dot(const Vec& a, const Vec& b) {
  check_dims(a, b);
  Number s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Number dist_sq(const Point& a, const Point& b) {
  Vec d = sub(a, b);
  return dot(d, d);
}

Point midpoint(const Point& a, const Point& b) { return lerp(a, b, Number::rational(1, 2)); }

Point lerp(const Point& a, const Point& b, const Number& t) { return add(a, scale(sub(b, a), t)); }

bool same_point(const Point& a, const Point& b) {
  check_dims(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

bool is_zero_vec(const Vec& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Frame complement_frame(const Vec& e, const Number& len) {
  const int n = static_cast<int>(e.size());
  if (len.sign() <= 0) throw PreconditionError("complement of a zero vector");
  Vec u = scale(e, Number(1) / len);
  Frame out;
  if (n == 2) {
    out.push_back({-u[1], u[0]});
    return out;
  }
  int nonzero = 0, which = -1;
  for (int i = 0; i < n; ++i) {
    if (!u[static_cast<std::size_t>(i)].is_zero()) {
      ++nonzero;
      which = i;
    }
  }
  if (nonzero == 1) {
    for (int i = 0; i < n; ++i) {
      if (i != which) out.push_back(axis(n, i));
    }
    return out;
  }
  // Householder reflection taking e_0 to u; its other columns are the frame.
  Vec v = scale(u, Number(-1));
  v[0] += Number(1);
  const Number inv = Number(1) / (Number(1) - u[0]);
  for (int j = 1; j < n; ++j) {
    Vec col = scale(v, u[static_cast<std::size_t>(j)] * inv);
    col[static_cast<std::size_t>(j)] += Number(1);
    out.push_back(std::move(col));
  }
  return out;
}

Number simplex_circumradius_sq(int n, const Number& edge) {
  return edge * edge * Number::rational(n - 1, 2L * n);
}

std::vector<Point> regular_simplex(int n, const Number& edge, const Point& center,
                                   const Frame& frame) {
  if (n < 2) throw PreconditionError("simplex needs at least two vertices");
  if (static_cast<int>(frame.size()) < n - 1) throw PreconditionError("degenerate frame");
  // Unit-edge coordinates in R^{n-1}, centroid at the origin. Step k appends
  // a vertex above the current k-vertex simplex at total height
  // sqrt((k+1)/(2k)).
  std::vector<std::vector<Number>> c(static_cast<std::size_t>(n),
                                     std::vector<Number>(static_cast<std::size_t>(n - 1)));
  c[0][0] = Number::rational(-1, 2);
  c[1][0] = Number::rational(1, 2);
  for (int k = 2; k < n; ++k) {
    const Number h = Number::rational(k + 1, 2L * k).sqrt();
    for (int i = 0; i < k; ++i) {
      c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)] = -h / (k + 1);
    }
    c[static_cast<std::size_t>(k)][static_cast<std::size_t>(k - 1)] = h * k / (k + 1);
  }
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    Point p = center;
    for (int j = 0; j < n - 1; ++j) {
      const Number& cij = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (cij.is_zero()) continue;
      p = add(p, scale(frame[static_cast<std::size_t>(j)], cij * edge));
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// Determinant by Gaussian elimination over the field.
Number determinant(std::vector<std::vector<Number>> m) {
  const std::size_t n = m.size();
  Number det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return Number(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const Number inv = Number(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      const Number f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace

Point apex(const std::vector<Point>& simplex, const Number& r, int side) {
  const std::size_t n = simplex.size();
  if (n < 2 || simplex[0].size() != n) throw PreconditionError("apex needs n vertices in n-space");
  Point c = origin(static_cast<int>(n));
  for (const auto& p : simplex) c = add(c, p);
  c = scale(c, Number::rational(1, static_cast<long>(n)));
  const Number rho2 = dist_sq(c, simplex[0]);
  const Number h2 = r * r - rho2;
  if (h2.sign() < 0) throw DomainError("apex radius below circumradius");
  // Cofactor normal of the hull directions p_i - p_0.
  std::vector<Vec> dirs;
  for (std::size_t i = 1; i < n; ++i) dirs.push_back(sub(simplex[i], simplex[0]));
  Vec normal(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<Number>> minor;
    for (const auto& d : dirs) {
      std::vector<Number> row;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) row.push_back(d[j]);
      }
      minor.push_back(std::move(row));
    }
    Number m = determinant(std::move(minor));
    normal[k] = ((k % 2) ? -m : m);
  }
  const Number nn = dot(normal, normal);
  if (nn.is_zero()) throw PreconditionError("degenerate simplex");
  const Number t = (h2 / nn).sqrt();
  return add(c, scale(normal, side >= 0 ? t : -t));
}

Point reflect(const Point& p, const Hyperplane& h) {
  const Number nn = dot(h.normal, h.normal);
  if (nn.is_zero()) throw PreconditionError("hyperplane with zero normal");
  const Number s = dot(sub(p, h.base), h.normal) * 2 / nn;
  return add(p, scale(h.normal, -s));
}

Hyperplane mirror_between(const Point& x, const Point& y) {
  if (same_point(x, y)) throw PreconditionError("mirror between coincident points");
  return {midpoint(x, y), sub(y, x)};
}

Point invert(const Point& center, const Number& power, const Point& p) {
  const Number d2 = dist_sq(p, center);
  if (d2.is_zero()) throw DomainError("inversion of the center");
  return add(center, scale(sub(p, center), power / d2));
}

Point sphere_intersect_point(const Point& c1, const Number& r1, const Point& c2, const Number& r2,
                             const Frame& hints, int side) {
  const Vec e = sub(c2, c1);
  const Number dd = dot(e, e);
  if (dd.is_zero()) throw PreconditionError("concentric spheres");
  const Number t = (dd + r1 * r1 - r2 * r2) / (dd * 2);
  const Number h2 = r1 * r1 - t * t * dd;
  if (h2.sign() < 0) throw DomainError("spheres do not intersect");
  const Point foot = add(c1, scale(e, t));
  if (h2.is_zero()) return foot;
  Frame cand = hints;
  for (int k = 0; k < static_cast<int>(c1.size()); ++k) cand.push_back(axis(static_cast<int>(c1.size()), k));
  for (const auto& w : cand) {
    Vec perp = sub(w, scale(e, dot(w, e) / dd));
    const Number pp = dot(perp, perp);
    if (pp.is_zero()) continue;
    const Number s = (h2 / pp).sqrt();
    return add(foot, scale(perp, side >= 0 ? s : -s));
  }
  throw PreconditionError("no direction transverse to the center line");
}

int rank(std::vector<Vec> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  int r = 0;
  for (std::size_t col = 0; col < cols && r < static_cast<int>(rows.size()); ++col) {
    std::size_t piv = static_cast<std::size_t>(r);
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<std::size_t>(r)]);
    const Vec& pr = rows[static_cast<std::size_t>(r)];
    const Number inv = Number(1) / pr[col];
    for (std::size_t i = static_cast<std::size_t>(r) + 1; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) continue;
      const Number f = rows[i][col] * inv;
      for (std::size_t c = col; c < cols; ++c) rows[i][c] -= f * pr[c];
    }
    ++r;
  }
  return r;
}

Vec null_vector(std::vector<Vec> rows, int n) {
  const std::size_t cols = static_cast<std::size_t>(n);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    const Number inv = Number(1) / rows[r][col];
    for (std::size_t c = col; c < cols; ++c) rows[r][c] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col].is_zero()) continue;
      const Number f = rows[i][col];
      for (std::size_t c = col; c < cols; ++c) rows[i][c] -= f * rows[r][c];
    }
    pivots.push_back(col);
    ++r;
  }
  std::size_t free_col = 0;
  while (free_col < cols && std::find(pivots.begin(), pivots.end(), free_col) != pivots.end()) ++free_col;
  if (free_col == cols) throw PreconditionError("rows have full rank");
  Vec v(cols, Number(0));
  v[free_col] = Number(1);
  for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -rows[i][free_col];
  return v;
}

bool affinely_degenerate(const std::vector<Point>& pts) {
  if (pts.empty()) return true;
  const int n = static_cast<int>(pts[0].size());
  std::vector<Vec> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  return rank(diffs) < n;
}

}  // namespace bqw::geom
