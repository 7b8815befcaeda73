#include "relations/relations.hpp"

#include "errors.hpp"
#include "gadgets/assembly.hpp"

namespace bqw::relations {

using gadgets::Assembly;
using gadgets::add_param;
using gadgets::make_node;

namespace {

Number norm(const geom::Vec& v) { return geom::dot(v, v).sqrt(); }

long least_u(const Number& max_d2) {
  // Least integer u >= 1 with 4u^2 >= max_d2.
  long u = std::max(1L, floor(max_d2.sqrt() / 2).get_si());
  while (Number(4 * u * u) < max_d2) ++u;
  return u;
}

// Regular simplex with n vertices inscribed in the (n-2)-sphere of squared
// radius rho2 around `center` inside the hyperplane orthogonal to `normal`.
std::vector<Point> inscribed_simplex(int n, const Point& center, const geom::Vec& normal,
                                     const Number& rho2) {
  const geom::Frame frame = geom::complement_frame(normal, norm(normal));
  const Number edge = (rho2 * (2 * n) / (n - 1)).sqrt();
  return geom::regular_simplex(n, edge, center, frame);
}

// The union of inversor cells over the given indices, which must lie on a
// common hyperplane.
std::vector<PeaucellierCell> hyperplane_cells(Assembly& as, const std::vector<int>& xs,
                                              GadgetNode& parent) {
  const int n = as.dim();
  std::vector<Point> X;
  for (int i : xs) X.push_back(as.at(i));
  if (X.empty()) throw PreconditionError("hyperplane witness needs at least one point");
  std::vector<geom::Vec> diffs;
  for (std::size_t i = 1; i < X.size(); ++i) diffs.push_back(geom::sub(X[i], X[0]));
  if (!diffs.empty() && geom::rank(diffs) >= n) {
    throw PreconditionError("points do not lie on a common hyperplane");
  }
  const geom::Vec normal = geom::null_vector(diffs, n);
  const Number nlen = norm(normal);
  const geom::Vec unit_normal = geom::scale(normal, Number(1) / nlen);
  const geom::Frame in_plane = geom::complement_frame(normal, nlen);

  Point P = geom::origin(n);
  for (const auto& x : X) P = geom::add(P, x);
  P = geom::scale(P, Number::rational(1, static_cast<long>(X.size())));
  auto collides = [&](const Point& q) {
    for (const auto& x : X) {
      if (geom::same_point(q, x)) return true;
    }
    return false;
  };
  if (collides(P)) {
    Number step(1);
    Point moved = geom::add(P, in_plane.at(0));
    for (int tries = 0; collides(moved); ++tries) {
      if (tries > 64) throw PreconditionError("no free base point on the hyperplane");
      step = step / 2;
      moved = geom::add(P, geom::scale(in_plane.at(0), step));
    }
    P = moved;
  }
  Number max_d2(0);
  for (const auto& x : X) max_d2 = std::max(max_d2, geom::dist_sq(P, x));
  const long u = least_u(max_d2);
  const Point O = geom::add(P, geom::scale(unit_normal, Number(4 * u)));
  const Number power(32 * u * u);

  GadgetNode node = make_node("Fig10", {});
  add_param(node, "u", u);
  const int ip = as.add(P);
  const int io = as.add(O);
  node.pair = {ip, io};
  as.force(ip, io, node);
  std::vector<PeaucellierCell> cells;
  for (std::size_t k = 0; k < X.size(); ++k) {
    PeaucellierCell c;
    c.u = u;
    c.P = ip;
    c.O = io;
    c.X = xs[k];
    const Point& x = X[k];
    c.T = as.add(geom::sphere_intersect_point(P, Number(u), x, Number(u), {unit_normal}));
    const Point A = geom::invert(O, power, x);
    c.A = as.add(A);
    const geom::Vec xa = geom::sub(A, x);
    const Number rho2 = Number(4 * u * u) - geom::dot(xa, xa) / 4;
    if (rho2.sign() <= 0) throw PreconditionError("degenerate inversor cell");
    for (const auto& b : inscribed_simplex(n, geom::midpoint(x, A), xa, rho2)) c.B.push_back(as.add(b));
    as.force(ip, c.T, node);
    as.force(c.T, c.X, node);
    as.force(ip, c.A, node);
    for (int b : c.B) {
      as.force(c.X, b, node);
      as.force(c.A, b, node);
      as.force(io, b, node);
    }
    for (std::size_t i = 0; i < c.B.size(); ++i) {
      for (std::size_t j = i + 1; j < c.B.size(); ++j) as.separate(c.B[i], c.B[j], node);
    }
    cells.push_back(std::move(c));
  }
  parent.children.push_back(std::move(node));
  return cells;
}

void require_dim(const std::vector<Point>& pts, int n) {
  if (n < 2) throw PreconditionError("dimension must be at least 2");
  for (const auto& p : pts) {
    if (static_cast<int>(p.size()) != n) throw PreconditionError("point dimension mismatch");
  }
}

// Points on H at integer distance from both p and its mirror image q, with
// the legs and separation gadgets of one side of the symmetric construction.
std::vector<int> mirror_side(Assembly& as, int ip, int iq, const char* name, GadgetNode& node) {
  const Point& p = as.at(ip);
  const Point& q = as.at(iq);
  const Point foot = geom::midpoint(p, q);
  const Number h2 = geom::dist_sq(p, foot);
  const mpz_class s = field::next_integer_above(h2.sqrt());
  add_param(node, name, s.get_si());
  const Number s_num(s);
  const auto pts = inscribed_simplex(as.dim(), foot, geom::sub(q, p), s_num * s_num - h2);
  std::vector<int> ids;
  for (const auto& x : pts) ids.push_back(as.add(x));
  for (int x : ids) {
    as.force(x, ip, node);
    as.force(x, iq, node);
  }
  as.separate(ip, iq, node);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) as.separate(ids[i], ids[j], node);
  }
  return ids;
}

// C_JKLM for L, M the mirror images of J, K in a common hyperplane.
void symmetric_instance(Assembly& as, int J, int K, int L, int M, GadgetNode& parent) {
  const bool jl = J == L;
  const bool km = K == M;
  if (jl && km) return;
  GadgetNode node = make_node(jl || km ? "Fig11c" : "Fig11ab", {J, K, L, M});
  std::vector<int> on_plane;
  if (!jl) {
    auto xs = mirror_side(as, J, L, "s", node);
    on_plane.insert(on_plane.end(), xs.begin(), xs.end());
  } else {
    on_plane.push_back(J);
  }
  if (!km) {
    auto ys = mirror_side(as, K, M, "t", node);
    on_plane.insert(on_plane.end(), ys.begin(), ys.end());
  } else {
    on_plane.push_back(K);
  }
  hyperplane_cells(as, on_plane, node);
  if (!jl && !km) {
    const Number jk = geom::dist_sq(as.at(J), as.at(K)).sqrt();
    const Number jm = geom::dist_sq(as.at(J), as.at(M)).sqrt();
    const Number delta = (jm - jk).abs() / 3;
    if (delta.is_zero()) {
      throw PreconditionError("|JK| = |JM|: the symmetric construction needs delta > 0");
    }
    add_param(node, "delta", delta);
    as.approx(J, K, delta, node);
    as.approx(L, M, delta, node);
    as.approx(J, M, delta, node);
    as.approx(L, K, delta, node);
  }
  parent.children.push_back(std::move(node));
}

}  // namespace

HyperplaneWitness hyperplane_construct(const std::vector<Point>& X, int n) {
  require_dim(X, n);
  Assembly as(n);
  std::vector<int> xs;
  for (const auto& x : X) xs.push_back(as.add(x));
  GadgetNode root = make_node("hyperplane", {});
  auto cells = hyperplane_cells(as, xs, root);
  Claim c;
  c.kind = ClaimKind::Hyperplane;
  c.points = xs;
  return {as.finish({c}, std::move(root)), std::move(cells)};
}

WitnessSet hyperplane_witness(const std::vector<Point>& X, int n) {
  return hyperplane_construct(X, n).witness;
}

Reflections proposition_reflections(const Point& J, const Point& K, const Point& L, const Point& M) {
  if (geom::dist_sq(J, K) != geom::dist_sq(L, M)) throw PreconditionError("|JK| != |LM|");
  Reflections r;
  r.A = L;
  if (geom::same_point(J, L)) {
    r.B = K;
  } else {
    r.H1 = geom::mirror_between(J, L);
    r.B = geom::reflect(K, *r.H1);
  }
  if (!geom::same_point(r.B, M)) r.H2 = geom::mirror_between(r.B, M);
  return r;
}

WitnessSet equal_distance_witness(const Point& J, const Point& K, const Point& L, const Point& M,
                                  int n) {
  require_dim({J, K, L, M}, n);
  const Reflections r = proposition_reflections(J, K, L, M);
  Assembly as(n);
  const int j = as.add(J), k = as.add(K), l = as.add(L), m = as.add(M);
  const int b = as.add(r.B);
  GadgetNode root = make_node("equal", {j, k, l, m});
  // C_JKAB with A = L, then C_ABLM.
  symmetric_instance(as, j, k, l, b, root);
  symmetric_instance(as, l, b, l, m, root);
  Claim c;
  c.kind = ClaimKind::EqualDistance;
  c.points = {j, k, l, m};
  return as.finish({c}, std::move(root));
}

WitnessSet distinct_witness(const Point& p, const Point& q) {
  require_dim({q}, static_cast<int>(p.size()));
  if (geom::same_point(p, q)) throw PreconditionError("distinct witness needs p != q");
  Assembly as(static_cast<int>(p.size()));
  const int ip = as.add(p), iq = as.add(q);
  GadgetNode root = make_node("distinct", {ip, iq});
  const Number d = geom::dist_sq(p, q).sqrt();
  Claim t = as.approx(ip, iq, d / 2, root);
  Claim c;
  c.kind = ClaimKind::Distinct;
  c.points = {ip, iq};
  return as.finish({c, t}, std::move(root));
}

WitnessSet less_than_witness(const Point& J, const Point& K, const Point& L, const Point& M) {
  const int n = static_cast<int>(J.size());
  require_dim({J, K, L, M}, n);
  const Number jk = geom::dist_sq(J, K).sqrt();
  const Number lm = geom::dist_sq(L, M).sqrt();
  if (jk >= lm) throw PreconditionError("less-than witness needs |JK| < |LM|");
  const Number eps = (lm - jk) / 3;
  Assembly as(n);
  const int j = as.add(J), k = as.add(K), l = as.add(L), m = as.add(M);
  GadgetNode root = make_node("less", {j, k, l, m});
  add_param(root, "eps", eps);
  Claim c;
  c.kind = ClaimKind::LessThan;
  c.points = {j, k, l, m};
  std::vector<Claim> claims{c};
  if (j != k) claims.push_back(as.approx(j, k, eps, root));
  claims.push_back(as.approx(l, m, eps, root));
  return as.finish(std::move(claims), std::move(root));
}

}  // namespace bqw::relations
