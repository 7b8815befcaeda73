#include "gadgets/realize.hpp"

#include "errors.hpp"

namespace bqw::gadgets {

using geom::Frame;
using geom::Vec;

GadgetNode make_node(const std::string& figure, std::vector<int> pair) {
  GadgetNode n;
  n.figure = figure;
  n.pair = std::move(pair);
  return n;
}

void add_param(GadgetNode& node, const std::string& key, const Number& v) {
  node.params.emplace_back(key, v.to_expr());
}

void add_param(GadgetNode& node, const std::string& key, long v) {
  node.params.emplace_back(key, std::to_string(v));
}

namespace {

// Orthogonal matrix whose first column is e / len.
Mat frame_of(const Vec& e, const Number& len) {
  Mat m;
  m.push_back(geom::scale(e, Number(1) / len));
  for (auto& v : geom::complement_frame(e, len)) m.push_back(std::move(v));
  return m;
}

// M v, M given by columns.
Vec apply(const Mat& m, const Vec& v) {
  Vec out(m[0].size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k].is_zero()) continue;
    for (std::size_t r = 0; r < out.size(); ++r) {
      if (!m[k][r].is_zero()) out[r] += m[k][r] * v[k];
    }
  }
  return out;
}

Mat compose(const Mat& a, const Mat& b) {
  Mat out;
  out.reserve(b.size());
  for (const auto& col : b) out.push_back(apply(a, col));
  return out;
}

Point along(int n, const Number& t) {
  Point p = geom::origin(n);
  p[0] = t;
  return p;
}

void param(Skeleton& s, const std::string& key, const Number& v) { s.params.emplace_back(key, v.to_expr()); }
void param(Skeleton& s, const std::string& key, long v) { s.params.emplace_back(key, std::to_string(v)); }

}  // namespace

Skeleton Realizer::build_skeleton(const Recipe& r) const {
  const int n = b_.dim();
  const Number& L = r.value;
  Skeleton s;
  s.points = {geom::origin(n), along(n, L)};
  Frame axes;
  for (int k = 1; k < n; ++k) axes.push_back(geom::axis(n, k));
  auto pt = [&](Point p) {
    s.points.push_back(std::move(p));
    return static_cast<int>(s.points.size()) - 1;
  };
  auto sub = [&](int i, int j, const RecipePtr& rec) { s.subs.push_back({i, j, rec, {}}); };
  auto simplex = [&](const Number& edge, const Point& center, const Frame& f) {
    std::vector<int> ids;
    for (auto& p : geom::regular_simplex(n, edge, center, f)) ids.push_back(pt(std::move(p)));
    return ids;
  };
  auto clique = [&](const std::vector<int>& ids, const RecipePtr& rec) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) sub(ids[i], ids[j], rec);
    }
  };
  const Point X = s.points[0];
  const Point Y = s.points[1];

  switch (r.fig) {
    case Fig::Unit:
      s.figure = "unit";
      break;
    case Fig::ScaleUp: {
      s.figure = "Fig1";
      const RecipePtr& d = r.parts[0];
      param(s, "d", d->value);
      // Rotate y about x in the (e0, e1) plane so that |y ytilde| = d.
      const Number c = Number(1) - Number::rational(n, 4L * (n + 1));
      const Number sn = (Number(1) - c * c).sqrt();
      Point Yt = geom::origin(n);
      Yt[0] = c * L;
      Yt[1] = sn * L;
      const int yt = pt(Yt);
      auto ps = simplex(d->value, geom::midpoint(X, Y), axes);
      auto pts = simplex(d->value, geom::midpoint(X, Yt), geom::complement_frame(Yt, L));
      // Two bipyramids plus the pair (y, ytilde): 4n + n(n-1) + 1 pairs.
      clique(ps, d);
      for (int p : ps) {
        sub(0, p, d);
        sub(1, p, d);
      }
      clique(pts, d);
      for (int p : pts) {
        sub(0, p, d);
        sub(yt, p, d);
      }
      sub(1, yt, d);
      break;
    }
    case Fig::Bound: {
      s.figure = "Fig2";
      const RecipePtr& d = r.parts[0];
      param(s, "d", d->value);
      if (n == 2) {
        sub(0, 1, d);
        break;
      }
      auto ps = simplex(r.parts[1]->value, geom::midpoint(X, Y), axes);
      clique(ps, r.parts[1]);
      for (int p : ps) {
        sub(0, p, d);
        sub(1, p, d);
      }
      break;
    }
    case Fig::Double: {
      s.figure = "Fig3";
      param(s, "d", r.parts[0]->value);
      const int m = pt(along(n, L / 2));
      const int t = pt(along(n, L + L / n));
      sub(0, m, r.parts[0]);
      sub(m, 1, r.parts[0]);
      sub(0, t, r.parts[1]);
      sub(1, t, r.parts[2]);
      break;
    }
    case Fig::Multiple: {
      s.figure = "Fig4";
      const int k = r.k;
      param(s, "d", r.parts[0]->value);
      param(s, "k", k);
      std::vector<int> w = {0};
      for (int i = 1; i < k; ++i) w.push_back(pt(along(n, L * Number::rational(i, k))));
      w.push_back(1);
      for (int i = 0; i < k; ++i) sub(w[i], w[i + 1], r.parts[0]);
      for (int i = 0; i + 2 <= k; ++i) sub(w[i], w[i + 2], r.parts[1]);
      break;
    }
    case Fig::Divide: {
      s.figure = "Fig5";
      const int k = r.k;
      const long m = r.m;
      param(s, "d", r.parts[0]->value);
      param(s, "k", k);
      param(s, "m", m);
      Point Z = along(n, L / 2);
      Z[1] = (Number(m * m) - L * L / 4).sqrt();
      const int z = pt(Z);
      const int xt = pt(geom::add(Z, geom::scale(geom::sub(X, Z), Number(k))));
      const int yt = pt(geom::add(Z, geom::scale(geom::sub(Y, Z), Number(k))));
      sub(xt, yt, r.parts[0]);
      sub(xt, 0, r.parts[1]);
      sub(0, z, r.parts[2]);
      sub(xt, z, r.parts[3]);
      sub(yt, 1, r.parts[1]);
      sub(1, z, r.parts[2]);
      sub(yt, z, r.parts[3]);
      break;
    }
    case Fig::Approx: {
      s.figure = "Fig6";
      const RecipePtr& q = r.parts[0];
      const RecipePtr& rr = r.parts[1];
      param(s, "eps", r.eps);
      param(s, "q", q->value);
      param(s, "r", rr->value);
      const int z = pt(geom::sphere_intersect_point(X, q->value, Y, rr->value, axes));
      sub(0, z, q);
      sub(z, 1, rr);
      break;
    }
    case Fig::Pyth: {
      s.figure = "Fig7";
      const RecipePtr& a = r.parts[0];
      const RecipePtr& b = r.parts[1];
      param(s, "a", a->value);
      param(s, "b", b->value);
      const int sp = pt(geom::scale(geom::axis(n, 1), -b->value));
      const int tp = pt(geom::scale(geom::axis(n, 1), b->value));
      sub(sp, 0, b);
      sub(0, tp, b);
      sub(sp, tp, r.parts[2]);
      sub(sp, 1, a);
      sub(tp, 1, a);
      break;
    }
    case Fig::Diff:
    case Fig::Sum: {
      s.figure = "Fig8";
      const RecipePtr& a = r.parts[0];
      const RecipePtr& b = r.parts[1];
      s.params.emplace_back("mode", r.fig == Fig::Diff ? "diff" : "sum");
      param(s, "a", a->value);
      param(s, "b", b->value);
      // Simplex centre z with |xz| = a and |yz| = b on the line xy.
      auto ps = simplex(r.parts[2]->value, along(n, a->value), axes);
      clique(ps, r.parts[2]);
      for (int p : ps) {
        sub(0, p, r.parts[3]);
        sub(1, p, r.parts[4]);
      }
      sub(0, 1, r.parts[5]);
      break;
    }
    case Fig::Ratio: {
      s.figure = "Fig9";
      const RecipePtr& a = r.parts[0];
      const RecipePtr& b = r.parts[1];
      const RecipePtr& c = r.parts[2];
      param(s, "a", a->value);
      param(s, "b", b->value);
      param(s, "c", c->value);
      param(s, "m", r.m);
      const Number ma = a->value * r.m;
      Point O = along(n, L / 2);
      O[1] = (ma * ma - L * L / 4).sqrt();
      const Number shrink = c->value / a->value;
      const int o = pt(O);
      const int at = pt(geom::add(O, geom::scale(geom::sub(X, O), shrink)));
      const int bt = pt(geom::add(O, geom::scale(geom::sub(Y, O), shrink)));
      sub(o, 0, r.parts[3]);
      sub(o, 1, r.parts[3]);
      sub(o, at, r.parts[4]);
      sub(o, bt, r.parts[4]);
      sub(0, at, r.parts[5]);
      sub(1, bt, r.parts[5]);
      sub(at, bt, b);
      break;
    }
    case Fig::Sqrt:
      s.figure = "sqrt";
      param(s, "value", L);
      sub(0, 1, r.parts[0]);
      break;
  }
  for (auto& su : s.subs) {
    if (su.recipe->fig == Fig::Unit) continue;
    su.frame = frame_of(geom::sub(s.points[su.j], s.points[su.i]), su.recipe->value);
  }
  return s;
}

const Skeleton& Realizer::skeleton(const RecipePtr& r) {
  auto it = cache_.find(r.get());
  if (it != cache_.end()) return it->second;
  return cache_.emplace(r.get(), build_skeleton(*r)).first->second;
}

GadgetNode Realizer::realize(const RecipePtr& r, int x, int y) {
  const Vec e = geom::sub(b_.point(y), b_.point(x));
  return place(r, x, y, frame_of(e, r->value));
}

GadgetNode Realizer::place(const RecipePtr& r, int x, int y, const Mat& frame) {
  if (r->fig == Fig::Unit) {
    b_.add_edge(x, y);
    return make_node("unit", {x, y});
  }
  const Skeleton& s = skeleton(r);
  const Point X = b_.point(x);
  std::vector<int> ids = {x, y};
  for (std::size_t k = 2; k < s.points.size(); ++k) {
    ids.push_back(b_.add_point(geom::add(X, apply(frame, s.points[k]))));
  }
  GadgetNode node = make_node(s.figure, {x, y});
  node.params = s.params;
  if (r->fig == Fig::Approx) node.params.emplace_back("z", std::to_string(ids[2]));
  for (const auto& su : s.subs) {
    const int a = ids[static_cast<std::size_t>(su.i)];
    const int b = ids[static_cast<std::size_t>(su.j)];
    if (su.frame.empty()) {
      node.children.push_back(place(su.recipe, a, b, {}));
    } else {
      node.children.push_back(place(su.recipe, a, b, compose(frame, su.frame)));
    }
  }
  if (r->fig == Fig::Approx) last_via_ = ids[2];
  return node;
}

}  // namespace bqw::gadgets
