#include "verify/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "geom/geom.hpp"

namespace bqw::verify {

namespace {

constexpr double kScanSlack = 1e-6;

bool in_range(const WitnessSet& w, int i) {
  return i >= 0 && static_cast<std::size_t>(i) < w.points.size();
}

const Point& pt(const WitnessSet& w, int i) { return w.points[static_cast<std::size_t>(i)]; }

Number d2(const WitnessSet& w, int i, int j) { return geom::dist_sq(pt(w, i), pt(w, j)); }

double fdist(const WitnessSet& w, int i, int j) { return std::sqrt(d2(w, i, j).to_double()); }

ClaimResult check_claim(const WitnessSet& w, const Claim& c) {
  ClaimResult r;
  r.kind = c.kind;
  r.points = c.points;
  r.exact = !w.approximate;
  for (int i : c.points) {
    if (!in_range(w, i)) {
      r.detail = "point index " + std::to_string(i) + " out of range";
      return r;
    }
  }
  auto need = [&](std::size_t k) {
    if (c.points.size() == k) return true;
    r.detail = "expected " + std::to_string(k) + " point indices";
    return false;
  };
  switch (c.kind) {
    case ClaimKind::ExactDistance: {
      if (!need(2)) return r;
      const Number q = d2(w, c.points[0], c.points[1]);
      if (w.approximate) {
        r.holds = std::fabs(std::sqrt(q.to_double()) - c.value.to_double()) <= kApproxClaimTol;
      } else {
        r.holds = q == c.value * c.value;
      }
      if (!r.holds) r.detail = "dist_sq = " + q.approx(20) + ", claimed " + c.value.approx(20);
      return r;
    }
    case ClaimKind::UpperBound: {
      if (!need(2)) return r;
      const Number q = d2(w, c.points[0], c.points[1]);
      r.holds = c.value.sign() > 0 && q <= c.value * c.value;
      if (!r.holds) r.detail = "dist_sq = " + q.approx(20) + " exceeds the bound";
      return r;
    }
    case ClaimKind::Approx: {
      if (!need(2)) return r;
      const int x = c.points[0], y = c.points[1], z = c.via;
      if (!in_range(w, z)) {
        r.detail = "missing chain point";
        return r;
      }
      const Number xz = d2(w, x, z), zy = d2(w, z, y), xy = d2(w, x, y);
      if (!xz.is_rational() || !zy.is_rational()) {
        r.detail = "chain legs are not rational";
        return r;
      }
      const Number a = xz.sqrt(), b = zy.sqrt();
      if (!a.is_rational() || !b.is_rational() || a.is_zero() || b.is_zero()) {
        r.detail = "chain legs are not positive rationals";
        return r;
      }
      if (c.epsilon.sign() <= 0 || b * 2 > c.epsilon) {
        r.detail = "|zy| = " + b.to_expr() + " exceeds eps/2";
        return r;
      }
      if (xy != c.value * c.value) {
        r.detail = "claimed distance differs from |xy|";
        return r;
      }
      r.holds = true;
      return r;
    }
    case ClaimKind::Distinct: {
      if (!need(2)) return r;
      r.holds = !d2(w, c.points[0], c.points[1]).is_zero();
      if (!r.holds) r.detail = "points coincide";
      return r;
    }
    case ClaimKind::Hyperplane: {
      std::vector<Point> pts;
      for (int i : c.points) pts.push_back(pt(w, i));
      r.holds = geom::affinely_degenerate(pts);
      if (!r.holds) r.detail = "points span the space affinely";
      return r;
    }
    case ClaimKind::EqualDistance: {
      if (!need(4)) return r;
      const Number a = d2(w, c.points[0], c.points[1]);
      const Number b = d2(w, c.points[2], c.points[3]);
      if (w.approximate) {
        r.holds = std::fabs(fdist(w, c.points[0], c.points[1]) - fdist(w, c.points[2], c.points[3])) <=
                  kApproxClaimTol;
      } else {
        r.holds = a == b;
      }
      if (!r.holds) r.detail = "dist_sq " + a.approx(20) + " vs " + b.approx(20);
      return r;
    }
    case ClaimKind::LessThan: {
      if (!need(4)) return r;
      const Number a = d2(w, c.points[0], c.points[1]);
      const Number b = d2(w, c.points[2], c.points[3]);
      r.holds = a < b;
      if (!r.holds) r.detail = "dist_sq " + a.approx(20) + " is not below " + b.approx(20);
      return r;
    }
  }
  return r;
}

}  // namespace

int max_tower_depth(const WitnessSet& w) {
  int d = 0;
  for (const auto& p : w.points) {
    for (const auto& x : p) d = std::max(d, x.tower_depth());
  }
  return d;
}

namespace {

// Exact unit pairs; pairs in `known` are taken as verified.
std::vector<std::pair<int, int>> scan_unit_pairs(const WitnessSet& w,
                                                 const std::set<std::pair<int, int>>& known) {
  const std::size_t n = w.points.size();
  std::vector<std::vector<double>> ap;
  ap.reserve(n);
  for (const auto& p : w.points) ap.push_back(approx_point(p));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ap[a][0] < ap[b][0]; });
  std::vector<std::pair<int, int>> out;
  for (std::size_t s = 0; s < n; ++s) {
    const auto& a = ap[order[s]];
    for (std::size_t t = s + 1; t < n; ++t) {
      const auto& b = ap[order[t]];
      if (b[0] - a[0] > 1 + kScanSlack) break;
      double q = 0;
      for (std::size_t k = 0; k < a.size(); ++k) q += (a[k] - b[k]) * (a[k] - b[k]);
      if (std::fabs(q - 1) > kScanSlack) continue;
      const int i = static_cast<int>(order[s]), j = static_cast<int>(order[t]);
      const std::pair<int, int> e(std::min(i, j), std::max(i, j));
      if (known.count(e) || d2(w, i, j) == Number(1)) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> unit_pairs(const WitnessSet& w) { return scan_unit_pairs(w, {}); }

VerifyReport verify(const WitnessSet& w) {
  VerifyReport r;
  r.points = w.points.size();
  r.declared_edges = w.unit_edges.size();
  r.approximate = w.approximate;
  r.derivation_depth = w.derivation.depth();
  r.derivation_size = w.derivation.size();
  r.max_tower_depth = max_tower_depth(w);
  bool dims_ok = true;
  for (const auto& p : w.points) dims_ok = dims_ok && static_cast<int>(p.size()) == w.dim;
  std::set<std::pair<int, int>> declared, good;
  for (const auto& [a, b] : w.unit_edges) {
    if (!in_range(w, a) || !in_range(w, b) || a == b) {
      r.bad_edges.push_back({a, b, "index out of range"});
      continue;
    }
    declared.emplace(std::min(a, b), std::max(a, b));
    if (!dims_ok) continue;
    const Number q = d2(w, a, b);
    if (q != Number(1)) {
      r.bad_edges.push_back({a, b, "dist_sq = " + q.approx(20)});
    } else {
      good.emplace(std::min(a, b), std::max(a, b));
    }
  }
  if (dims_ok) {
    const auto found = scan_unit_pairs(w, good);
    r.discovered_edges = found.size();
    for (const auto& e : found) {
      if (!declared.count(e)) r.incidental.push_back(e);
    }
    for (const auto& c : w.claims) r.claims.push_back(check_claim(w, c));
  } else {
    r.bad_edges.push_back({-1, -1, "point dimension mismatch"});
  }
  r.passed = r.bad_edges.empty() && !w.claims.empty();
  for (const auto& c : r.claims) r.passed = r.passed && c.holds;
  return r;
}

rigidity::Framework unit_graph(const WitnessSet& w) {
  rigidity::Framework f;
  f.dim = w.dim;
  for (const auto& p : w.points) f.vertices.push_back(approx_point(p));
  f.edges = unit_pairs(w);
  if (!w.claims.empty() && w.claims[0].points.size() >= 2) {
    f.alpha = w.claims[0].points[0];
    f.beta = w.claims[0].points[1];
  }
  return f;
}

}  // namespace bqw::verify
