#include "io/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace bqw::io {

namespace {

const char* const kPalette[] = {"#1b1b1b", "#d62728", "#1f77b4", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void mark_depths(const GadgetNode& n, int depth, std::vector<int>& out) {
  for (int i : n.pair) {
    if (i >= 0 && static_cast<std::size_t>(i) < out.size() && out[static_cast<std::size_t>(i)] < 0) {
      out[static_cast<std::size_t>(i)] = depth;
    }
  }
  for (const auto& c : n.children) mark_depths(c, depth + 1, out);
}

}  // namespace

std::string render_svg(const WitnessSet& w) {
  if (w.dim != 2) throw PreconditionError("SVG output needs a planar witness");
  std::vector<std::array<double, 2>> p;
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& q : w.points) {
    const auto a = approx_point(q);
    p.push_back({a[0], a[1]});
    x0 = std::min(x0, a[0]);
    x1 = std::max(x1, a[0]);
    y0 = std::min(y0, a[1]);
    y1 = std::max(y1, a[1]);
  }
  if (p.empty()) x0 = y0 = 0, x1 = y1 = 1;
  const double span = std::max({x1 - x0, y1 - y0, 1e-9});
  const double margin = 0.05 * kCanvas;
  const double s = (kCanvas - 2 * margin) / span;
  const double ox = margin + ((kCanvas - 2 * margin) - (x1 - x0) * s) / 2;
  const double oy = margin + ((kCanvas - 2 * margin) - (y1 - y0) * s) / 2;
  auto X = [&](int i) { return fmt(ox + (p[static_cast<std::size_t>(i)][0] - x0) * s); };
  auto Y = [&](int i) { return fmt(kCanvas - oy - (p[static_cast<std::size_t>(i)][1] - y0) * s); };
  auto valid = [&](int i) { return i >= 0 && static_cast<std::size_t>(i) < p.size(); };

  std::vector<int> depth(p.size(), -1);
  mark_depths(w.derivation, 0, depth);

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kCanvas << "\" height=\""
    << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<g id=\"edges\" stroke=\"#555555\" stroke-width=\"1\">\n";
  for (const auto& [a, b] : w.unit_edges) {
    if (!valid(a) || !valid(b)) continue;
    o << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\"/>\n";
  }
  o << "</g>\n<g id=\"claims\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\">\n";
  for (const auto& c : w.claims) {
    if (c.kind == ClaimKind::Hyperplane) continue;
    for (std::size_t k = 0; k + 1 < c.points.size(); k += 2) {
      const int a = c.points[k], b = c.points[k + 1];
      if (!valid(a) || !valid(b) || a == b) continue;
      o << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\"/>\n";
    }
  }
  o << "</g>\n<g id=\"points\">\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int d = std::max(0, depth[i]);
    o << "<circle cx=\"" << X(static_cast<int>(i)) << "\" cy=\"" << Y(static_cast<int>(i))
      << "\" r=\"3\" fill=\"" << kPalette[d % 8] << "\"/>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace bqw::io
