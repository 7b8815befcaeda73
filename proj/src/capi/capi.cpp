#include "bqw/bqw.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "field/expr.hpp"
#include "gadgets/gadgets.hpp"
#include "io/json_io.hpp"
#include "io/svg.hpp"
#include "relations/relations.hpp"
#include "rigidity/rigidity.hpp"
#include "verify/verify.hpp"

struct bqw_witness {
  bqw::WitnessSet w;
};

namespace {

using bqw::io::json;

thread_local std::string g_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

struct ArgumentError : bqw::Error {
  using Error::Error;
};

template <class F>
bqw_status guard(F f) {
  g_error.clear();
  try {
    f();
    return BQW_OK;
  } catch (const bqw::ParseError& e) {
    g_error = e.what();
    return BQW_ERR_PARSE;
  } catch (const bqw::PreconditionError& e) {
    g_error = e.what();
    return BQW_ERR_PRECONDITION;
  } catch (const bqw::DomainError& e) {
    g_error = e.what();
    return BQW_ERR_DOMAIN;
  } catch (const ArgumentError& e) {
    g_error = e.what();
    return BQW_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    g_error = e.what();
    return BQW_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return BQW_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw ArgumentError(std::string(what) + " is null");
}

bqw::Point point_from(const json& row) {
  if (!row.is_array()) throw bqw::ParseError("a point is an array of coordinates");
  bqw::Point p;
  for (const auto& x : row) {
    if (x.is_string()) {
      p.push_back(bqw::field::parse_number(x.get<std::string>()));
    } else if (x.is_number_integer()) {
      p.push_back(bqw::Number(x.get<long>()));
    } else {
      throw bqw::ParseError("coordinates are field-expression strings or integers");
    }
  }
  return p;
}

std::vector<bqw::Point> points_from(const char* text) {
  need(text, "points");
  const json j = bqw::io::parse_json(text);
  if (!j.is_array()) throw bqw::ParseError("points must be a JSON array");
  std::vector<bqw::Point> out;
  for (const auto& row : j) out.push_back(point_from(row));
  return out;
}

void emit(bqw::WitnessSet w, bqw_witness** out) {
  need(out, "out");
  *out = new bqw_witness{std::move(w)};
}

void four(const std::vector<bqw::Point>& p) {
  if (p.size() != 4) throw bqw::PreconditionError("expected four points J, K, L, M");
}

}  // namespace

extern "C" {

const char* bqw_version(void) { return "1.0.0"; }
const char* bqw_last_error(void) { return g_error.c_str(); }
void bqw_string_free(char* s) { std::free(s); }
void bqw_witness_free(bqw_witness* w) { delete w; }

bqw_status bqw_compile(int dim, const char* expr, const char* anchor_json, const char* direction_json,
                       bqw_witness** out) {
  return guard([&] {
    need(expr, "expr");
    if (dim < 2) throw bqw::PreconditionError("dimension must be at least 2 (n > 1)");
    bqw::Point anchor = anchor_json ? point_from(bqw::io::parse_json(anchor_json)) : bqw::geom::origin(dim);
    bqw::Point dir = direction_json ? point_from(bqw::io::parse_json(direction_json)) : bqw::geom::axis(dim, 0);
    emit(bqw::gadgets::compile(expr, dim, anchor, dir), out);
  });
}

bqw_status bqw_witness_from_json(const char* text, bqw_witness** out) {
  return guard([&] {
    need(text, "text");
    emit(bqw::io::witness_from_json(bqw::io::parse_json(text)), out);
  });
}

bqw_status bqw_witness_to_json(const bqw_witness* w, char** out) {
  return guard([&] {
    need(w, "witness");
    need(out, "out");
    *out = dup(bqw::io::dump(bqw::io::witness_to_json(w->w)));
  });
}

bqw_status bqw_witness_stats(const bqw_witness* w, size_t* points, size_t* unit_edges, int* tower_depth,
                             size_t* derivation_depth) {
  return guard([&] {
    need(w, "witness");
    if (points) *points = w->w.points.size();
    if (unit_edges) *unit_edges = w->w.unit_edges.size();
    if (tower_depth) *tower_depth = bqw::verify::max_tower_depth(w->w);
    if (derivation_depth) *derivation_depth = w->w.derivation.depth();
  });
}

bqw_status bqw_verify(const bqw_witness* w, int* passed, char** report_json) {
  return guard([&] {
    need(w, "witness");
    const auto r = bqw::verify::verify(w->w);
    if (passed) *passed = r.passed ? 1 : 0;
    if (report_json) *report_json = dup(bqw::io::dump(bqw::io::report_to_json(r)));
  });
}

bqw_status bqw_hyperplane(int dim, const char* points_json, bqw_witness** out) {
  return guard([&] { emit(bqw::relations::hyperplane_witness(points_from(points_json), dim), out); });
}

bqw_status bqw_equal_distance(int dim, const char* points_json, bqw_witness** out) {
  return guard([&] {
    const auto p = points_from(points_json);
    four(p);
    emit(bqw::relations::equal_distance_witness(p[0], p[1], p[2], p[3], dim), out);
  });
}

bqw_status bqw_less_than(const char* points_json, bqw_witness** out) {
  return guard([&] {
    const auto p = points_from(points_json);
    four(p);
    emit(bqw::relations::less_than_witness(p[0], p[1], p[2], p[3]), out);
  });
}

bqw_status bqw_distinct(const char* points_json, bqw_witness** out) {
  return guard([&] {
    const auto p = points_from(points_json);
    if (p.size() != 2) throw bqw::PreconditionError("expected two points p, q");
    emit(bqw::relations::distinct_witness(p[0], p[1]), out);
  });
}

bqw_status bqw_falsify(const bqw_witness* w, int restarts, uint64_t seed, double margin, int* violated,
                       char** report_json) {
  return guard([&] {
    need(w, "witness");
    if (restarts < 0 || !(margin > 0)) throw ArgumentError("restarts must be >= 0 and margin > 0");
    bqw::rigidity::SearchOptions opt;
    opt.restarts = restarts;
    opt.seed = seed;
    opt.margin = margin;
    const auto r = bqw::rigidity::falsify_search(w->w, opt);
    if (violated) *violated = r.violations > 0 ? 1 : 0;
    if (report_json) *report_json = dup(bqw::io::dump(bqw::io::search_to_json(r)));
  });
}

bqw_status bqw_unit_graph(const bqw_witness* w, char** framework_json) {
  return guard([&] {
    need(w, "witness");
    need(framework_json, "out");
    *framework_json = dup(bqw::io::dump(bqw::io::framework_to_json(bqw::verify::unit_graph(w->w))));
  });
}

bqw_status bqw_rigidity(const char* framework_json, double tol, char** report_json) {
  return guard([&] {
    need(framework_json, "framework");
    need(report_json, "out");
    if (!(tol > 0)) throw ArgumentError("tolerance must be positive");
    const auto f = bqw::io::framework_from_json(bqw::io::parse_json(framework_json));
    *report_json = dup(bqw::io::dump(bqw::io::rigidity_to_json(bqw::rigidity::is_rigid(f, tol))));
  });
}

bqw_status bqw_assemble(const char* framework_json, int alpha, int beta, const char* eps,
                        bqw_witness** out) {
  return guard([&] {
    need(framework_json, "framework");
    need(eps, "eps");
    const auto f = bqw::io::framework_from_json(bqw::io::parse_json(framework_json));
    emit(bqw::rigidity::assemble_from_rigid(f, alpha < 0 ? f.alpha : alpha, beta < 0 ? f.beta : beta,
                                            bqw::field::parse_number(eps)),
         out);
  });
}

bqw_status bqw_svg(const bqw_witness* w, char** svg) {
  return guard([&] {
    need(w, "witness");
    need(svg, "out");
    *svg = dup(bqw::io::render_svg(w->w));
  });
}

}  // extern "C"
