#include "io/json_io.hpp"

#include "errors.hpp"
#include "field/expr.hpp"

namespace bqw::io {

namespace {

bool has_value(ClaimKind k) {
  return k == ClaimKind::ExactDistance || k == ClaimKind::UpperBound || k == ClaimKind::Approx;
}

json node_to_json(const GadgetNode& n) {
  json params = json::object();
  for (const auto& [k, v] : n.params) params[k] = v;
  json children = json::array();
  for (const auto& c : n.children) children.push_back(node_to_json(c));
  return {{"figure", n.figure}, {"pair", n.pair}, {"params", params}, {"children", children}};
}

GadgetNode node_from_json(const json& j) {
  GadgetNode n;
  n.figure = j.at("figure").get<std::string>();
  n.pair = j.value("pair", std::vector<int>{});
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) n.params.emplace_back(k, v.get<std::string>());
  }
  if (j.contains("children")) {
    for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c));
  }
  return n;
}

template <class F>
auto guarded(const char* what, F f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json witness_to_json(const WitnessSet& w) {
  json points = json::array(), approx = json::array();
  for (const auto& p : w.points) {
    json row = json::array();
    for (const auto& x : p) row.push_back(x.to_expr());
    points.push_back(std::move(row));
    approx.push_back(approx_point(p));
  }
  json edges = json::array();
  for (const auto& [a, b] : w.unit_edges) edges.push_back({a, b});
  json claims = json::array();
  for (const auto& c : w.claims) {
    json jc = {{"kind", claim_kind_name(c.kind)}, {"points", c.points}};
    if (has_value(c.kind)) jc["value"] = c.value.to_expr();
    if (c.kind == ClaimKind::Approx) {
      jc["epsilon"] = c.epsilon.to_expr();
      jc["via"] = c.via;
    }
    claims.push_back(std::move(jc));
  }
  return {{"version", kWitnessVersion},
          {"dim", w.dim},
          {"points", points},
          {"approx_points", approx},
          {"unit_edges", edges},
          {"claims", claims},
          {"derivation", node_to_json(w.derivation)},
          {"approximate", w.approximate}};
}

WitnessSet witness_from_json(const json& j) {
  return guarded("witness", [&] {
    if (!j.is_object()) throw ParseError("witness must be a JSON object");
    if (j.at("version").get<std::string>() != kWitnessVersion) {
      throw ParseError("unsupported witness version");
    }
    WitnessSet w;
    w.dim = j.at("dim").get<int>();
    if (w.dim < 2) throw ParseError("dim must be at least 2");
    for (const auto& row : j.at("points")) {
      Point p;
      for (const auto& x : row) p.push_back(field::parse_number(x.get<std::string>()));
      if (static_cast<int>(p.size()) != w.dim) throw ParseError("point dimension mismatch");
      w.points.push_back(std::move(p));
    }
    for (const auto& e : j.at("unit_edges")) {
      if (e.size() != 2) throw ParseError("edges are index pairs");
      w.unit_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    for (const auto& jc : j.at("claims")) {
      Claim c;
      c.kind = claim_kind_from_name(jc.at("kind").get<std::string>());
      c.points = jc.at("points").get<std::vector<int>>();
      if (has_value(c.kind)) c.value = field::parse_number(jc.at("value").get<std::string>());
      if (c.kind == ClaimKind::Approx) {
        c.epsilon = field::parse_number(jc.at("epsilon").get<std::string>());
        c.via = jc.at("via").get<int>();
      }
      w.claims.push_back(std::move(c));
    }
    if (j.contains("derivation")) w.derivation = node_from_json(j.at("derivation"));
    w.approximate = j.value("approximate", false);
    return w;
  });
}

json report_to_json(const verify::VerifyReport& r) {
  json bad = json::array();
  for (const auto& e : r.bad_edges) bad.push_back({{"a", e.a}, {"b", e.b}, {"reason", e.reason}});
  json incidental = json::array();
  for (const auto& [a, b] : r.incidental) incidental.push_back({a, b});
  json claims = json::array();
  for (const auto& c : r.claims) {
    claims.push_back({{"kind", claim_kind_name(c.kind)},
                      {"points", c.points},
                      {"holds", c.holds},
                      {"exact", c.exact},
                      {"detail", c.detail}});
  }
  return {{"passed", r.passed},
          {"points", r.points},
          {"declared_edges", r.declared_edges},
          {"discovered_edges", r.discovered_edges},
          {"bad_edges", bad},
          {"incidental_edges", incidental},
          {"claims", claims},
          {"max_tower_depth", r.max_tower_depth},
          {"derivation_depth", r.derivation_depth},
          {"derivation_size", r.derivation_size},
          {"approximate", r.approximate}};
}

json rigidity_to_json(const rigidity::RigidityReport& r) {
  return {{"rank", r.rank},
          {"expected_rank", r.expected_rank},
          {"margin", r.margin},
          {"singular_values", r.singular_values},
          {"verdict", rigidity::verdict_name(r.verdict)},
          {"note", r.note}};
}

json search_to_json(const rigidity::SearchReport& r) {
  json maps = json::array();
  for (const auto& m : r.maps) {
    maps.push_back({{"trial", m.trial}, {"residual", m.residual}, {"deviation", m.deviation}});
  }
  return {{"trials", r.trials},
          {"near_feasible", r.near_feasible},
          {"violations", r.violations},
          {"best_residual", r.best_residual},
          {"worst_deviation", r.worst_deviation},
          {"maps", maps}};
}

json framework_to_json(const rigidity::Framework& f) {
  json edges = json::array();
  for (const auto& [a, b] : f.edges) edges.push_back({a, b});
  return {{"dim", f.dim}, {"vertices", f.vertices}, {"edges", edges}, {"alpha", f.alpha}, {"beta", f.beta}};
}

rigidity::Framework framework_from_json(const json& j) {
  return guarded("framework", [&] {
    rigidity::Framework f;
    f.dim = j.at("dim").get<int>();
    f.vertices = j.at("vertices").get<std::vector<std::vector<double>>>();
    for (const auto& e : j.at("edges")) {
      if (e.size() != 2) throw ParseError("edges are index pairs");
      f.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    f.alpha = j.value("alpha", -1);
    f.beta = j.value("beta", -1);
    for (const auto& v : f.vertices) {
      if (static_cast<int>(v.size()) != f.dim) throw ParseError("vertex dimension mismatch");
    }
    return f;
  });
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace bqw::io
