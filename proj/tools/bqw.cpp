#include <bqw/bqw.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bqw_status s) {
  if (s != BQW_OK) throw CliError(bqw_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw CliError("cannot write " + path);
}

// Owns a string returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { bqw_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Witness {
  bqw_witness* p = nullptr;
  ~Witness() { bqw_witness_free(p); }
};

// "x,y;x,y" or a JSON array of coordinate arrays.
std::string points_json(const std::string& spec) {
  if (!spec.empty() && spec.front() == '[') return spec;
  json pts = json::array();
  std::stringstream rows(spec);
  std::string row;
  while (std::getline(rows, row, ';')) {
    json p = json::array();
    std::stringstream cols(row);
    std::string c;
    while (std::getline(cols, c, ',')) p.push_back(c);
    pts.push_back(p);
  }
  return pts.dump();
}

std::string point_json(const std::string& spec) {
  if (spec.empty()) return "";
  const json pts = json::parse(points_json(spec));
  if (pts.size() != 1) throw CliError("expected a single point");
  return pts[0].dump();
}

Witness load(const std::string& path) {
  Witness w;
  check(bqw_witness_from_json(read_file(path).c_str(), &w.p));
  return w;
}

void summary(const Witness& w) {
  size_t pts = 0, edges = 0, depth = 0;
  int tower = 0;
  check(bqw_witness_stats(w.p, &pts, &edges, &tower, &depth));
  std::cerr << pts << " points, " << edges << " unit edges, tower depth " << tower << ", derivation depth "
            << depth << "\n";
}

int emit_witness(const Witness& w, const std::string& out) {
  Text t;
  check(bqw_witness_to_json(w.p, &t.p));
  write_out(t.str(), out);
  summary(w);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact unit-distance witness sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bqw_version());

  int dim = 2;
  std::string dist, out, anchor, direction, points, path, eps = "1/10";
  int restarts = 200, alpha = -1, beta = -1;
  std::uint64_t seed = 42;
  double margin = 0.25, tol = 1e-8;

  auto* construct = app.add_subcommand("construct", "Witness for a distance in the field");
  construct->add_option("--dim", dim, "Ambient dimension")->required();
  construct->add_option("--dist", dist, "Distance as a field expression")->required();
  construct->add_option("--anchor", anchor, "Anchor point, comma separated");
  construct->add_option("--direction", direction, "Direction vector, comma separated");
  construct->add_option("--out", out, "Output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Check a witness exactly");
  verify->add_option("witness", path)->required();

  auto* hyper = app.add_subcommand("hyperplane", "Witness that points lie on a hyperplane");
  auto* equal = app.add_subcommand("equal", "Witness |JK| = |LM|");
  auto* less = app.add_subcommand("less", "Witness |JK| < |LM|");
  auto* distinct = app.add_subcommand("distinct", "Witness p != q");
  for (auto* s : {hyper, equal}) s->add_option("--dim", dim, "Ambient dimension")->required();
  for (auto* s : {hyper, equal, less, distinct}) {
    s->add_option("--points", points, "Points as x,y;x,y or a JSON array")->required();
    s->add_option("--out", out, "Output file (default stdout)");
  }

  auto* falsify = app.add_subcommand("falsify", "Search for a map breaking a claim");
  falsify->add_option("witness", path)->required();
  falsify->add_option("--restarts", restarts)->check(CLI::NonNegativeNumber);
  falsify->add_option("--seed", seed);
  falsify->add_option("--margin", margin)->check(CLI::PositiveNumber);

  auto* rigidity = app.add_subcommand("rigidity", "Infinitesimal rigidity of a framework");
  rigidity->add_option("input", path, "Framework or witness JSON")->required();
  rigidity->add_option("--tol", tol)->check(CLI::PositiveNumber);

  auto* graph = app.add_subcommand("unit-graph", "Unit-distance framework of a witness");
  graph->add_option("witness", path)->required();
  graph->add_option("--out", out);

  auto* assemble = app.add_subcommand("assemble", "Approximate witness from a rigid framework");
  assemble->add_option("framework", path)->required();
  assemble->add_option("--alpha", alpha);
  assemble->add_option("--beta", beta);
  assemble->add_option("--eps", eps, "Chain tolerance as a field expression");
  assemble->add_option("--out", out);

  auto* svg = app.add_subcommand("svg", "Render a planar witness");
  svg->add_option("witness", path)->required();
  svg->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*construct) {
      Witness w;
      const std::string a = point_json(anchor), d = point_json(direction);
      check(bqw_compile(dim, dist.c_str(), a.empty() ? nullptr : a.c_str(), d.empty() ? nullptr : d.c_str(),
                        &w.p));
      return emit_witness(w, out);
    }
    if (*verify) {
      Witness w = load(path);
      int passed = 0;
      Text t;
      check(bqw_verify(w.p, &passed, &t.p));
      write_out(t.str(), "");
      std::cerr << (passed ? "PASS" : "FAIL") << "\n";
      return passed ? kExitOk : kExitFailed;
    }
    if (*hyper || *equal || *less || *distinct) {
      Witness w;
      const std::string p = points_json(points);
      if (*hyper) check(bqw_hyperplane(dim, p.c_str(), &w.p));
      if (*equal) check(bqw_equal_distance(dim, p.c_str(), &w.p));
      if (*less) check(bqw_less_than(p.c_str(), &w.p));
      if (*distinct) check(bqw_distinct(p.c_str(), &w.p));
      return emit_witness(w, out);
    }
    if (*falsify) {
      Witness w = load(path);
      int violated = 0;
      Text t;
      check(bqw_falsify(w.p, restarts, seed, margin, &violated, &t.p));
      write_out(t.str(), "");
      std::cerr << (violated ? "violation found" : "no violation found") << "\n";
      return violated ? kExitFailed : kExitOk;
    }
    if (*rigidity) {
      std::string text = read_file(path);
      const json j = json::parse(text);
      if (j.contains("version")) {
        Witness w;
        check(bqw_witness_from_json(text.c_str(), &w.p));
        Text f;
        check(bqw_unit_graph(w.p, &f.p));
        text = f.str();
      }
      Text t;
      check(bqw_rigidity(text.c_str(), tol, &t.p));
      write_out(t.str(), "");
      const std::string verdict = json::parse(t.str()).at("verdict").get<std::string>();
      std::cerr << verdict << "\n";
      return verdict == "rigid" ? kExitOk : kExitFailed;
    }
    if (*graph) {
      Witness w = load(path);
      Text t;
      check(bqw_unit_graph(w.p, &t.p));
      write_out(t.str(), out);
      return kExitOk;
    }
    if (*assemble) {
      Witness w;
      check(bqw_assemble(read_file(path).c_str(), alpha, beta, eps.c_str(), &w.p));
      return emit_witness(w, out);
    }
    if (*svg) {
      Witness w = load(path);
      Text t;
      check(bqw_svg(w.p, &t.p));
      write_out(t.str(), out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
