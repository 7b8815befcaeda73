#include "doctest.h"

#include <bqw/bqw.h>

#include <string>

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { bqw_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct W {
  bqw_witness* p = nullptr;
  ~W() { bqw_witness_free(p); }
};

}  // namespace

TEST_CASE("compile, serialize, reload, verify") {
  W w;
  REQUIRE(bqw_compile(2, "sqrt(2)", nullptr, nullptr, &w.p) == BQW_OK);
  size_t points = 0, edges = 0, depth = 0;
  int tower = -1;
  CHECK(bqw_witness_stats(w.p, &points, &edges, &tower, &depth) == BQW_OK);
  CHECK(points > 2);
  CHECK(edges > 0);
  CHECK(tower >= 1);
  Owned text;
  REQUIRE(bqw_witness_to_json(w.p, &text.p) == BQW_OK);
  W back;
  REQUIRE(bqw_witness_from_json(text.p, &back.p) == BQW_OK);
  Owned again;
  REQUIRE(bqw_witness_to_json(back.p, &again.p) == BQW_OK);
  CHECK(text.str() == again.str());
  int passed = 0;
  Owned report;
  CHECK(bqw_verify(back.p, &passed, &report.p) == BQW_OK);
  CHECK(passed == 1);
  CHECK(report.str().find("\"passed\": true") != std::string::npos);
}

TEST_CASE("anchor and direction") {
  W w;
  CHECK(bqw_compile(2, "1", "[\"1\",\"1/2\"]", "[\"3/5\",\"4/5\"]", &w.p) == BQW_OK);
  int passed = 0;
  CHECK(bqw_verify(w.p, &passed, nullptr) == BQW_OK);
  CHECK(passed == 1);
}

TEST_CASE("status codes") {
  W w;
  CHECK(bqw_compile(1, "1", nullptr, nullptr, &w.p) == BQW_ERR_PRECONDITION);
  CHECK(std::string(bqw_last_error()).find("n > 1") != std::string::npos);
  CHECK(bqw_compile(2, "sqrt(", nullptr, nullptr, &w.p) == BQW_ERR_PARSE);
  CHECK(bqw_compile(2, "sqrt(0-1)", nullptr, nullptr, &w.p) == BQW_ERR_DOMAIN);
  CHECK(bqw_compile(2, nullptr, nullptr, nullptr, &w.p) == BQW_ERR_ARGUMENT);
  CHECK(bqw_witness_from_json("{\"version\": \"9\"}", &w.p) == BQW_ERR_PARSE);
  CHECK(bqw_witness_from_json("not json", &w.p) == BQW_ERR_PARSE);
  CHECK(bqw_less_than("[[\"0\",\"0\"],[\"2\",\"0\"],[\"0\",\"0\"],[\"1\",\"0\"]]", &w.p) == BQW_ERR_PRECONDITION);
  CHECK(w.p == nullptr);
  CHECK(bqw_verify(nullptr, nullptr, nullptr) == BQW_ERR_ARGUMENT);
}

TEST_CASE("relations") {
  W h, e, l, d;
  CHECK(bqw_hyperplane(2, "[[\"0\",\"0\"],[\"1\",\"0\"],[\"2\",\"0\"]]", &h.p) == BQW_OK);
  CHECK(bqw_equal_distance(2, "[[0,0],[1,1],[0,0],[1,1]]", &e.p) == BQW_OK);
  CHECK(bqw_less_than("[[0,0],[1,0],[0,1],[4,1]]", &l.p) == BQW_OK);
  CHECK(bqw_distinct("[[0,0],[\"1/3\",0]]", &d.p) == BQW_OK);
  for (bqw_witness* w : {h.p, e.p, l.p, d.p}) {
    int passed = 0;
    CHECK(bqw_verify(w, &passed, nullptr) == BQW_OK);
    CHECK(passed == 1);
  }
  size_t points = 0;
  bqw_witness_stats(e.p, &points, nullptr, nullptr, nullptr);
  CHECK(points == 2);
}

TEST_CASE("falsifier, rigidity, svg") {
  W w;
  REQUIRE(bqw_compile(2, "1", nullptr, nullptr, &w.p) == BQW_OK);
  int violated = -1;
  Owned rep;
  CHECK(bqw_falsify(w.p, 8, 42, 0.25, &violated, &rep.p) == BQW_OK);
  CHECK(violated == 0);
  Owned fw;
  REQUIRE(bqw_unit_graph(w.p, &fw.p) == BQW_OK);
  Owned rr;
  CHECK(bqw_rigidity(fw.p, 1e-8, &rr.p) == BQW_OK);
  CHECK(rr.str().find("\"verdict\": \"rigid\"") != std::string::npos);
  CHECK(bqw_rigidity(fw.p, -1, &rr.p) == BQW_ERR_ARGUMENT);
  Owned svg;
  CHECK(bqw_svg(w.p, &svg.p) == BQW_OK);
  CHECK(svg.str().rfind("<?xml", 0) == 0);
  W w3;
  REQUIRE(bqw_compile(3, "1", nullptr, nullptr, &w3.p) == BQW_OK);
  Owned svg3;
  CHECK(bqw_svg(w3.p, &svg3.p) == BQW_ERR_PRECONDITION);
}

TEST_CASE("assembly through the C interface") {
  const char* tri =
      "{\"dim\":2,\"vertices\":[[0,0],[1,0],[0.5,0.8660254037844386]],\"edges\":[[0,1],[1,2],[0,2]],"
      "\"alpha\":0,\"beta\":1}";
  const char* square = "{\"dim\":2,\"vertices\":[[0,0],[1,0],[1,1],[0,1]],\"edges\":[[0,1],[1,2],[2,3],[3,0]]}";
  W w;
  CHECK(bqw_assemble(square, 0, 2, "1/10", &w.p) == BQW_ERR_PRECONDITION);
  CHECK(bqw_assemble(tri, -1, -1, "0", &w.p) == BQW_ERR_PRECONDITION);
  CHECK(bqw_assemble(tri, -1, -1, "1/2", &w.p) == BQW_OK);
}
