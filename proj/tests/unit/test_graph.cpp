#include <doctest.h>

#include <sstream>

#include "stochmatch/graph.hpp"
#include "test_support.hpp"

using namespace stochmatch;

TEST_CASE("edges are normalised and incidence lists are ascending") {
  Graph g(4, {{2, 0}, {1, 3}, {0, 1}});
  CHECK(g.num_vertices() == 4);
  CHECK(g.num_edges() == 3);
  CHECK(g.endpoints(0) == std::array<VertexId, 2>{0, 2});
  CHECK(g.other(0, 2) == 0);
  auto inc = g.incident(0);
  REQUIRE(inc.size() == 2);
  CHECK(inc[0].edge == 0);
  CHECK(inc[1].edge == 2);
  CHECK(g.degree(3) == 1);
  CHECK(g.max_degree() == 2);
}

TEST_CASE("invalid graphs are rejected") {
  CHECK_THROWS_AS(Graph(3, {{0, 0}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}), InputError);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), InputError);
  CHECK_THROWS_AS(Graph(-1, {}), InputError);
}

TEST_CASE("empty graph") {
  Graph g(0, {});
  CHECK(g.num_edges() == 0);
  CHECK(g.max_degree() == 0);
}

TEST_CASE("graph text round trip") {
  stochmatch::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    Graph g = testing::random_graph(rng, 9, 0.4);
    std::stringstream ss;
    write_graph(ss, g);
    Graph h = read_graph(ss);
    CHECK(h.num_vertices() == g.num_vertices());
    CHECK(h.edges() == g.edges());
  }
}

TEST_CASE("graph reader skips comments and reports malformed input") {
  std::istringstream ok("# header\n3 2\n\n0 1\n# note\n1 2\n");
  CHECK(read_graph(ok).num_edges() == 2);
  std::istringstream short_file("3 2\n0 1\n");
  CHECK_THROWS_AS(read_graph(short_file), InputError);
  std::istringstream bad("3 1\n0 x\n");
  CHECK_THROWS_AS(read_graph(bad), InputError);
  std::istringstream loop("3 1\n1 1\n");
  CHECK_THROWS_AS(read_graph(loop), InputError);
  CHECK_THROWS_AS(read_graph_file("/nonexistent/graph"), InputError);
}

TEST_CASE("bundled instances load") {
  for (const auto& name : testing::bundled_names()) {
    auto b = testing::load_bundled(name);
    CHECK(b.graph.num_edges() <= 16);
    CHECK_NOTHROW(b.model.check_compatible(b.graph));
  }
}
