#include <vector>

#include "doctest.h"
#include "psdda/errors.hpp"
#include "psdda/graph.hpp"

using namespace psdda;

namespace {

TimeVaryingDigraph three_node_ring() {
  return TimeVaryingDigraph(3,
                            {EdgeList::canonical({{0, 1}}), EdgeList::canonical({{1, 2}}),
                             EdgeList::canonical({{2, 0}})},
                            3, true);
}

}  // namespace

TEST_CASE("canonical edge list sorts lexicographically and rejects bad edges") {
  const EdgeList e = EdgeList::canonical({{2, 0}, {0, 1}, {1, 2}});
  CHECK(e.size() == 3);
  CHECK(e[0] == Edge{0, 1});
  CHECK(e[1] == Edge{1, 2});
  CHECK(e[2] == Edge{2, 0});
  CHECK(e.index_of({2, 0}) == 2);
  CHECK(e.index_of({0, 2}) == -1);

  CHECK_THROWS_AS(EdgeList::canonical({{1, 1}}), ConfigError);           // self-loop
  CHECK_THROWS_AS(EdgeList::canonical({{-1, 0}}), ConfigError);          // negative
  CHECK_THROWS_AS(EdgeList::canonical({{0, 1}, {0, 1}}), ConfigError);   // duplicate
}

TEST_CASE("window union of the ring schedule") {
  const TimeVaryingDigraph g = three_node_ring();
  const EdgeList u = union_edges(g, 0);
  CHECK(u.edges() == std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}});
  // cyclic: any window gives the same union
  CHECK(union_edges(g, 7) == u);
  CHECK(g.union_edges() == u);
}

TEST_CASE("single static graph is its own union") {
  const TimeVaryingDigraph g(2, {EdgeList::canonical({{0, 1}})}, 1, true);
  CHECK(union_edges(g, 0).edges() == std::vector<Edge>{{0, 1}});
}

TEST_CASE("empty schedules give empty unions") {
  const TimeVaryingDigraph g(3, {EdgeList{}, EdgeList{}}, 2, true);
  CHECK(union_edges(g, 0).empty());
}

TEST_CASE("window out of range for a non-cyclic schedule") {
  const TimeVaryingDigraph g(2, {EdgeList::canonical({{0, 1}}), EdgeList::canonical({{0, 1}})},
                             2, false);
  CHECK_NOTHROW(union_edges(g, 0));
  CHECK_THROWS_AS(union_edges(g, 1), ConfigError);
  CHECK_THROWS_AS(g.edges_at(2), ConfigError);
}

TEST_CASE("constructor enforces the invariants") {
  // endpoint out of range
  CHECK_THROWS_AS(TimeVaryingDigraph(2, {EdgeList::canonical({{0, 2}})}, 1, true), ConfigError);
  // cyclic length not a multiple of the window
  CHECK_THROWS_AS(TimeVaryingDigraph(3,
                                     {EdgeList::canonical({{0, 1}}),
                                      EdgeList::canonical({{0, 1}}),
                                      EdgeList::canonical({{0, 1}})},
                                     2, true),
                  ConfigError);
  // windows with different unions
  CHECK_THROWS_AS(TimeVaryingDigraph(3,
                                     {EdgeList::canonical({{0, 1}}),
                                      EdgeList::canonical({{1, 2}})},
                                     1, true),
                  ConfigError);
}

TEST_CASE("explicit union order overrides the lexicographic default") {
  const EdgeList order = EdgeList::explicit_order({{2, 0}, {0, 1}, {1, 2}});
  const TimeVaryingDigraph g(3,
                             {EdgeList::canonical({{0, 1}}), EdgeList::canonical({{1, 2}}),
                              EdgeList::canonical({{2, 0}})},
                             3, true, order);
  CHECK(g.union_edges()[0] == Edge{2, 0});
  // the explicit list must cover exactly the union
  CHECK_THROWS_AS(TimeVaryingDigraph(3, {EdgeList::canonical({{0, 1}})}, 1, true,
                                     EdgeList::explicit_order({{0, 1}, {1, 2}})),
                  ConfigError);
}

TEST_CASE("out degree counts outgoing edges plus the implicit self-loop") {
  const EdgeList g1 = EdgeList::canonical({{0, 1}});
  CHECK(out_degree(g1, 0, 3) == 2);
  CHECK(out_degree(g1, 1, 3) == 1);
  CHECK(out_degree(EdgeList{}, 2, 3) == 1);

  std::vector<Edge> complete;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) complete.push_back({i, j});
    }
  }
  const EdgeList k4 = EdgeList::canonical(complete);
  for (int j = 0; j < 4; ++j) CHECK(out_degree(k4, j, 4) == 4);

  CHECK_THROWS_AS(out_degree(g1, 3, 3), ConfigError);
}

TEST_CASE("window connectivity validation") {
  CHECK(validate_b_connectivity(three_node_ring()).pass);

  const TimeVaryingDigraph one_way(2, {EdgeList::canonical({{0, 1}})}, 1, true);
  const ConnectivityReport r = validate_b_connectivity(one_way);
  CHECK(!r.pass);
  CHECK(r.windows.size() == 1);
  CHECK(!r.windows[0].strongly_connected);

  std::vector<Edge> complete;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) complete.push_back({i, j});
    }
  }
  const TimeVaryingDigraph full(3, {EdgeList::canonical(complete)}, 1, true);
  CHECK(validate_b_connectivity(full).pass);
}

TEST_CASE("union computation is deterministic") {
  const TimeVaryingDigraph g = three_node_ring();
  CHECK(union_edges(g, 0) == union_edges(g, 0));
  CHECK(union_edges(g, 0) == union_edges(g, 3));
}
