#include <catch2/catch_amalgamated.hpp>

#include "movekit/oracle.hpp"
#include "movekit/steiner_planar.hpp"
#include "test_helpers.hpp"

using namespace movekit;
using namespace movekit::build;

namespace {

Instance steiner_instance(Graph g, std::vector<PebbleSpec> pebbles, int l, bool planar = true) {
  return instance(std::move(g), red_blue_facility(), std::move(pebbles),
                  ProblemSpec{"steiner", {}, {}}, l, {}, planar);
}

}  // namespace

TEST_CASE("contract_reds merges adjacent terminals") {
  // reds on 0 and 1 (adjacent), blue on 3
  Graph g = path(4);
  Instance inst = steiner_instance(
      g, {{"red", 0, pinned_at(4, 0)}, {"red", 1, pinned_at(4, 1)}, {"blue", 3}}, 4);
  ContractedInstance c = contract_reds(inst);
  CHECK(c.instance.vertex_count() == 3);
  CHECK(c.to_new[0] == c.to_new[1]);
  CHECK(c.members[c.to_new[0]] == std::vector<int>{0, 1});
  // both red pebbles now sit on the merged vertex
  CHECK(c.instance.graph.count(0, c.to_new[0]) == 2);
}

TEST_CASE("contract_reds without adjacent reds changes nothing structural") {
  Graph g = path(3);
  Instance inst = steiner_instance(
      g, {{"red", 0, pinned_at(3, 0)}, {"red", 2, pinned_at(3, 2)}, {"blue", 1}}, 3);
  ContractedInstance c = contract_reds(inst);
  CHECK(c.instance.vertex_count() == 3);
  CHECK(c.instance.graph.graph.edge_count() == 2);
  for (int v = 0; v < 3; ++v) CHECK(c.members[c.to_new[v]] == std::vector<int>{v});
}

TEST_CASE("contract_reds is idempotent") {
  testhelp::Rng rng(17);
  for (int round = 0; round < 20; ++round) {
    Instance inst = testhelp::random_planar_steiner(4000 + round);
    ContractedInstance once = contract_reds(inst);
    ContractedInstance twice = contract_reds(once.instance);
    CHECK(twice.instance.vertex_count() == once.instance.vertex_count());
    CHECK(twice.instance.graph.graph.edge_count() == once.instance.graph.graph.edge_count());
    CHECK(twice.instance.graph.counts == once.instance.graph.counts);
  }
}

TEST_CASE("contract_reds takes the minimum cost over merged vertices") {
  Graph g = path(4);
  TableCost blue;
  blue.values = {Cost(3), Cost(1), Cost(7), Cost(0)};
  Instance inst = steiner_instance(
      g, {{"red", 0, pinned_at(4, 0)}, {"red", 1, pinned_at(4, 1)}, {"blue", 3, blue}}, 4);
  ContractedInstance c = contract_reds(inst);
  const auto& t = std::get<TableCost>(c.instance.pebbles[2].cost);
  CHECK(t.values[c.to_new[0]] == Cost(1));  // min(3, 1) over the merged pair
}

TEST_CASE("contract_reds rejects mobile terminals") {
  Graph g = path(3);
  Instance inst = steiner_instance(g, {{"red", 0}, {"blue", 1}}, 3);  // distance-cost red
  try {
    contract_reds(inst);
    FAIL("expected NonStationaryReds");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonStationaryReds);
  }
}

TEST_CASE("steiner_planar_solve sanity checks") {
  Graph g = path(3);
  Instance inst = steiner_instance(
      g, {{"red", 0, pinned_at(3, 0)}, {"red", 2, pinned_at(3, 2)}, {"blue", 1}}, 3,
      /*planar=*/false);
  CHECK_THROWS_AS(steiner_planar_solve(inst, 0.01, 1), Error);
  // edge bound: K5 has 10 > 3*5-6 = 9 edges
  Instance k5 = steiner_instance(
      complete(5), {{"red", 0, pinned_at(5, 0)}, {"blue", 1}}, 5, /*planar=*/true);
  try {
    steiner_planar_solve(k5, 0.01, 1);
    FAIL("expected NotPlanarSanity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPlanarSanity);
  }
}

TEST_CASE("already-connected reds need no movement") {
  Graph g = path(4);
  Instance inst = steiner_instance(
      g, {{"red", 0, pinned_at(4, 0)}, {"red", 1, pinned_at(4, 1)}, {"blue", 3}}, 4);
  auto r = steiner_planar_solve(inst, 0.01, 5);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.solution->cost == Cost::zero());
}

TEST_CASE("small cases match the oracle") {
  Graph g = path(5);
  // interior vertices 1,2,3 all need connector coverage; the third blue
  // walks one step from the far terminal side
  Instance inst = steiner_instance(g,
                                   {{"red", 0, pinned_at(5, 0)},
                                    {"red", 4, pinned_at(5, 4)},
                                    {"blue", 1},
                                    {"blue", 2},
                                    {"blue", 4}},
                                   5);
  auto fast = steiner_planar_solve(inst, 1e-3, 5);
  auto slow = oracle_solve(inst, catalog_of(inst));
  REQUIRE(fast.status == SolveStatus::Optimal);
  REQUIRE(slow.status == SolveStatus::Optimal);
  CHECK(fast.solution->cost == slow.solution->cost);
  CHECK(fast.solution->cost == Cost(1));

  // two blues cannot cover the three interior vertices
  Instance short_handed = steiner_instance(
      g, {{"red", 0, pinned_at(5, 0)}, {"red", 4, pinned_at(5, 4)}, {"blue", 1}, {"blue", 2}},
      5);
  CHECK(steiner_planar_solve(short_handed, 1e-3, 5).status == SolveStatus::Infeasible);
  CHECK(oracle_solve(short_handed, catalog_of(short_handed)).status ==
        SolveStatus::Infeasible);
}

TEST_CASE("infeasible when blues cannot reach the gap") {
  Graph g = path(5);
  TableCost stuck;
  stuck.values = {Cost::inf(), Cost(0), Cost::inf(), Cost::inf(), Cost::inf()};
  Instance inst = steiner_instance(
      g, {{"red", 0, pinned_at(5, 0)}, {"red", 4, pinned_at(5, 4)}, {"blue", 1, stuck}}, 5);
  CHECK(steiner_planar_solve(inst, 0.01, 5).status == SolveStatus::Infeasible);
}

TEST_CASE("branching triggers on high-red-degree stars and matches the oracle") {
  // a star center adjacent to 3 reds forces the branch rule at k = 1
  Graph g(6);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(0, 4);
  g.add_edge(4, 5);
  std::vector<PebbleSpec> pebbles;
  for (int v : {1, 2, 3}) pebbles.push_back({"red", v, pinned_at(6, v)});
  pebbles.push_back({"blue", 5});
  Instance inst = steiner_instance(g, pebbles, 6);
  auto fast = steiner_planar_solve(inst, 1e-3, 9);
  auto slow = oracle_solve(inst, catalog_of(inst));
  REQUIRE(fast.status == SolveStatus::Optimal);
  REQUIRE(slow.status == SolveStatus::Optimal);
  CHECK(fast.solution->cost == slow.solution->cost);
  CHECK(fast.solution->cost == Cost(2));  // the blue walks 5 -> 4 -> 0
}

TEST_CASE("random planar instances match the oracle") {
  int agree = 0, total = 0;
  for (int round = 0; round < 25; ++round) {
    Instance inst = testhelp::random_planar_steiner(6000 + round);
    auto slow = oracle_solve(inst, catalog_of(inst));
    auto fast = steiner_planar_solve(inst, 1e-3, 100 + round);
    ++total;
    if (fast.status == slow.status &&
        (fast.status != SolveStatus::Optimal ||
         fast.solution->cost == slow.solution->cost))
      ++agree;
    if (fast.status == SolveStatus::Optimal) {
      auto v = verify_solution_semantic(inst, fast.solution->plan, fast.solution->witness);
      REQUIRE(v.ok());
      CHECK(v.cost == fast.solution->cost);
      if (slow.status == SolveStatus::Optimal) CHECK(fast.solution->cost >= slow.solution->cost);
    }
    // a verified solution can never exist when the oracle says infeasible
    if (slow.status == SolveStatus::Infeasible) CHECK(fast.status == SolveStatus::Infeasible);
  }
  CHECK(agree == total);
}
