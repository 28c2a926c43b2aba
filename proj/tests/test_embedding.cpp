#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "movekit/embedding.hpp"
#include "test_helpers.hpp"

using namespace movekit;
using namespace movekit::build;

namespace {

// oracle: exhaustive enumeration of injective subgraph maps, colorful only
std::optional<std::pair<Cost, std::vector<int>>> brute_colorful_embedding(
    const Graph& F, const Graph& G, const std::vector<int>& labels,
    const EmbedCostTable& cost) {
  int kF = F.vertex_count(), nG = G.vertex_count();
  std::vector<int> phi(kF, -1);
  std::vector<char> used_vertex(nG, 0);
  std::optional<std::pair<Cost, std::vector<int>>> best;
  auto rec = [&](auto&& self, int v) -> void {
    if (v == kF) {
      std::vector<char> used_label(kF + 1, 0);
      for (int i = 0; i < kF; ++i) {
        int lab = labels[phi[i]];
        if (lab < 1 || lab > kF || used_label[lab]) return;
        used_label[lab] = 1;
      }
      Cost total = Cost::zero();
      for (int i = 0; i < kF; ++i) total += cost[i][phi[i]];
      if (total.is_inf()) return;
      if (!best || total < best->first || (total == best->first && phi < best->second))
        best = {total, phi};
      return;
    }
    for (int u = 0; u < nG; ++u) {
      if (used_vertex[u]) continue;
      bool ok = true;
      for (int w = 0; w < v && ok; ++w)
        if (F.has_edge(w, v) && !G.has_edge(phi[w], u)) ok = false;
      if (!ok) continue;
      phi[v] = u;
      used_vertex[u] = 1;
      self(self, v + 1);
      used_vertex[u] = 0;
      phi[v] = -1;
    }
  };
  rec(rec, 0);
  return best;
}

struct Case {
  Graph F, G;
  std::vector<int> labels;
  EmbedCostTable cost;
};

Case random_case(testhelp::Rng& rng, int max_f = 4, int max_g = 7) {
  Case c{testhelp::random_graph(rng, rng.range(1, max_f), 600),
         testhelp::random_graph(rng, rng.range(1, max_g), 500),
         {},
         {}};
  int kF = c.F.vertex_count();
  for (int u = 0; u < c.G.vertex_count(); ++u) c.labels.push_back(rng.range(1, kF));
  c.cost.assign(kF, std::vector<Cost>(c.G.vertex_count(), Cost::zero()));
  for (int i = 0; i < kF; ++i)
    for (int u = 0; u < c.G.vertex_count(); ++u)
      c.cost[i][u] = rng.chance_permille(150) ? Cost::inf() : Cost(rng.range(0, 9));
  return c;
}

EmbeddingResult run_dp(const Case& c) {
  NiceTreeDecomposition nice = make_nice(exact_decomposition(c.F), c.F);
  return colorful_embedding_dp(c.F, nice, c.G, c.labels, c.cost);
}

}  // namespace

TEST_CASE("single-vertex pattern minimizes its cost row") {
  Graph F(1), G = path(3);
  std::vector<int> labels{1, 1, 1};
  EmbedCostTable cost{{Cost(5), Cost(2), Cost(7)}};
  auto r = run_dp({F, G, labels, cost});
  REQUIRE(r.feasible);
  CHECK(r.cost == Cost(2));
  CHECK(r.embedding == std::vector<int>{1});
}

TEST_CASE("single-edge pattern on a labeled path") {
  Graph F(2);
  F.add_edge(0, 1);
  Graph G = path(3);
  std::vector<int> labels{1, 2, 1};  // a->1 b->2 c->1
  EmbedCostTable cost{{Cost(0), Cost(0), Cost(0)}, {Cost(5), Cost(1), Cost(2)}};
  auto expect = brute_colorful_embedding(F, G, labels, cost);
  REQUIRE(expect);
  CHECK(expect->first == Cost(1));
  auto r = run_dp({F, G, labels, cost});
  REQUIRE(r.feasible);
  CHECK(r.cost == Cost(1));
}

TEST_CASE("triangle pattern needs a triangle in the host") {
  Graph F = complete(3);
  Graph G = path(4);  // triangle-free
  std::vector<int> labels{1, 2, 3, 1};
  EmbedCostTable cost(3, std::vector<Cost>(4, Cost::zero()));
  auto r = run_dp({F, G, labels, cost});
  CHECK_FALSE(r.feasible);
}

TEST_CASE("dp equals exhaustive colorful enumeration") {
  testhelp::Rng rng(77);
  for (int round = 0; round < 200; ++round) {
    Case c = random_case(rng);
    auto expect = brute_colorful_embedding(c.F, c.G, c.labels, c.cost);
    auto r = run_dp(c);
    if (expect) {
      REQUIRE(r.feasible);
      CHECK(r.cost == expect->first);
    } else {
      CHECK_FALSE(r.feasible);
    }
  }
}

TEST_CASE("dp result embeddings are valid subgraph maps") {
  testhelp::Rng rng(78);
  for (int round = 0; round < 100; ++round) {
    Case c = random_case(rng);
    auto r = run_dp(c);
    if (!r.feasible) continue;
    Cost total = Cost::zero();
    std::vector<char> used(c.F.vertex_count() + 1, 0);
    for (int i = 0; i < c.F.vertex_count(); ++i) {
      int u = r.embedding[i];
      REQUIRE(u >= 0);
      int lab = c.labels[u];
      REQUIRE((lab >= 1 && lab <= c.F.vertex_count()));
      REQUIRE_FALSE(used[lab]);
      used[lab] = 1;
      total += c.cost[i][u];
    }
    for (auto [a, b] : c.F.edges()) CHECK(c.G.has_edge(r.embedding[a], r.embedding[b]));
    CHECK(total == r.cost);
  }
}

TEST_CASE("raising one table entry never lowers the optimum") {
  testhelp::Rng rng(79);
  for (int round = 0; round < 60; ++round) {
    Case c = random_case(rng);
    auto before = run_dp(c);
    int i = rng.below(c.F.vertex_count());
    int u = rng.below(c.G.vertex_count());
    if (c.cost[i][u].is_inf()) continue;
    c.cost[i][u] += Cost(rng.range(1, 5));
    auto after = run_dp(c);
    if (before.feasible && after.feasible) CHECK(after.cost >= before.cost);
    if (!before.feasible) CHECK_FALSE(after.feasible);
  }
}

TEST_CASE("host relabeling permutation keeps the optimal cost") {
  testhelp::Rng rng(80);
  for (int round = 0; round < 60; ++round) {
    Case c = random_case(rng);
    int nG = c.G.vertex_count();
    std::vector<int> perm(nG);
    for (int v = 0; v < nG; ++v) perm[v] = v;
    for (int v = nG - 1; v > 0; --v) std::swap(perm[v], perm[rng.below(v + 1)]);
    Case d = c;
    Graph pg(nG);
    for (auto [a, b] : c.G.edges()) pg.add_edge(perm[a], perm[b]);
    d.G = pg;
    for (int v = 0; v < nG; ++v) d.labels[perm[v]] = c.labels[v];
    for (int i = 0; i < c.F.vertex_count(); ++i)
      for (int v = 0; v < nG; ++v) d.cost[i][perm[v]] = c.cost[i][v];
    auto a = run_dp(c);
    auto b = run_dp(d);
    CHECK(a.feasible == b.feasible);
    if (a.feasible) CHECK(a.cost == b.cost);
  }
}

TEST_CASE("min_cost_embedding trial count and triangle example") {
  Graph F = complete(3);
  Graph G = complete(4);
  EmbedCostTable cost(3, std::vector<Cost>(4, Cost::zero()));
  NiceTreeDecomposition nice = make_nice(exact_decomposition(F), F);
  std::uint64_t trials = 0;
  auto r = min_cost_embedding(F, nice, G, cost, 0.01, 7, &trials);
  REQUIRE(r.feasible);
  CHECK(r.cost == Cost::zero());
  // ceil(e^3 * ln(100)) independent labelings
  CHECK(trials == 93);
}

TEST_CASE("min_cost_embedding infeasible when the pattern is larger than the host") {
  Graph F(3), G(2);
  EmbedCostTable cost(3, std::vector<Cost>(2, Cost::zero()));
  NiceTreeDecomposition nice = make_nice(exact_decomposition(F), F);
  auto r = min_cost_embedding(F, nice, G, cost, 0.1, 1);
  CHECK_FALSE(r.feasible);
}

TEST_CASE("min_cost_embedding finds the exhaustive optimum almost always") {
  testhelp::Rng rng(81);
  int agree = 0, total = 0;
  while (total < 200) {
    Graph F = testhelp::random_graph(rng, 3, 700);
    Graph G = testhelp::random_graph(rng, rng.range(3, 6), 600);
    EmbedCostTable cost(3, std::vector<Cost>(G.vertex_count(), Cost::zero()));
    for (auto& row : cost)
      for (auto& c : row) c = Cost(rng.range(0, 9));
    // unrestricted oracle: best over all injective subgraph maps
    Cost best = Cost::inf();
    {
      std::vector<int> pick(3);
      auto rec = [&](auto&& self, int v, std::uint32_t used) -> void {
        if (v == 3) {
          Cost t = cost[0][pick[0]] + cost[1][pick[1]] + cost[2][pick[2]];
          if (t < best) best = t;
          return;
        }
        for (int u = 0; u < G.vertex_count(); ++u) {
          if (used & (1u << u)) continue;
          bool ok = true;
          for (int w = 0; w < v && ok; ++w)
            if (F.has_edge(w, v) && !G.has_edge(pick[w], u)) ok = false;
          if (!ok) continue;
          pick[v] = u;
          self(self, v + 1, used | (1u << u));
        }
      };
      rec(rec, 0, 0);
    }
    if (best.is_inf()) continue;  // keep only feasible instances
    ++total;
    NiceTreeDecomposition nice = make_nice(exact_decomposition(F), F);
    auto r = min_cost_embedding(F, nice, G, cost, 0.01, 5000 + total);
    if (r.feasible && r.cost == best) ++agree;
    if (r.feasible) CHECK(r.cost >= best);
  }
  // binomial bound: at eps=0.01 over 200 runs, >= 97% agreement
  CHECK(agree >= 194);
}

TEST_CASE("splitmix64 stream reproducibility") {
  SplitMix64 a = SplitMix64::stream(42, 7);
  SplitMix64 b = SplitMix64::stream(42, 7);
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());
  SplitMix64 c = SplitMix64::stream(42, 8);
  CHECK(SplitMix64::stream(42, 7).next() != c.next());
}
