// Acceptance suite: one test case per criterion, one PASS/FAIL line each.
#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <sstream>

#include "movekit/cli.hpp"
#include "movekit/connectivity.hpp"
#include "movekit/fpt_solver.hpp"
#include "movekit/generators.hpp"
#include "movekit/oracle.hpp"
#include "movekit/steiner_planar.hpp"
#include "movekit/subset_convolution.hpp"
#include "test_helpers.hpp"

using namespace movekit;
using namespace movekit::build;
using Clock = std::chrono::steady_clock;

namespace {

void report(int criterion, const std::string& what, bool pass, const std::string& detail) {
  std::printf("%s: criterion %d — %s (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

TEST_CASE("criterion 1: randomized solver equals the oracle") {
  const char* properties[] = {"connectivity-distinct", "connectivity-collocated", "matching",
                              "facility-location", "separation"};
  bool all_pass = true;
  std::ostringstream detail;
  for (const char* prop : properties) {
    int agree = 0, sound = 0, total = 200;
    for (int i = 0; i < total; ++i) {
      Instance inst = testhelp::random_property_instance(prop, 100000 + i);
      PatternCatalog cat = catalog_of(inst);
      SolveResult slow = oracle_solve(inst, cat);
      SolveResult fast = solve_fpt(inst, cat, 0.01, 7000 + i);
      bool ok_sound = true;
      if (fast.status == SolveStatus::Optimal) {
        auto v = verify_solution(inst, fast.solution->plan, fast.solution->witness,
                                 cat.patterns, cat.closed_under_edge_addition);
        if (!v.ok() || v.cost != fast.solution->cost) ok_sound = false;
        if (slow.status != SolveStatus::Optimal ||
            fast.solution->cost < slow.solution->cost)
          ok_sound = false;  // beating or contradicting the oracle is unsound
      }
      if (ok_sound) ++sound;
      bool same_status = fast.status == slow.status;
      bool same_cost = fast.status != SolveStatus::Optimal ||
                       fast.solution->cost == slow.solution->cost;
      if (same_status && same_cost) ++agree;
    }
    detail << prop << ": agree " << agree << "/200, sound " << sound << "/200; ";
    if (agree < 194 || sound != total) all_pass = false;
  }
  report(1, "solve_fpt vs oracle on 200 instances x 5 properties", all_pass, detail.str());
  CHECK(all_pass);
}

TEST_CASE("criterion 2: exact connectivity solver equals the oracle") {
  int agree = 0, total = 200;
  for (int i = 0; i < total; ++i) {
    Instance inst = testhelp::random_property_instance("connectivity-collocated", 200000 + i);
    inst.max_solution_size = std::max(inst.max_solution_size, inst.pebble_count());
    PatternCatalog cat = catalog_of(inst);
    SolveResult fast = connectivity_solve(inst);
    SolveResult slow = oracle_solve(inst, cat);
    bool ok = fast.status == slow.status;
    if (ok && fast.status == SolveStatus::Optimal)
      ok = fast.solution->cost == slow.solution->cost;
    if (ok) ++agree;
  }
  bool pass = agree == total;
  report(2, "connectivity_solve vs oracle, exact",pass,
         std::to_string(agree) + "/" + std::to_string(total) + " equal");
  CHECK(pass);
}

TEST_CASE("criterion 3: fast subset convolution is exact") {
  testhelp::Rng rng(300);
  int equal = 0, total = 500;
  for (int i = 0; i < total; ++i) {
    int k = rng.range(1, 10);
    SubsetFunction f = SubsetFunction::filled(k, Cost::zero());
    SubsetFunction g = SubsetFunction::filled(k, Cost::zero());
    for (auto& v : f.values)
      v = rng.chance_permille(200) ? Cost::inf() : Cost(rng.range(0, 31));
    for (auto& v : g.values)
      v = rng.chance_permille(200) ? Cost::inf() : Cost(rng.range(0, 31));
    if (conv_fast(f, g, 31).values == conv_naive(f, g).values) ++equal;
  }
  bool pass = equal == total;
  report(3, "conv_fast vs conv_naive on 500 random pairs", pass,
         std::to_string(equal) + "/" + std::to_string(total) + " equal");
  CHECK(pass);
}

TEST_CASE("criterion 4: embedding DP equals exhaustive enumeration") {
  testhelp::Rng rng(400);
  int equal = 0, total = 300;
  for (int i = 0; i < total; ++i) {
    Graph F = testhelp::random_graph(rng, rng.range(1, 4), 600);
    Graph G = testhelp::random_graph(rng, rng.range(1, 7), 500);
    int kF = F.vertex_count(), nG = G.vertex_count();
    std::vector<int> labels(nG);
    for (auto& l : labels) l = rng.range(1, kF);
    EmbedCostTable cost(kF, std::vector<Cost>(nG, Cost::zero()));
    for (auto& row : cost)
      for (auto& c : row) c = rng.chance_permille(150) ? Cost::inf() : Cost(rng.range(0, 9));
    // exhaustive oracle over injective subgraph maps restricted to colorful
    Cost best = Cost::inf();
    {
      std::vector<int> phi(kF, -1);
      std::vector<char> used(nG, 0);
      auto rec = [&](auto&& self, int v) -> void {
        if (v == kF) {
          std::vector<char> lab_used(kF + 1, 0);
          Cost t = Cost::zero();
          for (int x = 0; x < kF; ++x) {
            int lab = labels[phi[x]];
            if (lab_used[lab]) return;
            lab_used[lab] = 1;
            t += cost[x][phi[x]];
          }
          if (t < best) best = t;
          return;
        }
        for (int u = 0; u < nG; ++u) {
          if (used[u]) continue;
          bool ok = true;
          for (int w = 0; w < v && ok; ++w)
            if (F.has_edge(w, v) && !G.has_edge(phi[w], u)) ok = false;
          if (!ok) continue;
          phi[v] = u;
          used[u] = 1;
          self(self, v + 1);
          used[u] = 0;
        }
      };
      rec(rec, 0);
    }
    NiceTreeDecomposition nice = make_nice(exact_decomposition(F), F);
    EmbeddingResult r = colorful_embedding_dp(F, nice, G, labels, cost);
    bool same = r.feasible ? (best.is_finite() && r.cost == best) : best.is_inf();
    if (same) ++equal;
  }
  bool pass = equal == total;
  report(4, "colorful_embedding_dp vs exhaustive on 300 cases", pass,
         std::to_string(equal) + "/" + std::to_string(total) + " equal");
  CHECK(pass);
}

TEST_CASE("criterion 5: pattern catalogs, minimality, widths") {
  bool pass = true;
  std::ostringstream detail;
  // tree counts 1,1,1,2,3,6,11
  std::vector<int> expected{1, 1, 1, 2, 3, 6, 11};
  for (int j = 1; j <= 7; ++j)
    if (static_cast<int>(enumerate_trees(j).size()) != expected[j - 1]) pass = false;
  detail << "tree counts ok; ";

  struct Audit {
    ProblemSpec spec;
    ColorTable colors;
    std::vector<int> main_counts;
    int l;
  };
  std::vector<Audit> audits;
  ColorTable onec = one_main();
  ColorTable rb = red_blue_facility();
  ColorTable mo = main_obnoxious();
  for (int k = 1; k <= 4; ++k) {
    audits.push_back({{"connectivity-distinct", {}, {}}, onec, {k}, 4});
    audits.push_back({{"connectivity-collocated", {}, {}}, onec, {k}, 4});
  }
  audits.push_back({{"matching", {}, {}}, onec, {4}, 4});
  audits.push_back({{"facility-location", {}, {}}, rb, {3, 0}, 4});
  audits.push_back({{"separation", {{"o", 1}}, {}}, mo, {3, 0}, 4});
  audits.push_back({{"steiner", {}, {}}, rb, {3, 0}, 4});
  audits.push_back({{"st-connectivity-bounded", {}, {}}, rb, {2, 0}, 4});
  audits.push_back({{"st-d-connectivity", {{"d", 2}}, {}}, rb, {2, 0}, 5});
  audits.push_back({{"dispersion", {}, {}}, onec, {3}, 3});
  int patterns_audited = 0;
  for (const auto& a : audits) {
    PatternCatalog cat = minimal_patterns(a.spec, a.colors, a.main_counts, a.l);
    for (const auto& p : cat.patterns) {
      ++patterns_audited;
      if (!property_membership(a.spec, a.colors, p.mc)) pass = false;
      for (size_t ei = 0; ei < p.mc.graph.edges().size(); ++ei) {
        Graph g(p.vertex_count());
        for (size_t e = 0; e < p.mc.graph.edges().size(); ++e)
          if (e != ei) g.add_edge(p.mc.graph.edges()[e].first, p.mc.graph.edges()[e].second);
        MulticoloredGraph reduced(g, a.colors.size());
        reduced.counts = p.mc.counts;
        if (property_membership(a.spec, a.colors, reduced)) pass = false;
      }
      if (exact_decomposition(p.mc.graph).width() > cat.treewidth_bound) pass = false;
    }
  }
  detail << patterns_audited << " patterns pass minimality and width audits";
  report(5, "tree counts, minimality audit, width bounds", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("criterion 6: reduction equivalences") {
  bool pass = true;
  std::ostringstream detail;
  {
    testhelp::Rng rng(600);
    ColorTable ct = one_main("client");
    int agree = 0, total = 100;
    for (int i = 0; i < total; ++i) {
      int vars = rng.range(2, 4);
      Graph primal = testhelp::random_connected_graph(rng, vars, 400);
      CSPInstance csp = random_csp(primal, rng.range(2, 3), 60000 + i, rng.range(200, 800));
      Instance inst = csp_to_movement(csp, csp_pattern(primal, ct), ct);
      bool movement = oracle_solve(inst, catalog_of(inst)).status == SolveStatus::Optimal;
      if (movement == csp_brute(csp)) ++agree;
    }
    detail << "csp " << agree << "/" << total;
    if (agree != total) pass = false;
  }
  {
    testhelp::Rng rng(601);
    int agree = 0, total = 50;
    for (int i = 0; i < total; ++i) {
      Graph source = testhelp::random_graph(rng, rng.range(2, 6), rng.range(200, 800));
      int k = rng.range(1, 3);
      int d = i % 2;
      Instance inst = domset_to_facility(source, k, d);
      bool movement = facility_distance_one_step_feasible(inst, d);
      if (movement == has_dominating_set(source, k, /*closed=*/false)) ++agree;
    }
    detail << "; facility " << agree << "/" << total;
    if (agree != total) pass = false;
  }
  {
    testhelp::Rng rng(602);
    int agree = 0, total = 50;
    for (int i = 0; i < total; ++i) {
      Graph source = testhelp::random_graph(rng, rng.range(2, 6), rng.range(200, 800));
      int k = rng.range(1, 3);
      Instance inst = domset_to_steiner(source, k);
      bool movement = oracle_solve_semantic(inst).status == SolveStatus::Optimal;
      if (movement == has_dominating_set(source, k, /*closed=*/true)) ++agree;
    }
    detail << "; steiner " << agree << "/" << total;
    if (agree != total) pass = false;
  }
  report(6, "csp and dominating-set reduction equivalences", pass, detail.str());
  CHECK(pass);
}

TEST_CASE("criterion 7: planar steiner matches the oracle") {
  int agree = 0, sound = 0, total = 50;
  for (int i = 0; i < total; ++i) {
    Instance inst = testhelp::random_planar_steiner(700000 + i);
    PatternCatalog cat = catalog_of(inst);
    SolveResult slow = oracle_solve(inst, cat);
    SolveResult fast = steiner_planar_solve(inst, 0.01, 7100 + i);
    bool ok_sound = true;
    if (fast.status == SolveStatus::Optimal) {
      auto v = verify_solution(inst, fast.solution->plan, fast.solution->witness, cat.patterns,
                               true);
      if (!v.ok() || v.cost != fast.solution->cost) ok_sound = false;
      if (slow.status != SolveStatus::Optimal || fast.solution->cost < slow.solution->cost)
        ok_sound = false;
    }
    if (ok_sound) ++sound;
    bool same = fast.status == slow.status &&
                (fast.status != SolveStatus::Optimal ||
                 fast.solution->cost == slow.solution->cost);
    if (same) ++agree;
  }
  bool pass = agree >= 49 && sound == total;  // ceil(0.97 * 50)
  report(7, "steiner_planar_solve vs oracle on 50 planar instances", pass,
         "agree " + std::to_string(agree) + "/50, sound " + std::to_string(sound) + "/50");
  CHECK(pass);
}

TEST_CASE("criterion 8: connectivity solver scaling") {
  // one n = 200 distance-cost instance family; k = 14 against k = 10
  auto make = [&](int k) {
    testhelp::Rng rng(800);
    Graph g = testhelp::random_connected_graph(rng, 200, 145);  // ~3000 edges
    std::vector<PebbleSpec> pebbles;
    testhelp::Rng prng(801);
    for (int i = 0; i < k; ++i) pebbles.push_back({"pebble", prng.below(200)});
    return instance(g, one_main(), pebbles, ProblemSpec{"connectivity-collocated", {}, {}}, k);
  };
  auto time_solve = [&](int k, Cost& cost_out) {
    Instance inst = make(k);
    double best = 1e99;
    for (int rep = 0; rep < 3; ++rep) {
      auto t0 = Clock::now();
      SolveResult r = connectivity_solve(inst);
      double dt = seconds_since(t0);
      REQUIRE(r.status == SolveStatus::Optimal);
      cost_out = r.solution->cost;
      best = std::min(best, dt);
    }
    return best;
  };
  Cost c10, c14;
  double t10 = time_solve(10, c10);
  double t14 = time_solve(14, c14);
  double ratio = t14 / std::max(t10, 1e-9);
  bool pass = t14 < 60.0 && ratio <= 40.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "t10=%.3fs t14=%.3fs ratio=%.1f (needs <60s and <=40x)", t10,
                t14, ratio);
  report(8, "n=200 distance-cost scaling, k 10 -> 14", pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 9: fixed-seed CLI runs are byte-identical") {
  auto run_once = [&](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    cli::run(args, out, err);
    return out.str() + "|" + err.str();
  };
  bool pass = true;
  std::string a = run_once({"selftest", "--seed", "5"});
  std::string b = run_once({"selftest", "--seed", "5"});
  if (a != b || a.find("selftest PASS") == std::string::npos) pass = false;

  ProblemSpec pr{"connectivity-collocated", {}, {}};
  Instance inst =
      instance(path(5), one_main(), {{"pebble", 0}, {"pebble", 2}, {"pebble", 4}}, pr, 3);
  save_instance(inst, "acceptance_det.json");
  for (const char* solver : {"fpt", "convolution", "oracle"}) {
    std::string x =
        run_once({"solve", "--instance", "acceptance_det.json", "--solver", solver, "--seed",
                  "9"});
    std::string y =
        run_once({"solve", "--instance", "acceptance_det.json", "--solver", solver, "--seed",
                  "9"});
    if (x != y) pass = false;
  }
  std::remove("acceptance_det.json");
  report(9, "selftest corpus and per-solver runs byte-identical", pass,
         pass ? "all outputs identical" : "output drift detected");
  CHECK(pass);
}
