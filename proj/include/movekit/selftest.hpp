#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "movekit/connectivity.hpp"
#include "movekit/fpt_solver.hpp"
#include "movekit/generators.hpp"
#include "movekit/instance_io.hpp"
#include "movekit/oracle.hpp"
#include "movekit/steiner_planar.hpp"
#include "movekit/verify.hpp"

namespace movekit {
namespace build {

inline Graph path(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph cycle(int n) {
  Graph g = path(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline Graph star(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

inline Graph complete(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline CostSpec pinned_at(int n, int v, std::int64_t own_cost = 0) {
  TableCost t;
  t.values.assign(n, Cost::inf());
  t.values[v] = Cost(own_cost);
  return t;
}

struct PebbleSpec {
  std::string color;
  int at;
  CostSpec cost = DistanceCost{};
};

inline Instance instance(Graph g, ColorTable colors, std::vector<PebbleSpec> pebbles,
                         ProblemSpec problem, int l, std::optional<Cost> budget = {},
                         bool planar = false) {
  Instance inst;
  inst.colors = std::move(colors);
  inst.problem = std::move(problem);
  inst.max_solution_size = l;
  inst.budget = budget;
  inst.planar = planar;
  int id = 0;
  for (auto& p : pebbles)
    inst.pebbles.push_back(Pebble{id++, inst.colors.index_of(p.color), p.at, p.cost});
  inst.graph = MulticoloredGraph(std::move(g), inst.colors.size());
  inst.rebuild_counts();
  inst.validate();
  return inst;
}

inline ColorTable one_main(const std::string& name = "pebble") {
  return ColorTable{{{name, ColorKind::Main}}};
}

inline ColorTable red_blue_facility() {
  return ColorTable{{{"red", ColorKind::Main}, {"blue", ColorKind::Facility}}};
}

inline ColorTable main_obnoxious() {
  return ColorTable{{{"client", ColorKind::Main}, {"waste", ColorKind::Obnoxious}}};
}

inline std::vector<int> main_counts_of(const Instance& inst) {
  std::vector<int> counts(inst.colors.size(), 0);
  for (const auto& p : inst.pebbles)
    if (inst.colors.kind(p.color) == ColorKind::Main) counts[p.color]++;
  return counts;
}

inline PatternCatalog catalog_of(const Instance& inst) {
  return minimal_patterns(inst.problem, inst.colors, main_counts_of(inst),
                          inst.max_solution_size);
}

}  // namespace build

namespace selftest {

struct Entry {
  std::string name;
  Instance instance;
  bool run_fpt = true;
  bool run_convolution = false;
  bool run_steiner_planar = false;
};

inline std::vector<Entry> corpus() {
  using namespace build;
  std::vector<Entry> out;

  {
    ProblemSpec pr{"connectivity-collocated", {}, {}};
    Entry e{"conn-colloc-path5",
            instance(path(5), one_main(), {{"pebble", 0}, {"pebble", 2}, {"pebble", 4}}, pr, 3)};
    e.run_convolution = true;
    out.push_back(e);
  }
  {
    ProblemSpec pr{"connectivity-collocated", {}, {}};
    Entry e{"conn-colloc-star",
            instance(star(3), one_main(), {{"pebble", 1}, {"pebble", 2}, {"pebble", 3}}, pr, 3)};
    e.run_convolution = true;
    out.push_back(e);
  }
  {
    ProblemSpec pr{"connectivity-collocated", {}, {}};
    Entry e{"conn-colloc-budget",
            instance(path(5), one_main(), {{"pebble", 0}, {"pebble", 2}, {"pebble", 4}}, pr, 3,
                     Cost(1))};
    e.run_convolution = true;
    out.push_back(e);
  }
  {
    ProblemSpec pr{"connectivity-distinct", {}, {}};
    out.push_back(Entry{
        "conn-distinct-path4",
        instance(path(4), one_main(), {{"pebble", 0}, {"pebble", 1}, {"pebble", 3}}, pr, 3)});
  }
  {
    ProblemSpec pr{"matching", {}, {}};
    out.push_back(Entry{"matching-c4",
                        instance(cycle(4), one_main(),
                                 {{"pebble", 0, MovedCost{}},
                                  {"pebble", 1, MovedCost{}},
                                  {"pebble", 2, MovedCost{}},
                                  {"pebble", 3, MovedCost{}}},
                                 pr, 4)});
  }
  {
    ProblemSpec pr{"facility-location", {}, {}};
    out.push_back(Entry{"facility-path4",
                        instance(path(4), red_blue_facility(),
                                 {{"red", 0}, {"red", 3}, {"blue", 1}, {"blue", 2}}, pr, 2)});
  }
  {
    ProblemSpec pr{"separation", {{"o", 0}}, {}};
    out.push_back(Entry{
        "separation-path4",
        instance(path(4), main_obnoxious(), {{"client", 0}, {"client", 1}, {"waste", 1}}, pr, 2)});
  }
  {
    ProblemSpec pr{"dispersion", {}, {}};
    Entry e{"dispersion-p3",
            instance(path(3), one_main(), {{"pebble", 0, StepsCost{1}}, {"pebble", 1, StepsCost{1}}},
                     pr, 2)};
    e.run_fpt = false;  // oracle-only property
    out.push_back(e);
  }
  {
    ProblemSpec pr{"st-connectivity-bounded", {}, {}};
    out.push_back(
        Entry{"stconn-bounded-p3",
              instance(path(3), red_blue_facility(),
                       {{"red", 0, pinned_at(3, 0)}, {"red", 2, pinned_at(3, 2)}, {"blue", 0}},
                       pr, 3)});
  }
  {
    ProblemSpec pr{"steiner", {}, {}};
    Entry e{"steiner-path3",
            instance(path(3), red_blue_facility(),
                     {{"red", 0, pinned_at(3, 0)}, {"red", 2, pinned_at(3, 2)}, {"blue", 0}}, pr,
                     3, {}, /*planar=*/true)};
    e.run_steiner_planar = true;
    out.push_back(e);
  }
  {
    Graph primal = path(3);
    ColorTable ct = one_main("client");
    CSPInstance csp = random_csp(primal, 2, 99, 600);
    Entry e{"csp-path3", csp_to_movement(csp, csp_pattern(primal, ct), ct)};
    e.run_fpt = false;
    out.push_back(e);
  }
  {
    Entry e{"domset-steiner-p3", domset_to_steiner(path(3), 1)};
    e.run_fpt = false;
    out.push_back(e);
  }
  return out;
}

inline std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::OverBudget:
      return "over-budget";
    default:
      return "infeasible";
  }
}

// Runs the corpus, printing one deterministic line per (instance, solver).
// Fails only on soundness violations: a solver beating the oracle, an
// unverifiable plan, or an exact solver disagreeing with the oracle.
inline int run(std::ostream& os, double epsilon, std::uint64_t seed) {
  bool ok = true;
  for (const Entry& e : corpus()) {
    PatternCatalog catalog = build::catalog_of(e.instance);
    SolveResult oracle = oracle_solve(e.instance, catalog);
    os << e.name << " oracle status=" << status_name(oracle.status);
    if (oracle.status == SolveStatus::Optimal) os << " cost=" << oracle.solution->cost;
    os << "\n";
    auto check_against_oracle = [&](const char* solver, const SolveResult& r, bool exact) {
      os << e.name << " " << solver << " status=" << status_name(r.status);
      if (r.status == SolveStatus::Optimal) os << " cost=" << r.solution->cost;
      os << "\n";
      if (r.status == SolveStatus::Optimal) {
        auto v = verify_solution(e.instance, r.solution->plan, r.solution->witness,
                                 catalog.patterns, catalog.closed_under_edge_addition);
        if (!v.ok() || v.cost != r.solution->cost) {
          os << e.name << " " << solver << " FAIL unverifiable-solution\n";
          ok = false;
        }
      }
      if (status_name(r.status) != status_name(oracle.status)) {
        os << e.name << " " << solver << " FAIL status-mismatch\n";
        ok = false;
      } else if (r.status == SolveStatus::Optimal) {
        if (r.solution->cost < oracle.solution->cost) {
          os << e.name << " " << solver << " FAIL beats-oracle\n";
          ok = false;
        } else if (exact && r.solution->cost != oracle.solution->cost) {
          os << e.name << " " << solver << " FAIL cost-mismatch\n";
          ok = false;
        }
      }
    };
    if (e.run_fpt) check_against_oracle("fpt", solve_fpt(e.instance, catalog, epsilon, seed),
                                        /*exact=*/false);
    if (e.run_convolution)
      check_against_oracle("convolution", connectivity_solve(e.instance), /*exact=*/true);
    if (e.run_steiner_planar)
      check_against_oracle("steiner-planar", steiner_planar_solve(e.instance, epsilon, seed),
                           /*exact=*/false);
  }

  // generator consistency: the hardness reductions against their source oracles
  {
    using build::complete;
    using build::path;
    using build::star;
    struct Source {
      std::string name;
      Graph graph;
      int k;
    };
    std::vector<Source> sources;
    sources.push_back({"triangle-k2", complete(3), 2});
    sources.push_back({"path3-k1", path(3), 1});
    sources.push_back({"star3-k1", star(3), 1});
    for (const auto& src : sources) {
      for (int d : {0, 1}) {
        Instance inst = domset_to_facility(src.graph, src.k, d);
        Instance round = parse_instance_text(instance_to_text(inst));
        bool movement = facility_distance_one_step_feasible(round, d);
        bool domset = has_dominating_set(src.graph, src.k, /*closed=*/false);
        os << "gen-facility " << src.name << " d=" << d << " movement=" << movement
           << " open-domset=" << domset << "\n";
        if (movement != domset) {
          os << "gen-facility " << src.name << " FAIL equivalence\n";
          ok = false;
        }
      }
      Instance inst = domset_to_steiner(src.graph, src.k);
      bool movement = oracle_solve_semantic(inst).status == SolveStatus::Optimal;
      bool domset = has_dominating_set(src.graph, src.k, /*closed=*/true);
      os << "gen-steiner " << src.name << " movement=" << movement << " domset=" << domset
         << "\n";
      if (movement != domset) {
        os << "gen-steiner " << src.name << " FAIL equivalence\n";
        ok = false;
      }
    }
  }
  os << (ok ? "selftest PASS" : "selftest FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace selftest
}  // namespace movekit
