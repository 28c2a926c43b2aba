#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "movekit/error.hpp"
#include "movekit/fpt_solver.hpp"
#include "movekit/model.hpp"
#include "movekit/oracle.hpp"
#include "movekit/patterns.hpp"
#include "movekit/verify.hpp"

namespace movekit {

struct ContractedInstance {
  Instance instance;
  std::vector<int> to_new;               // original vertex -> contracted vertex
  std::vector<std::vector<int>> members;  // contracted vertex -> original vertices
};

namespace detail {

inline int steiner_red_color(const Instance& inst) {
  auto mains = inst.colors.of_kind(ColorKind::Main);
  if (mains.empty()) throw Error(ErrorKind::Validation, "steiner needs a main color");
  return mains[0];
}

inline int steiner_blue_color(const Instance& inst) {
  auto fac = inst.colors.of_kind(ColorKind::Facility);
  if (fac.empty()) throw Error(ErrorKind::Validation, "steiner needs a facility color");
  return fac[0];
}

}  // namespace detail

// Merges every connected component of red-occupied vertices into a single
// vertex. Red pebbles must be stationary. Costs of the other pebbles toward
// a merged vertex become the minimum over the merged originals.
inline ContractedInstance contract_reds(const Instance& inst) {
  int red = detail::steiner_red_color(inst);
  CostMatrix costs(inst);
  for (const auto& p : inst.pebbles) {
    if (p.color != red) continue;
    for (int v = 0; v < inst.vertex_count(); ++v)
      if (v != p.initial_vertex && costs.at(p.id, v).is_finite())
        throw Error(ErrorKind::NonStationaryReds,
                    "red (terminal) pebbles must have infinite cost off their vertex");
  }

  std::vector<int> red_vertices;
  for (int v = 0; v < inst.vertex_count(); ++v)
    if (inst.graph.count(red, v) > 0) red_vertices.push_back(v);
  auto comps = inst.graph.graph.induced_components(red_vertices);

  ContractedInstance out;
  out.to_new.assign(inst.vertex_count(), -1);
  std::vector<int> rep_of(inst.vertex_count(), -1);  // original -> component representative
  for (const auto& comp : comps)
    for (int v : comp) rep_of[v] = comp[0];
  for (int v = 0; v < inst.vertex_count(); ++v)
    if (rep_of[v] < 0) rep_of[v] = v;

  int next = 0;
  for (int v = 0; v < inst.vertex_count(); ++v)
    if (rep_of[v] == v) out.to_new[v] = next++;
  for (int v = 0; v < inst.vertex_count(); ++v) out.to_new[v] = out.to_new[rep_of[v]];
  out.members.assign(next, {});
  for (int v = 0; v < inst.vertex_count(); ++v) out.members[out.to_new[v]].push_back(v);

  Graph g(next);
  for (auto [a, b] : inst.graph.graph.edges()) {
    int x = out.to_new[a], y = out.to_new[b];
    if (x != y && !g.has_edge(x, y)) g.add_edge(x, y);
  }

  Instance ni;
  ni.colors = inst.colors;
  ni.problem = inst.problem;
  ni.planar = inst.planar;
  ni.max_solution_size = std::min(inst.max_solution_size, next);
  ni.budget = inst.budget;
  for (const auto& p : inst.pebbles) {
    Pebble np = p;
    np.initial_vertex = out.to_new[p.initial_vertex];
    TableCost t;
    t.values.assign(next, Cost::inf());
    for (int w = 0; w < next; ++w) {
      Cost best = Cost::inf();
      for (int v : out.members[w]) {
        Cost c = costs.at(p.id, v);
        if (c < best) best = c;
      }
      t.values[w] = best;
    }
    np.cost = std::move(t);
    ni.pebbles.push_back(std::move(np));
  }
  ni.graph = MulticoloredGraph(std::move(g), inst.colors.size());
  ni.rebuild_counts();
  out.instance = std::move(ni);
  return out;
}

namespace detail {

struct SteinerSearch {
  const Instance& orig;
  const CostMatrix& costs;
  int red, blue;
  int initial_blue_count;
  double failure_prob;
  std::uint64_t seed;
  std::uint64_t trials = 0;
  std::uint64_t delegation = 0;
  std::map<std::pair<int, int>, PatternCatalog> catalog_cache;  // (red total, l')

  // free_blues: still mobile; fixed: pebble id -> original target vertex
  struct Branch {
    std::vector<int> free_blues;
    std::vector<std::pair<int, int>> fixed;
  };

  std::optional<Solution> best;

  // current red-occupied set: original reds plus fixed blue targets
  Instance make_marked(const Branch& br) const {
    Instance marked = orig;
    for (auto [id, target] : br.fixed) {
      // a fixed blue behaves like a stationary red at its target
      marked.pebbles[id].color = red;
      marked.pebbles[id].initial_vertex = target;
      TableCost t;
      t.values.assign(orig.vertex_count(), Cost::inf());
      t.values[target] = costs.at(id, target);
      marked.pebbles[id].cost = std::move(t);
    }
    marked.rebuild_counts();
    return marked;
  }

  void consider(Solution&& sol) {
    if (!best || sol.cost < best->cost) best = std::move(sol);
  }

  // lifts a solution of the contracted instance back to original vertices
  void lift_and_consider(const Branch& br, const ContractedInstance& fold,
                         const Solution& folded) {
    MovementPlan plan = MovementPlan::identity(orig);
    std::vector<char> fixed_flag(orig.pebbles.size(), 0);
    for (auto [id, target] : br.fixed) {
      plan.targets[id] = target;
      fixed_flag[id] = 1;
    }
    for (const auto& p : orig.pebbles) {
      if (fixed_flag[p.id]) continue;
      if (p.color == red) continue;  // stationary
      int w = folded.plan.target(p.id);
      Cost want = Cost::inf();
      int pick = -1;
      for (int v : fold.members[w]) {
        Cost c = costs.at(p.id, v);
        if (c < want) {
          want = c;
          pick = v;
        }
      }
      if (pick < 0) return;  // unreachable member; branch solution unusable
      plan.targets[p.id] = pick;
    }
    std::vector<int> witness;
    for (int w : folded.witness)
      for (int v : fold.members[w]) witness.push_back(v);
    std::sort(witness.begin(), witness.end());
    auto check = verify_solution_semantic(orig, plan, witness);
    if (!check.ok()) return;
    consider(Solution{std::move(plan), std::move(witness), check.cost});
  }

  void run(const Branch& br) {
    Instance marked = make_marked(br);
    ContractedInstance fold = contract_reds(marked);
    const Instance& folded = fold.instance;
    int k = static_cast<int>(br.free_blues.size());
    std::vector<int> red_verts;
    for (int v = 0; v < folded.vertex_count(); ++v)
      if (folded.graph.count(red, v) > 0) red_verts.push_back(v);
    int r = static_cast<int>(red_verts.size());

    if (k == 0) {
      if (r != 1) return;
      Solution trivial;
      trivial.plan = MovementPlan::identity(folded);
      trivial.witness = red_verts;
      auto chk = verify_solution_semantic(folded, trivial.plan, trivial.witness);
      if (!chk.ok()) return;
      trivial.cost = chk.cost;
      lift_and_consider(br, fold, trivial);
      return;
    }

    std::vector<int> red_neighbor_count(folded.vertex_count(), 0);
    {
      std::vector<char> is_red(folded.vertex_count(), 0);
      for (int v : red_verts) is_red[v] = 1;
      for (int v = 0; v < folded.vertex_count(); ++v)
        for (int u : folded.graph.graph.neighbors(v))
          if (is_red[u]) red_neighbor_count[v]++;
    }
    int v_star = -1;
    for (int v = 0; v < folded.vertex_count(); ++v)
      if (red_neighbor_count[v] > 2 * k * k &&
          (v_star < 0 || red_neighbor_count[v] > red_neighbor_count[v_star]))
        v_star = v;

    if (v_star < 0) {
      if (r > 2 * k * k * k) return;  // more reds than k blues can ever dominate
      delegate(br, fold, r + k);
      return;
    }

    // u sharing more than 2k red neighbors with v_star
    int u_star = -1, shared_best = 2 * k;
    std::vector<char> vred(folded.vertex_count(), 0);
    for (int u : folded.graph.graph.neighbors(v_star))
      if (folded.graph.count(red, u) > 0) vred[u] = 1;
    for (int u = 0; u < folded.vertex_count(); ++u) {
      if (u == v_star) continue;
      int shared = 0;
      for (int w : folded.graph.graph.neighbors(u))
        if (vred[w]) ++shared;
      if (shared > shared_best) {
        shared_best = shared;
        u_star = u;
      }
    }

    std::vector<int> targets{v_star};
    if (u_star >= 0) targets.push_back(u_star);
    for (int id : br.free_blues) {
      for (int w : targets) {
        // move blue `id` to some original vertex of the merged target
        Cost want = Cost::inf();
        int pick = -1;
        for (int v : fold.members[w]) {
          Cost c = costs.at(id, v);
          if (c < want) {
            want = c;
            pick = v;
          }
        }
        if (pick < 0) continue;
        Branch child;
        child.fixed = br.fixed;
        child.fixed.emplace_back(id, pick);
        for (int other : br.free_blues)
          if (other != id) child.free_blues.push_back(other);
        run(child);
      }
    }
  }

  void delegate(const Branch& br, const ContractedInstance& fold, int ell) {
    const Instance& folded = fold.instance;
    Instance sub = folded;
    sub.max_solution_size = std::min(ell, sub.vertex_count());
    sub.budget.reset();  // the top level decides budget status
    int red_total = sub.graph.total_of_color(red);
    auto key = std::make_pair(red_total, sub.max_solution_size);
    auto it = catalog_cache.find(key);
    if (it == catalog_cache.end()) {
      std::vector<int> main_counts(sub.colors.size(), 0);
      main_counts[red] = red_total;
      it = catalog_cache
               .emplace(key, minimal_patterns(sub.problem, sub.colors, main_counts,
                                              sub.max_solution_size))
               .first;
    }
    double branch_bound = std::pow(std::max(1, 2 * initial_blue_count),
                                   std::max(1, initial_blue_count));
    double eps = std::max(failure_prob / branch_bound, 1e-9);
    SolveResult r = solve_fpt(sub, it->second, eps, seed + 0x9E37 * (++delegation));
    trials += r.trials;
    if (r.status != SolveStatus::Optimal) return;
    lift_and_consider(br, fold, *r.solution);
  }
};

}  // namespace detail

// STEINER CONNECTIVITY on planar graphs, parameterized by the number of
// connector (blue) pebbles: contract red components, branch a blue pebble
// onto a high-red-degree vertex pair while one exists, then hand the
// bounded remainder to the general solver.
inline SolveResult steiner_planar_solve(const Instance& inst, double failure_prob,
                                        std::uint64_t seed) {
  if (inst.problem.name != "steiner")
    throw Error(ErrorKind::WrongProblem, "steiner_planar_solve handles steiner instances only");
  if (!inst.planar)
    throw Error(ErrorKind::NotPlanarSanity, "instance is not flagged planar");
  int n = inst.vertex_count();
  if (n >= 3 && inst.graph.graph.edge_count() > 3 * n - 6)
    throw Error(ErrorKind::NotPlanarSanity, "edge count violates the planar bound");

  int red = detail::steiner_red_color(inst);
  int blue = detail::steiner_blue_color(inst);
  for (const auto& p : inst.pebbles)
    if (p.color != red && p.color != blue)
      throw Error(ErrorKind::WrongProblem, "steiner instances use red terminals and blue connectors");

  CostMatrix costs(inst);
  detail::SteinerSearch search{inst, costs, red, blue, 0, failure_prob, seed};
  detail::SteinerSearch::Branch root;
  for (const auto& p : inst.pebbles)
    if (p.color == blue) root.free_blues.push_back(p.id);
  search.initial_blue_count = static_cast<int>(root.free_blues.size());
  search.run(root);

  SolveResult out;
  out.trials = search.trials;
  if (!search.best) {
    out.status = SolveStatus::Infeasible;
    return out;
  }
  if (inst.budget && search.best->cost > *inst.budget) {
    out.status = SolveStatus::OverBudget;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.solution = std::move(search.best);
  return out;
}

}  // namespace movekit
