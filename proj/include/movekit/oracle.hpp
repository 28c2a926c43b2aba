#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "movekit/model.hpp"
#include "movekit/patterns.hpp"
#include "movekit/verify.hpp"

namespace movekit {

struct OracleLimits {
  long long max_plans = 10'000'000;
};

namespace detail {

// Exhaustive search over all finite-cost plans and all witness sets drawn
// from occupied vertices (members are fully pebbled, so a witness never
// needs an unoccupied vertex). Acceptance is pluggable: pattern-catalog
// domination or the property's direct semantics.
template <typename AcceptFn>
SolveResult oracle_search(const Instance& inst, const OracleLimits& limits, AcceptFn&& accepts) {
  CostMatrix costs(inst);
  int n = inst.vertex_count();
  int m = inst.pebble_count();

  std::vector<std::vector<int>> candidates(m);
  long long plan_count = 1;
  for (const auto& p : inst.pebbles) {
    for (int v = 0; v < n; ++v)
      if (costs.at(p.id, v).is_finite()) candidates[p.id].push_back(v);
    if (candidates[p.id].empty()) return SolveResult{SolveStatus::Infeasible, std::nullopt, 0};
    plan_count *= static_cast<long long>(candidates[p.id].size());
    if (plan_count > limits.max_plans)
      throw Error(ErrorKind::TooLarge, "oracle plan space exceeds limit");
  }

  std::optional<Solution> best;  // ignoring the budget; status resolved at the end
  std::vector<int> choice(m, 0);
  MovementPlan plan;
  plan.targets.resize(m);
  for (;;) {
    for (int i = 0; i < m; ++i) plan.targets[i] = candidates[i][choice[i]];
    Cost c = plan_cost(inst, costs, plan);
    if (!best || c < best->cost) {
      // mandatory witness part: targets of main pebbles
      std::vector<int> mains;
      std::vector<int> optional_verts;
      {
        std::vector<char> is_main_target(n, 0), occupied(n, 0);
        for (const auto& p : inst.pebbles) {
          occupied[plan.target(p.id)] = 1;
          if (inst.colors.kind(p.color) == ColorKind::Main)
            is_main_target[plan.target(p.id)] = 1;
        }
        for (int v = 0; v < n; ++v) {
          if (is_main_target[v]) mains.push_back(v);
          else if (occupied[v]) optional_verts.push_back(v);
        }
      }
      if (static_cast<int>(mains.size()) <= inst.max_solution_size) {
        int extra_cap = inst.max_solution_size - static_cast<int>(mains.size());
        int q = static_cast<int>(optional_verts.size());
        for (std::uint32_t sub = 0; sub < (std::uint32_t(1) << q); ++sub) {
          if (__builtin_popcount(sub) > extra_cap) continue;
          std::vector<int> witness = mains;
          for (int i = 0; i < q; ++i)
            if (sub & (std::uint32_t(1) << i)) witness.push_back(optional_verts[i]);
          std::sort(witness.begin(), witness.end());
          if (accepts(plan, witness)) {
            best = Solution{plan, witness, c};
            break;
          }
        }
      }
    }
    int i = m - 1;
    while (i >= 0 && choice[i] == static_cast<int>(candidates[i].size()) - 1) choice[i--] = 0;
    if (i < 0) break;
    ++choice[i];
  }

  SolveResult out;
  if (!best) {
    out.status = SolveStatus::Infeasible;
  } else if (inst.budget && best->cost > *inst.budget) {
    out.status = SolveStatus::OverBudget;
  } else {
    out.status = SolveStatus::Optimal;
    out.solution = std::move(best);
  }
  return out;
}

}  // namespace detail

// Ground-truth exact solver: every plan, every witness, accepted through the
// catalog's minimal patterns.
inline SolveResult oracle_solve(const Instance& inst, const PatternCatalog& catalog,
                                OracleLimits limits = {}) {
  MulticoloredGraph config;
  return detail::oracle_search(inst, limits, [&](const MovementPlan& plan,
                                                 const std::vector<int>& witness) {
    MulticoloredGraph cfg = induced_config(inst, plan, witness);
    for (const auto& pat : catalog.patterns) {
      if (pat.vertex_count() != cfg.vertex_count()) continue;
      if (dominates(cfg, pat.mc, inst.colors, catalog.closed_under_edge_addition).found())
        return true;
    }
    return false;
  });
}

// Same exhaustive search with acceptance answered by the property semantics
// (no enumerated catalog). Used where catalogs would be impractically large.
inline SolveResult oracle_solve_semantic(const Instance& inst, OracleLimits limits = {}) {
  return detail::oracle_search(
      inst, limits, [&](const MovementPlan& plan, const std::vector<int>& witness) {
        return property_accepts_config(inst.problem, inst.colors,
                                       induced_config(inst, plan, witness));
      });
}

}  // namespace movekit
