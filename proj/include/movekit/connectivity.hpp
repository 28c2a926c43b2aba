#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "movekit/error.hpp"
#include "movekit/model.hpp"
#include "movekit/verify.hpp"

namespace movekit {
namespace detail {

// f[S][v]: minimum cost of moving the pebbles in S so they induce a
// connected subgraph containing v; fp[S][v] is the same with the subgraph
// containing a neighbor of v instead. Tables are laid out subset-major so
// the split pass streams whole vertex rows.
template <typename Value>
struct ConnectivityTables {
  static constexpr std::int64_t kInf = std::numeric_limits<Value>::max() / 2;

  int n = 0, k = 0;
  std::vector<Value> f, fp;
  std::vector<std::vector<Value>> pebble_cost;  // [pebble][vertex]

  Value* frow(std::size_t S) { return f.data() + S * n; }
  Value* prow(std::size_t S) { return fp.data() + S * n; }
  const Value* frow(std::size_t S) const { return f.data() + S * n; }
  const Value* prow(std::size_t S) const { return fp.data() + S * n; }
};

template <typename Value>
void connectivity_fill(ConnectivityTables<Value>& t, const Graph& g) {
  int n = t.n, k = t.k;
  std::size_t full = std::size_t(1) << k;
  constexpr Value INF = Value(ConnectivityTables<Value>::kInf);
  t.f.assign(full * n, INF);
  t.fp.assign(full * n, INF);

  // Entries are at most kInf = max/2, so any two-entry sum stays in range
  // and the inner loops vectorize on the narrow value type.
  for (int v = 0; v < n; ++v) t.frow(0)[v] = 0;
  for (std::size_t S = 1; S < full; ++S) {
    int low = __builtin_ctzll(S);
    const Value* src = t.frow(S ^ (std::size_t(1) << low));
    const Value* costs = t.pebble_cost[low].data();
    Value* dst = t.frow(S);
    for (int v = 0; v < n; ++v) {
      Value s = Value(src[v] + costs[v]);
      dst[v] = s < INF ? s : INF;
    }
  }

  std::vector<std::vector<std::size_t>> layers(k + 1);
  for (std::size_t S = 1; S < full; ++S) layers[__builtin_popcountll(S)].push_back(S);

  for (int s = 1; s <= k; ++s) {
    if (s < 2) continue;
    // neighbor minima over the now-final layer s-1
    for (std::size_t S : layers[s - 1]) {
      const Value* fr = t.frow(S);
      Value* pr = t.prow(S);
      for (int v = 0; v < n; ++v) {
        Value best = pr[v];
        for (int u : g.neighbors(v)) {
          Value x = fr[u];
          if (x < best) best = x;
        }
        pr[v] = best;
      }
    }
    for (std::size_t S : layers[s]) {
      std::size_t low = S & (~S + 1);
      std::size_t rest = S ^ low;
      Value* fr = t.frow(S);
      std::size_t U = (rest - 1) & rest;
      for (;;) {
        std::size_t T = low | U;
        // split: one side through a neighbor, the other side at v;
        // both orientations of (T, S\T) with T containing the low bit
        const Value* pa = t.prow(T);
        const Value* fb = t.frow(S ^ T);
        const Value* fa = t.frow(T);
        const Value* pb = t.prow(S ^ T);
        for (int v = 0; v < n; ++v) {
          Value c1 = Value(pa[v] + fb[v]);
          Value c2 = Value(fa[v] + pb[v]);
          Value c = c1 < c2 ? c1 : c2;
          if (c < fr[v]) fr[v] = c;
        }
        if (U == 0) break;
        U = (U - 1) & rest;
      }
    }
  }
}

template <typename Value>
struct ConnectivityReconstructor {
  const ConnectivityTables<Value>& t;
  const Graph& g;
  MovementPlan& plan;
  const std::vector<int>& pebble_ids;  // bit index -> pebble id

  void emit_all_to(std::size_t S, int v) {
    std::size_t scan = S;
    while (scan) {
      int bit = __builtin_ctzll(scan);
      scan &= scan - 1;
      plan.targets[pebble_ids[bit]] = v;
    }
  }

  std::int64_t base_sum(std::size_t S, int v) const {
    std::int64_t sum = 0;
    std::size_t scan = S;
    while (scan) {
      int bit = __builtin_ctzll(scan);
      scan &= scan - 1;
      sum += t.pebble_cost[bit][v];
      if (sum >= ConnectivityTables<Value>::kInf) return ConnectivityTables<Value>::kInf;
    }
    return sum;
  }

  void walk(std::size_t S, int v) {
    if (S == 0) return;
    std::int64_t val = t.frow(S)[v];
    if (base_sum(S, v) == val) {
      emit_all_to(S, v);
      return;
    }
    std::size_t low = S & (~S + 1);
    std::size_t rest = S ^ low;
    // ascending submask order; smaller split bitmask wins ties
    for (std::size_t T = 1; T < (std::size_t(1) << (64 - __builtin_clzll(S))); ++T) {
      if ((T & S) != T || T == S) continue;
      std::int64_t a = t.prow(T)[v], b = t.frow(S ^ T)[v];
      if (a + b != val) continue;
      for (int u : sorted_neighbors(v)) {
        if (t.frow(T)[u] == a) {
          walk(T, u);
          walk(S ^ T, v);
          return;
        }
      }
    }
    (void)low;
    (void)rest;
    throw Error(ErrorKind::Validation, "connectivity reconstruction failed");
  }

  std::vector<int> sorted_neighbors(int v) const {
    std::vector<int> nb = g.neighbors(v);
    std::sort(nb.begin(), nb.end());
    return nb;
  }
};

template <typename Value>
SolveResult connectivity_run(const Instance& inst, const CostMatrix& costs) {
  int n = inst.vertex_count();
  int k = inst.pebble_count();
  ConnectivityTables<Value> t;
  t.n = n;
  t.k = k;
  t.pebble_cost.assign(k, std::vector<Value>(n));
  std::vector<int> pebble_ids(k);
  for (int i = 0; i < k; ++i) pebble_ids[i] = i;
  for (int i = 0; i < k; ++i)
    for (int v = 0; v < n; ++v) {
      Cost c = costs.at(i, v);
      t.pebble_cost[i][v] =
          Value(c.is_finite() && c.value() < ConnectivityTables<Value>::kInf
                    ? c.value()
                    : ConnectivityTables<Value>::kInf);
    }
  connectivity_fill(t, inst.graph.graph);

  std::size_t full = (std::size_t(1) << k) - 1;
  int best_v = -1;
  std::int64_t best = ConnectivityTables<Value>::kInf;
  for (int v = 0; v < n; ++v)
    if (t.frow(full)[v] < best) {
      best = t.frow(full)[v];
      best_v = v;
    }
  SolveResult out;
  if (best_v < 0 || best >= ConnectivityTables<Value>::kInf) {
    out.status = SolveStatus::Infeasible;
    return out;
  }

  MovementPlan plan;
  plan.targets.assign(k, -1);
  ConnectivityReconstructor<Value> rec{t, inst.graph.graph, plan, pebble_ids};
  rec.walk(full, best_v);

  std::vector<int> witness;
  {
    std::vector<char> occ(n, 0);
    for (int tgt : plan.targets) occ[tgt] = 1;
    for (int v = 0; v < n; ++v)
      if (occ[v]) witness.push_back(v);
  }
  Solution sol{plan, witness, Cost(best)};
  auto check = verify_solution_semantic(inst, sol.plan, sol.witness);
  if (!check.ok() && check.error != VerifyError::CostBudgetExceeded)
    throw Error(ErrorKind::Validation, "connectivity solver produced an unverifiable plan");
  if (check.ok() && check.cost != sol.cost)
    throw Error(ErrorKind::Validation, "connectivity solver cost mismatch");
  if (inst.budget && sol.cost > *inst.budget) {
    out.status = SolveStatus::OverBudget;
    return out;
  }
  out.status = SolveStatus::Optimal;
  out.solution = std::move(sol);
  return out;
}

}  // namespace detail

// Exact CONNECTIVITY (collocation allowed) solver: popcount-layered subset
// splits, one truncated min-sum convolution per (vertex, round).
inline SolveResult connectivity_solve(const Instance& inst) {
  if (inst.problem.name != "connectivity-collocated")
    throw Error(ErrorKind::WrongProblem, "connectivity_solve handles connectivity-collocated only");
  for (const auto& p : inst.pebbles)
    if (inst.colors.kind(p.color) != ColorKind::Main)
      throw Error(ErrorKind::WrongProblem, "connectivity_solve expects main pebbles only");
  int k = inst.pebble_count();
  int n = inst.vertex_count();
  if (inst.max_solution_size < k)
    throw Error(ErrorKind::WrongProblem,
                "connectivity_solve needs l >= pebble count (use the oracle for l < k)");
  if (k > 22) throw Error(ErrorKind::TooLarge, "connectivity_solve supports up to 22 pebbles");
  double mem = 2.0 * double(std::size_t(1) << k) * n;
  CostMatrix costs(inst);
  std::int64_t max_cost = 0;
  for (int i = 0; i < k; ++i)
    for (int v = 0; v < n; ++v) {
      Cost c = costs.at(i, v);
      if (c.is_finite()) max_cost = std::max(max_cost, c.value());
    }
  std::int64_t bound = (max_cost + 1) * (k + 1);
  if (bound < (std::numeric_limits<std::int16_t>::max() / 2) && mem * 2 < 2e9)
    return detail::connectivity_run<std::int16_t>(inst, costs);
  if (bound < (std::numeric_limits<std::int32_t>::max() / 2) && mem * 4 < 2e9)
    return detail::connectivity_run<std::int32_t>(inst, costs);
  if (mem * 8 < 2e9) return detail::connectivity_run<std::int64_t>(inst, costs);
  throw Error(ErrorKind::TooLarge, "connectivity tables would exceed the memory limit");
}

}  // namespace movekit
