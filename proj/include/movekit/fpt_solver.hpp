#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "movekit/embedding.hpp"
#include "movekit/error.hpp"
#include "movekit/model.hpp"
#include "movekit/patterns.hpp"
#include "movekit/rng.hpp"
#include "movekit/threads.hpp"
#include "movekit/verify.hpp"

namespace movekit {

// Random labels on pebbles and vertices. Labels are drawn from the universe
// the current pattern can use: {1..l0} for main/facility pebbles and
// {0..l0} for vertices. Obnoxious pebbles carry no label.
struct Labeling {
  std::vector<int> pebble_labels;
  std::vector<int> vertex_labels;
};

// e_{c,i,j}: how many color-c obnoxious pebbles move from phi(v_i) to
// phi(v_j); e_{c,i,i} counts the ones that stay.
struct Scheme {
  int l0 = 0;
  std::vector<int> obnoxious_colors;
  std::vector<int> e;  // [color_index][i][j], 0-based

  int at(int ci, int i, int j) const { return e[(ci * l0 + i) * l0 + j]; }

  int moved_from(int ci, int i) const {
    int s = 0;
    for (int j = 0; j < l0; ++j) s += at(ci, i, j);
    return s;
  }
};

// All correct schemes for F0: every arrival column satisfies
// sum_i e_{c,i,j} <= n_{F0}(c, v_j) and every entry is at most D.
inline std::vector<Scheme> enumerate_schemes(const PatternGraph& F0, const ColorTable& colors,
                                             int D) {
  int l0 = F0.vertex_count();
  std::vector<int> obnoxious = colors.of_kind(ColorKind::Obnoxious);
  Scheme base;
  base.l0 = l0;
  base.obnoxious_colors = obnoxious;
  base.e.assign(obnoxious.size() * l0 * l0, 0);
  std::vector<Scheme> out{base};
  if (obnoxious.empty()) return out;

  for (size_t ci = 0; ci < obnoxious.size(); ++ci) {
    for (int j = 0; j < l0; ++j) {
      int cap = std::min(D, F0.mc.count(obnoxious[ci], j));
      std::vector<std::vector<int>> columns;
      std::vector<int> col(l0, 0);
      auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == l0) {
          columns.push_back(col);
          return;
        }
        for (int take = 0; take <= std::min(left, D); ++take) {
          col[i] = take;
          self(self, i + 1, left - take);
        }
        col[i] = 0;
      };
      rec(rec, 0, cap);
      std::vector<Scheme> next;
      next.reserve(out.size() * columns.size());
      for (const Scheme& s : out)
        for (const auto& column : columns) {
          Scheme t = s;
          for (int i = 0; i < l0; ++i) t.e[(ci * l0 + i) * l0 + j] = column[i];
          next.push_back(std::move(t));
        }
      out = std::move(next);
      if (out.size() > 500000)
        throw Error(ErrorKind::TooLarge, "scheme space too large for this pattern");
    }
  }
  return out;
}

namespace detail {

inline void validate_equal_obnoxious_costs(const Instance& inst) {
  std::vector<const Pebble*> first(std::size_t(inst.colors.size()) * inst.vertex_count(),
                                   nullptr);
  for (const auto& p : inst.pebbles) {
    if (inst.colors.kind(p.color) != ColorKind::Obnoxious) continue;
    auto& slot = first[std::size_t(p.color) * inst.vertex_count() + p.initial_vertex];
    if (!slot) {
      slot = &p;
    } else if (!cost_spec_equal(slot->cost, p.cost)) {
      throw Error(ErrorKind::MovementCostAsymmetry,
                  "obnoxious pebbles of one color sharing a vertex need identical cost functions");
    }
  }
}

struct FptContext {
  const Instance& inst;
  const CostMatrix& costs;
  std::vector<int> mains;
  std::vector<int> facilities;
  std::vector<int> obnoxious_colors;       // colors with pebbles present
  std::vector<int> pinned_vertex;          // per pebble: sole finite vertex or -1
  std::vector<char> color_fully_pinned;    // per color (mains only)
  std::vector<int> main_totals;
  std::vector<int> facility_totals;
  std::vector<std::vector<int>> obnoxious_rep;    // [color][vertex] -> pebble id or -1
  std::vector<std::vector<int>> obnoxious_here;   // [color][vertex] -> sorted pebble ids
  bool any_main_unreachable = false;

  explicit FptContext(const Instance& instance, const CostMatrix& cost_matrix)
      : inst(instance), costs(cost_matrix) {
    int n = inst.vertex_count();
    main_totals.assign(inst.colors.size(), 0);
    facility_totals.assign(inst.colors.size(), 0);
    obnoxious_rep.assign(inst.colors.size(), std::vector<int>(n, -1));
    obnoxious_here.assign(inst.colors.size(), {});
    std::vector<std::vector<std::vector<int>>> here(inst.colors.size(),
                                                    std::vector<std::vector<int>>(n));
    pinned_vertex.assign(inst.pebbles.size(), -1);
    for (const auto& p : inst.pebbles) {
      auto kind = inst.colors.kind(p.color);
      if (kind == ColorKind::Main) {
        mains.push_back(p.id);
        main_totals[p.color]++;
      } else if (kind == ColorKind::Facility) {
        facilities.push_back(p.id);
        facility_totals[p.color]++;
      } else {
        obnoxious_rep[p.color][p.initial_vertex] = p.id;
        here[p.color][p.initial_vertex].push_back(p.id);
      }
      int finite = 0, where = -1;
      for (int v = 0; v < n; ++v)
        if (costs.at(p.id, v).is_finite()) {
          if (++finite > 1) break;
          where = v;
        }
      if (finite == 1) pinned_vertex[p.id] = where;
      if (finite == 0 && kind == ColorKind::Main) any_main_unreachable = true;
    }
    for (int c = 0; c < inst.colors.size(); ++c) {
      if (inst.colors.kind(c) == ColorKind::Obnoxious && inst.graph.total_of_color(c) > 0)
        obnoxious_colors.push_back(c);
      for (int v = 0; v < n; ++v) std::sort(here[c][v].begin(), here[c][v].end());
    }
    obnoxious_pebbles_at = std::move(here);
    color_fully_pinned.assign(inst.colors.size(), 1);
    for (int id : mains)
      if (pinned_vertex[id] < 0) color_fully_pinned[inst.pebbles[id].color] = 0;
  }

  std::vector<std::vector<std::vector<int>>> obnoxious_pebbles_at;  // [color][vertex]
};

// anchors: pattern vertex -> forced host vertex (or -1). One anchor per way
// of matching pinned-main positions onto pattern vertices that demand them.
inline std::vector<std::vector<int>> enumerate_anchors(const FptContext& ctx,
                                                       const PatternGraph& F0) {
  const Instance& inst = ctx.inst;
  int l0 = F0.vertex_count();
  std::vector<int> pinned_colors;
  for (int c = 0; c < inst.colors.size(); ++c)
    if (inst.colors.kind(c) == ColorKind::Main && ctx.main_totals[c] > 0 &&
        ctx.color_fully_pinned[c])
      pinned_colors.push_back(c);
  if (pinned_colors.empty()) return {std::vector<int>(l0, -1)};

  std::vector<int> positions;
  std::vector<std::vector<int>> pos_counts;
  {
    std::vector<std::vector<int>> at(inst.vertex_count(),
                                     std::vector<int>(pinned_colors.size(), 0));
    for (int id : ctx.mains) {
      const Pebble& p = inst.pebbles[id];
      auto it = std::find(pinned_colors.begin(), pinned_colors.end(), p.color);
      if (it == pinned_colors.end()) continue;
      at[ctx.pinned_vertex[id]][it - pinned_colors.begin()]++;
    }
    for (int v = 0; v < inst.vertex_count(); ++v)
      if (std::any_of(at[v].begin(), at[v].end(), [](int x) { return x > 0; })) {
        positions.push_back(v);
        pos_counts.push_back(at[v]);
      }
  }
  std::vector<int> demand_vertices;
  std::vector<std::vector<int>> demand_counts;
  for (int i = 0; i < l0; ++i) {
    std::vector<int> d(pinned_colors.size(), 0);
    bool any = false;
    for (size_t ci = 0; ci < pinned_colors.size(); ++ci) {
      d[ci] = F0.mc.count(pinned_colors[ci], i);
      if (d[ci] > 0) any = true;
    }
    if (any) {
      demand_vertices.push_back(i);
      demand_counts.push_back(d);
    }
  }
  std::vector<std::vector<int>> out;
  if (demand_vertices.size() != positions.size()) return out;
  std::vector<char> used(positions.size(), 0);
  std::vector<int> cur(l0, -1);
  auto rec = [&](auto&& self, size_t di) -> void {
    if (di == demand_vertices.size()) {
      out.push_back(cur);
      return;
    }
    for (size_t pi = 0; pi < positions.size(); ++pi) {
      if (used[pi] || demand_counts[di] != pos_counts[pi]) continue;
      used[pi] = 1;
      cur[demand_vertices[di]] = positions[pi];
      self(self, di + 1);
      used[pi] = 0;
      cur[demand_vertices[di]] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

struct TrialScratch {
  Labeling labeling;
  std::vector<std::vector<int>> facility_pool;   // [color*l0 + label-1]
  std::vector<std::vector<int>> label_vertices;  // [label 0..l0]
  std::vector<std::vector<int>> mains_by_label;  // [label-1] -> color counts

  void reset(const Instance& inst, int l0) {
    labeling.pebble_labels.assign(inst.pebbles.size(), 0);
    labeling.vertex_labels.assign(inst.vertex_count(), 0);
    facility_pool.assign(std::size_t(inst.colors.size()) * l0, {});
    label_vertices.assign(l0 + 1, {});
    mains_by_label.assign(l0, std::vector<int>(inst.colors.size(), 0));
  }

  void index(const FptContext& ctx, int l0) {
    const Instance& inst = ctx.inst;
    for (auto& v : facility_pool) v.clear();
    for (auto& v : label_vertices) v.clear();
    for (auto& v : mains_by_label) std::fill(v.begin(), v.end(), 0);
    for (int v = 0; v < inst.vertex_count(); ++v) {
      int lab = labeling.vertex_labels[v];
      if (lab >= 0 && lab <= l0) label_vertices[lab].push_back(v);
    }
    for (int id : ctx.facilities) {
      int lab = labeling.pebble_labels[id];
      if (lab >= 1 && lab <= l0)
        facility_pool[std::size_t(inst.pebbles[id].color) * l0 + (lab - 1)].push_back(id);
    }
    for (int id : ctx.mains) {
      int lab = labeling.pebble_labels[id];
      if (lab >= 1 && lab <= l0) mains_by_label[lab - 1][inst.pebbles[id].color]++;
    }
  }
};

inline Cost move_to_label_cost(const FptContext& ctx, const TrialScratch& scr, int color, int u,
                               int label) {
  int rep = ctx.obnoxious_rep[color][u];
  if (rep < 0) return Cost::inf();
  Cost best = Cost::inf();
  for (int w : scr.label_vertices[label]) {
    Cost c = ctx.costs.at(rep, w);
    if (c < best) best = c;
  }
  return best;
}

// Fills table[i][u] = c1 + c2 + c3 for label-i hosts; everything else stays
// infinite. Returns false when some pattern vertex has no finite column.
inline bool build_table_into(const FptContext& ctx, const PatternGraph& F0, const Scheme& scheme,
                             const TrialScratch& scr, EmbedCostTable& table) {
  const Instance& inst = ctx.inst;
  int l0 = F0.vertex_count();
  bool all_rows = true;
  for (int i = 0; i < l0; ++i) {
    auto& row = table[i];
    std::fill(row.begin(), row.end(), Cost::inf());
    bool match = true;
    for (int c = 0; c < inst.colors.size() && match; ++c)
      if (inst.colors.kind(c) == ColorKind::Main &&
          scr.mains_by_label[i][c] != F0.mc.count(c, i))
        match = false;
    bool any = false;
    if (match) {
      for (int u : scr.label_vertices[i + 1]) {
        Cost total = Cost::zero();
        for (int id : ctx.mains)
          if (scr.labeling.pebble_labels[id] == i + 1) total += ctx.costs.at(id, u);
        if (total.is_inf()) continue;
        // facility demands: the cheapest n_F0 pool members per color
        for (int c = 0; c < inst.colors.size() && total.is_finite(); ++c) {
          if (inst.colors.kind(c) != ColorKind::Facility) continue;
          int need = F0.mc.count(c, i);
          if (need == 0) continue;
          const auto& pool = scr.facility_pool[std::size_t(c) * l0 + i];
          std::array<std::int64_t, 16> cheap;
          int kept = 0;
          for (int id : pool) {
            Cost pc = ctx.costs.at(id, u);
            if (pc.is_inf()) continue;
            std::int64_t v = pc.value();
            if (kept < need) {
              cheap[kept++] = v;
              std::sort(cheap.begin(), cheap.begin() + kept);
            } else if (v < cheap[need - 1]) {
              cheap[need - 1] = v;
              std::sort(cheap.begin(), cheap.begin() + need);
            }
          }
          if (kept < need) {
            total = Cost::inf();
            break;
          }
          for (int x = 0; x < need; ++x) total += Cost(cheap[x]);
        }
        if (total.is_inf()) continue;
        // obnoxious relocation per the scheme
        for (size_t ci = 0; ci < scheme.obnoxious_colors.size() && total.is_finite(); ++ci) {
          int c = scheme.obnoxious_colors[ci];
          int have = inst.graph.count(c, u);
          int moved = scheme.moved_from(static_cast<int>(ci), i);
          if (moved > have) {
            total = Cost::inf();
            break;
          }
          if (have == 0) continue;
          int rep = ctx.obnoxious_rep[c][u];
          int stay = scheme.at(static_cast<int>(ci), i, i);
          if (stay > 0) total += scale(stay, ctx.costs.at(rep, u));
          for (int j = 0; j < l0; ++j) {
            if (j == i) continue;
            int cnt = scheme.at(static_cast<int>(ci), i, j);
            if (cnt > 0) total += scale(cnt, move_to_label_cost(ctx, scr, c, u, j + 1));
          }
          total += scale(have - moved, move_to_label_cost(ctx, scr, c, u, 0));
        }
        if (total.is_finite()) {
          row[u] = total;
          any = true;
        }
      }
    }
    if (!any) all_rows = false;
  }
  return all_rows;
}

enum class PatternShape { Edgeless, Forest, General };

inline PatternShape classify_pattern(const Graph& g) {
  if (g.edge_count() == 0) return PatternShape::Edgeless;
  std::vector<int> all(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) all[v] = v;
  auto comps = g.induced_components(all);
  int tree_edges = 0;
  for (const auto& c : comps) tree_edges += static_cast<int>(c.size()) - 1;
  return tree_edges == g.edge_count() ? PatternShape::Forest : PatternShape::General;
}

struct Candidate {
  Cost table_cost = Cost::inf();
  std::vector<int> embedding;
};

// Minimum-cost embedding for one cost table. Candidates per pattern vertex
// are label-restricted, so finite embeddings are injective; edgeless and
// forest patterns avoid the generic decomposition DP.
struct EmbedSolver {
  PatternShape shape;
  const Graph& pattern;
  const NiceTreeDecomposition* nice;
  std::vector<std::vector<int>> comp_order;
  std::vector<int> parent;

  EmbedSolver(const Graph& f, const NiceTreeDecomposition* nice_td)
      : shape(classify_pattern(f)), pattern(f), nice(nice_td) {
    if (shape == PatternShape::Forest) {
      std::vector<int> all(f.vertex_count());
      for (int v = 0; v < f.vertex_count(); ++v) all[v] = v;
      parent.assign(f.vertex_count(), -1);
      for (auto& comp : f.induced_components(all)) {
        std::vector<int> order{comp[0]};
        std::vector<char> seen(f.vertex_count(), 0);
        seen[comp[0]] = 1;
        for (size_t qi = 0; qi < order.size(); ++qi)
          for (int u : f.neighbors(order[qi]))
            if (!seen[u]) {
              seen[u] = 1;
              parent[u] = order[qi];
              order.push_back(u);
            }
        comp_order.push_back(std::move(order));
      }
    }
  }

  bool solve(const Graph& host, const std::vector<int>& vertex_labels,
             const EmbedCostTable& table, Candidate& out) const {
    int l0 = pattern.vertex_count();
    int n = host.vertex_count();
    if (shape == PatternShape::Edgeless) {
      out.embedding.assign(l0, -1);
      Cost total = Cost::zero();
      for (int i = 0; i < l0; ++i) {
        Cost best = Cost::inf();
        int best_u = -1;
        for (int u = 0; u < n; ++u)
          if (table[i][u] < best) {
            best = table[i][u];
            best_u = u;
          }
        if (best_u < 0) return false;
        out.embedding[i] = best_u;
        total += best;
      }
      out.table_cost = total;
      return true;
    }
    if (shape == PatternShape::Forest) return solve_forest(host, table, out);
    EmbeddingResult r = colorful_embedding_dp(pattern, *nice, host, vertex_labels, table);
    if (!r.feasible) return false;
    out.table_cost = r.cost;
    out.embedding = r.embedding;
    return true;
  }

 private:
  bool solve_forest(const Graph& host, const EmbedCostTable& table, Candidate& out) const {
    int l0 = pattern.vertex_count();
    int n = host.vertex_count();
    out.embedding.assign(l0, -1);
    Cost total = Cost::zero();
    std::vector<std::vector<Cost>> dp(l0);
    for (const auto& order : comp_order) {
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        dp[v].assign(n, Cost::inf());
        for (int u = 0; u < n; ++u) {
          Cost c = table[v][u];
          if (c.is_inf()) continue;
          for (int w : pattern.neighbors(v)) {
            if (parent[w] != v) continue;
            Cost best = Cost::inf();
            for (int x : host.neighbors(u))
              if (dp[w][x] < best) best = dp[w][x];
            c += best;
            if (c.is_inf()) break;
          }
          if (c.is_finite()) dp[v][u] = c;
        }
      }
      int root = order[0];
      Cost best = Cost::inf();
      int best_u = -1;
      for (int u = 0; u < n; ++u)
        if (dp[root][u] < best) {
          best = dp[root][u];
          best_u = u;
        }
      if (best_u < 0) return false;
      total += best;
      out.embedding[root] = best_u;
      for (size_t qi = 0; qi < order.size(); ++qi) {
        int v = order[qi];
        int hu = out.embedding[v];
        for (int w : pattern.neighbors(v)) {
          if (parent[w] != v) continue;
          Cost bc = Cost::inf();
          int bx = -1;
          for (int x : host.neighbors(hu))
            if (dp[w][x] < bc) {
              bc = dp[w][x];
              bx = x;
            }
          out.embedding[w] = bx;
        }
      }
    }
    out.table_cost = total;
    return true;
  }
};

}  // namespace detail

// Movement plan realizing an embedding of F0 under (scheme, labeling):
// mains follow their labels, the cheapest facility pebbles serve each
// demand, obnoxious pebbles at pattern vertices follow the scheme and park
// at the cheapest label-0 vertex, everything else stays.
inline std::pair<MovementPlan, std::vector<int>> reconstruct_plan(
    const Instance& inst, const CostMatrix& costs, const PatternGraph& F0, const Scheme& scheme,
    const Labeling& labeling, const std::vector<int>& phi) {
  MovementPlan plan = MovementPlan::identity(inst);
  int l0 = F0.vertex_count();

  for (const auto& p : inst.pebbles) {
    if (inst.colors.kind(p.color) != ColorKind::Main) continue;
    int lab = labeling.pebble_labels[p.id];
    if (lab >= 1 && lab <= l0) plan.targets[p.id] = phi[lab - 1];
  }

  for (int c = 0; c < inst.colors.size(); ++c) {
    if (inst.colors.kind(c) != ColorKind::Facility) continue;
    for (int i = 0; i < l0; ++i) {
      int need = F0.mc.count(c, i);
      if (need == 0) continue;
      std::vector<std::pair<std::int64_t, int>> ranked;
      for (const auto& p : inst.pebbles) {
        if (p.color != c || labeling.pebble_labels[p.id] != i + 1) continue;
        Cost pc = costs.at(p.id, phi[i]);
        if (pc.is_finite()) ranked.emplace_back(pc.value(), p.id);
      }
      std::sort(ranked.begin(), ranked.end());
      for (int x = 0; x < need && x < static_cast<int>(ranked.size()); ++x)
        plan.targets[ranked[x].second] = phi[i];
    }
  }

  if (!scheme.obnoxious_colors.empty()) {
    std::vector<std::vector<int>> label_vertices(l0 + 1);
    for (int v = 0; v < inst.vertex_count(); ++v) {
      int lab = labeling.vertex_labels[v];
      if (lab >= 0 && lab <= l0) label_vertices[lab].push_back(v);
    }
    for (size_t ci = 0; ci < scheme.obnoxious_colors.size(); ++ci) {
      int c = scheme.obnoxious_colors[ci];
      for (int i = 0; i < l0; ++i) {
        int u = phi[i];
        std::vector<int> here;
        for (const auto& p : inst.pebbles)
          if (p.color == c && p.initial_vertex == u) here.push_back(p.id);
        std::sort(here.begin(), here.end());
        if (here.empty()) continue;
        auto cheapest_label_vertex = [&](int lab) {
          Cost best = Cost::inf();
          int best_w = -1;
          for (int w : label_vertices[lab]) {
            Cost cw = costs.at(here[0], w);
            if (cw < best) {
              best = cw;
              best_w = w;
            }
          }
          return best_w;
        };
        size_t cursor = scheme.at(static_cast<int>(ci), i, i);  // stayers keep identity
        for (int j = 0; j < l0 && cursor < here.size(); ++j) {
          if (j == i) continue;
          int cnt = scheme.at(static_cast<int>(ci), i, j);
          if (cnt == 0) continue;
          int w = cheapest_label_vertex(j + 1);
          for (int x = 0; x < cnt && cursor < here.size(); ++x)
            if (w >= 0) plan.targets[here[cursor++]] = w;
        }
        if (cursor < here.size()) {
          int w = cheapest_label_vertex(0);
          if (w >= 0)
            while (cursor < here.size()) plan.targets[here[cursor++]] = w;
        }
      }
    }
  }

  std::vector<int> witness(phi.begin(), phi.end());
  std::sort(witness.begin(), witness.end());
  return {std::move(plan), std::move(witness)};
}

// Claim-6.4-style embedding cost table for one (pattern, scheme, labeling).
inline EmbedCostTable build_cost_table(const Instance& inst, const CostMatrix& costs,
                                       const PatternGraph& F0, const Scheme& scheme,
                                       const Labeling& labeling) {
  detail::validate_equal_obnoxious_costs(inst);
  detail::FptContext ctx(inst, costs);
  detail::TrialScratch scr;
  scr.reset(inst, F0.vertex_count());
  scr.labeling = labeling;
  scr.index(ctx, F0.vertex_count());
  EmbedCostTable table(F0.vertex_count(), std::vector<Cost>(inst.vertex_count(), Cost::inf()));
  detail::build_table_into(ctx, F0, scheme, scr, table);
  return table;
}

// The main randomized solver: every minimal pattern, every correct scheme,
// repeated random labelings shared across the scheme loop, a minimum-cost
// embedding per trial, plan reconstruction, verification. Soundness is
// unconditional; optimality holds with probability at least 1-failure_prob.
inline SolveResult solve_fpt(const Instance& inst, const PatternCatalog& catalog,
                             double failure_prob, std::uint64_t seed) {
  if (!catalog.closed_under_edge_addition)
    throw Error(ErrorKind::WrongProblem,
                "solve_fpt requires an edge-addition-closed pattern catalog");
  if (!(failure_prob > 0.0 && failure_prob < 1.0))
    throw Error(ErrorKind::Validation, "failure probability must be in (0,1)");
  detail::validate_equal_obnoxious_costs(inst);

  CostMatrix costs(inst);
  detail::FptContext ctx(inst, costs);
  SolveResult out;
  out.status = SolveStatus::Infeasible;
  if (ctx.any_main_unreachable) return out;

  Cost best_cost = Cost::inf();
  std::uint64_t stream_base = 0;

  for (size_t f0_idx = 0; f0_idx < catalog.patterns.size(); ++f0_idx) {
    const PatternGraph& F0 = catalog.patterns[f0_idx];
    int l0 = F0.vertex_count();
    if (l0 > inst.vertex_count() || l0 > inst.max_solution_size) continue;
    bool usable = true;
    for (int c = 0; c < inst.colors.size() && usable; ++c) {
      if (inst.colors.kind(c) == ColorKind::Main &&
          F0.mc.total_of_color(c) != ctx.main_totals[c])
        usable = false;
      if (inst.colors.kind(c) == ColorKind::Facility &&
          F0.mc.total_of_color(c) > ctx.facility_totals[c])
        usable = false;
    }
    if (!usable) continue;

    auto anchors = detail::enumerate_anchors(ctx, F0);
    if (anchors.empty()) continue;
    auto schemes = enumerate_schemes(F0, inst.colors, catalog.max_pebbles);

    NiceTreeDecomposition nice;
    detail::PatternShape shape = detail::classify_pattern(F0.mc.graph);
    if (shape == detail::PatternShape::General)
      nice = make_nice(exact_decomposition(F0.mc.graph), F0.mc.graph);
    detail::EmbedSolver embedder(F0.mc.graph,
                                 shape == detail::PatternShape::General ? &nice : nullptr);

    // one-labeling success probability against the optimum: free pattern
    // vertices and obnoxious parking draw from {0..l0}, unpinned mains and
    // demanded facility pebbles from {1..l0}
    int pinned_mains = 0;
    for (int id : ctx.mains)
      if (ctx.pinned_vertex[id] >= 0 && ctx.color_fully_pinned[inst.pebbles[id].color])
        ++pinned_mains;
    int anchored_vertices = 0;
    for (int x : anchors[0])
      if (x >= 0) ++anchored_vertices;
    int facility_demand = 0;
    for (int c = 0; c < inst.colors.size(); ++c)
      if (inst.colors.kind(c) == ColorKind::Facility) facility_demand += F0.mc.total_of_color(c);

    double log_phat =
        -(double(l0 - anchored_vertices) + double(l0) * ctx.obnoxious_colors.size()) *
        std::log(double(l0 + 1));
    if (l0 > 1)
      log_phat -= (double(ctx.mains.size() - pinned_mains) + facility_demand) *
                  std::log(double(l0));
    double trials_d = std::ceil(std::log(2.0 / failure_prob) * std::exp(-log_phat));
    if (!(trials_d >= 1)) trials_d = 1;
    if (trials_d > 2e9)
      throw Error(ErrorKind::TooLarge, "labeling trial count too large for this pattern");
    std::uint64_t trials = static_cast<std::uint64_t>(trials_d);

    for (const auto& anchor : anchors) {
      out.trials += trials;
      std::uint64_t base = stream_base;
      stream_base += trials;

      struct LocalBest {
        Cost cost = Cost::inf();
        Solution sol;
        std::uint64_t order = ~std::uint64_t(0);
        bool has = false;
      };
      auto run_range = [&](std::uint64_t lo, std::uint64_t hi, LocalBest& local) {
        detail::TrialScratch scr;
        scr.reset(inst, l0);
        detail::Candidate cand;
        EmbedCostTable table(l0, std::vector<Cost>(inst.vertex_count(), Cost::inf()));
        for (std::uint64_t t = lo; t < hi; ++t) {
          SplitMix64 rng = SplitMix64::stream(seed, base + t);
          auto& vlab = scr.labeling.vertex_labels;
          auto& plab = scr.labeling.pebble_labels;
          for (int v = 0; v < inst.vertex_count(); ++v)
            vlab[v] = static_cast<int>(rng.next_below(l0 + 1));
          for (int i = 0; i < l0; ++i)
            if (anchor[i] >= 0) vlab[anchor[i]] = i + 1;
          for (int id : ctx.mains) {
            const Pebble& p = inst.pebbles[id];
            if (ctx.pinned_vertex[id] >= 0 && ctx.color_fully_pinned[p.color])
              plab[id] = vlab[ctx.pinned_vertex[id]];
            else
              plab[id] = 1 + static_cast<int>(rng.next_below(l0));
          }
          for (int id : ctx.facilities)
            plab[id] = 1 + static_cast<int>(rng.next_below(l0));
          scr.index(ctx, l0);

          for (size_t s_idx = 0; s_idx < schemes.size(); ++s_idx) {
            if (!detail::build_table_into(ctx, F0, schemes[s_idx], scr, table)) {
              if (ctx.obnoxious_colors.empty()) break;  // rows cannot improve by scheme
              continue;
            }
            if (!embedder.solve(inst.graph.graph, vlab, table, cand)) continue;
            if (cand.table_cost > local.cost) continue;
            auto [plan, witness] =
                reconstruct_plan(inst, costs, F0, schemes[s_idx], scr.labeling, cand.embedding);
            auto check = verify_solution_semantic(inst, plan, witness);
            if (!check.ok() && check.error != VerifyError::CostBudgetExceeded) continue;
            Cost pc = check.ok() ? check.cost : plan_cost(inst, costs, plan);
            if (pc.is_inf()) continue;
            std::uint64_t order = (std::uint64_t(s_idx) << 44) | t;
            if (pc < local.cost || (pc == local.cost && local.has && order < local.order)) {
              local.cost = pc;
              local.sol = Solution{std::move(plan), std::move(witness), pc};
              local.order = order;
              local.has = true;
            }
          }
        }
      };

      int workers = worker_count();
      std::vector<LocalBest> results;
      if (workers <= 1 || trials < 8192) {
        results.resize(1);
        results[0].cost = best_cost;  // prune against the running optimum
        results[0].has = false;
        run_range(0, trials, results[0]);
      } else {
        results.resize(workers);
        std::vector<std::thread> pool;
        std::uint64_t per = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
          std::uint64_t lo = per * w, hi = std::min<std::uint64_t>(trials, per * (w + 1));
          if (lo >= hi) continue;
          results[w].cost = best_cost;
          pool.emplace_back(
              [&run_range, lo, hi, &results, w] { run_range(lo, hi, results[w]); });
        }
        for (auto& th : pool) th.join();
      }
      for (auto& local : results) {
        if (!local.has) continue;
        if (local.cost < best_cost) {
          best_cost = local.cost;
          out.solution = Solution{std::move(local.sol)};
          out.status = SolveStatus::Optimal;
        }
      }
    }
  }

  if (out.status == SolveStatus::Optimal && inst.budget && best_cost > *inst.budget) {
    out.status = SolveStatus::OverBudget;
    out.solution.reset();
  }
  return out;
}

}  // namespace movekit
