#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "movekit/cost.hpp"
#include "movekit/error.hpp"
#include "movekit/graph.hpp"

namespace movekit {

enum class ColorKind { Main, Facility, Obnoxious };

struct ColorTable {
  struct Entry {
    std::string name;
    ColorKind kind;
  };
  std::vector<Entry> colors;

  int size() const { return static_cast<int>(colors.size()); }
  ColorKind kind(int c) const { return colors[c].kind; }
  const std::string& name(int c) const { return colors[c].name; }

  int index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (colors[i].name == name) return i;
    throw Error(ErrorKind::Validation, "unknown color: " + name);
  }

  std::vector<int> of_kind(ColorKind k) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
      if (colors[i].kind == k) out.push_back(i);
    return out;
  }

  void validate() const {
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (colors[i].name == colors[j].name)
          throw Error(ErrorKind::Validation, "duplicate color name: " + colors[i].name);
    if (of_kind(ColorKind::Main).empty())
      throw Error(ErrorKind::Validation, "at least one main color required");
  }

  bool operator==(const ColorTable& o) const {
    if (colors.size() != o.colors.size()) return false;
    for (size_t i = 0; i < colors.size(); ++i)
      if (colors[i].name != o.colors[i].name || colors[i].kind != o.colors[i].kind) return false;
    return true;
  }
};

// Graph plus per-(color, vertex) pebble counts. Counts are indexed by the
// color ids of an associated ColorTable.
struct MulticoloredGraph {
  Graph graph;
  std::vector<std::vector<int>> counts;  // counts[color][vertex]

  MulticoloredGraph() = default;
  MulticoloredGraph(Graph g, int num_colors)
      : graph(std::move(g)), counts(num_colors, std::vector<int>(graph.vertex_count(), 0)) {}

  int vertex_count() const { return graph.vertex_count(); }
  int color_count() const { return static_cast<int>(counts.size()); }
  int count(int color, int v) const { return counts[color][v]; }
  void add_pebbles(int color, int v, int n = 1) { counts[color][v] += n; }

  int total_pebbles() const {
    int t = 0;
    for (const auto& row : counts)
      for (int c : row) t += c;
    return t;
  }

  int total_of_color(int color) const {
    int t = 0;
    for (int c : counts[color]) t += c;
    return t;
  }
};

// Movement cost specifications (Pebble::costSpec alternatives).
struct DistanceCost {};
struct StepsCost {
  int max_steps;
};
struct MovedCost {};
struct TableCost {
  std::vector<Cost> values;  // one per vertex, Cost::inf() where forbidden
};
using CostSpec = std::variant<DistanceCost, StepsCost, MovedCost, TableCost>;

inline bool cost_spec_equal(const CostSpec& a, const CostSpec& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<StepsCost>(a))
    return std::get<StepsCost>(a).max_steps == std::get<StepsCost>(b).max_steps;
  if (std::holds_alternative<TableCost>(a))
    return std::get<TableCost>(a).values == std::get<TableCost>(b).values;
  return true;
}

struct Pebble {
  int id;
  int color;  // color id in the instance's ColorTable
  int initial_vertex;
  CostSpec cost;
};

struct ProblemSpec {
  std::string name;
  std::map<std::string, long long> int_params;
  // fixed-pattern instances carry the pattern's edge list and vertex count
  std::vector<std::pair<int, int>> pattern_edges;

  long long param(const std::string& key, long long dflt) const {
    auto it = int_params.find(key);
    return it == int_params.end() ? dflt : it->second;
  }
};

struct Instance {
  MulticoloredGraph graph;
  std::vector<Pebble> pebbles;
  ColorTable colors;
  int max_solution_size = 1;  // l
  std::optional<Cost> budget;
  ProblemSpec problem;
  bool planar = false;

  int vertex_count() const { return graph.vertex_count(); }
  int pebble_count() const { return static_cast<int>(pebbles.size()); }

  int main_pebble_count() const {
    int k = 0;
    for (const auto& p : pebbles)
      if (colors.kind(p.color) == ColorKind::Main) ++k;
    return k;
  }

  // Derives graph.counts from the pebble list.
  void rebuild_counts() {
    graph.counts.assign(colors.size(), std::vector<int>(graph.vertex_count(), 0));
    for (const auto& p : pebbles) graph.add_pebbles(p.color, p.initial_vertex);
  }

  void validate() const {
    colors.validate();
    int n = graph.vertex_count();
    if (max_solution_size < 1) throw Error(ErrorKind::Validation, "l must be positive");
    std::vector<char> seen(pebbles.size(), 0);
    for (const auto& p : pebbles) {
      if (p.id < 0 || p.id >= static_cast<int>(pebbles.size()) || seen[p.id])
        throw Error(ErrorKind::Validation, "pebble ids must be dense 0-based");
      seen[p.id] = 1;
      if (p.initial_vertex < 0 || p.initial_vertex >= n)
        throw Error(ErrorKind::Validation, "pebble initial vertex out of range");
      if (p.color < 0 || p.color >= colors.size())
        throw Error(ErrorKind::Validation, "pebble color out of range");
      if (const auto* t = std::get_if<TableCost>(&p.cost)) {
        if (static_cast<int>(t->values.size()) != n)
          throw Error(ErrorKind::Validation, "cost table length must equal vertex count");
        for (Cost c : t->values)
          if (c.is_finite() && (c.value() < 0 || c.value() > Cost::kFiniteCap))
            throw Error(ErrorKind::Validation, "cost value outside [0, 2^40]");
      } else if (const auto* s = std::get_if<StepsCost>(&p.cost)) {
        if (s->max_steps < 0) throw Error(ErrorKind::Validation, "steps bound must be >= 0");
      }
    }
    if (budget && (budget->is_inf() || budget->value() < 0 || budget->value() > Cost::kFiniteCap))
      throw Error(ErrorKind::Validation, "budget outside [0, 2^40]");
    // counts must tally the pebble list
    MulticoloredGraph expect = graph;
    expect.counts.assign(colors.size(), std::vector<int>(n, 0));
    for (const auto& p : pebbles) expect.add_pebbles(p.color, p.initial_vertex);
    if (expect.counts != graph.counts)
      throw Error(ErrorKind::Validation, "pebble counts inconsistent with pebble list");
    if (main_pebble_count() == 0)
      throw Error(ErrorKind::Validation, "instance has no main pebbles");
  }
};

// pebble id -> target vertex; total by construction (dense vector).
struct MovementPlan {
  std::vector<int> targets;

  int target(int pebble_id) const { return targets[pebble_id]; }

  static MovementPlan identity(const Instance& inst) {
    MovementPlan plan;
    plan.targets.resize(inst.pebbles.size());
    for (const auto& p : inst.pebbles) plan.targets[p.id] = p.initial_vertex;
    return plan;
  }
};

struct Solution {
  MovementPlan plan;
  std::vector<int> witness;  // sorted vertex set S
  Cost cost;
};

enum class SolveStatus { Optimal, Infeasible, OverBudget };

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;  // present for Optimal
  std::uint64_t trials = 0;          // labelings drawn (randomized solvers)
};

inline Cost cost_of(const Pebble& p, const Graph& g, int vertex) {
  struct Visitor {
    const Pebble& p;
    const Graph& g;
    int vertex;
    Cost operator()(const DistanceCost&) const {
      auto d = g.bfs_distances(p.initial_vertex);
      return d[vertex] < 0 ? Cost::inf() : Cost(d[vertex]);
    }
    Cost operator()(const StepsCost& s) const {
      auto d = g.bfs_distances(p.initial_vertex);
      return (d[vertex] >= 0 && d[vertex] <= s.max_steps) ? Cost::zero() : Cost::inf();
    }
    Cost operator()(const MovedCost&) const {
      return vertex == p.initial_vertex ? Cost::zero() : Cost(1);
    }
    Cost operator()(const TableCost& t) const { return t.values[vertex]; }
  };
  return std::visit(Visitor{p, g, vertex}, p.cost);
}

// Per-pebble cost rows, precomputed once per instance for the solvers.
class CostMatrix {
 public:
  explicit CostMatrix(const Instance& inst) {
    rows_.reserve(inst.pebbles.size());
    for (const auto& p : inst.pebbles) {
      std::vector<Cost> row(inst.vertex_count());
      if (const auto* t = std::get_if<TableCost>(&p.cost)) {
        row = t->values;
      } else if (std::holds_alternative<MovedCost>(p.cost)) {
        for (int v = 0; v < inst.vertex_count(); ++v)
          row[v] = v == p.initial_vertex ? Cost::zero() : Cost(1);
      } else {
        auto d = inst.graph.graph.bfs_distances(p.initial_vertex);
        if (const auto* s = std::get_if<StepsCost>(&p.cost)) {
          for (int v = 0; v < inst.vertex_count(); ++v)
            row[v] = (d[v] >= 0 && d[v] <= s->max_steps) ? Cost::zero() : Cost::inf();
        } else {
          for (int v = 0; v < inst.vertex_count(); ++v)
            row[v] = d[v] < 0 ? Cost::inf() : Cost(d[v]);
        }
      }
      rows_.push_back(std::move(row));
    }
  }

  Cost at(int pebble_id, int vertex) const { return rows_[pebble_id][vertex]; }
  const std::vector<Cost>& row(int pebble_id) const { return rows_[pebble_id]; }

 private:
  std::vector<std::vector<Cost>> rows_;
};

inline Cost plan_cost(const Instance& inst, const MovementPlan& plan) {
  Cost total = Cost::zero();
  for (const auto& p : inst.pebbles) total += cost_of(p, inst.graph.graph, plan.target(p.id));
  return total;
}

inline Cost plan_cost(const Instance& inst, const CostMatrix& costs, const MovementPlan& plan) {
  Cost total = Cost::zero();
  for (const auto& p : inst.pebbles) total += costs.at(p.id, plan.target(p.id));
  return total;
}

// Pebble configuration after applying a plan.
inline MulticoloredGraph apply_plan(const Instance& inst, const MovementPlan& plan) {
  MulticoloredGraph out(inst.graph.graph, inst.colors.size());
  for (const auto& p : inst.pebbles) out.add_pebbles(p.color, plan.target(p.id));
  return out;
}

}  // namespace movekit
