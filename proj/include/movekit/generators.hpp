#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "movekit/error.hpp"
#include "movekit/graph.hpp"
#include "movekit/model.hpp"
#include "movekit/patterns.hpp"
#include "movekit/rng.hpp"

namespace movekit {

// Binary constraint satisfaction instance over domain {0..domain_size-1}.
struct CSPInstance {
  int variable_count = 0;
  int domain_size = 0;
  struct Constraint {
    int a, b;                                   // variable pair, a < b
    std::vector<std::pair<int, int>> allowed;   // value pairs (val_a, val_b)
  };
  std::vector<Constraint> constraints;

  Graph primal_graph() const {
    Graph g(variable_count);
    for (const auto& c : constraints) g.add_edge(c.a, c.b);
    return g;
  }

  void validate() const {
    if (variable_count < 1 || domain_size < 1)
      throw Error(ErrorKind::Validation, "csp needs variables and a non-empty domain");
    Graph g(variable_count);
    for (const auto& c : constraints) {
      if (c.a < 0 || c.b < 0 || c.a >= variable_count || c.b >= variable_count || c.a >= c.b)
        throw Error(ErrorKind::Validation, "constraint scope must be an ordered variable pair");
      g.add_edge(c.a, c.b);  // rejects duplicate scopes
      for (auto [x, y] : c.allowed)
        if (x < 0 || y < 0 || x >= domain_size || y >= domain_size)
          throw Error(ErrorKind::Validation, "constraint value outside the domain");
    }
  }
};

// true iff some assignment satisfies every constraint
inline bool csp_brute(const CSPInstance& csp) {
  csp.validate();
  double space = 1;
  for (int i = 0; i < csp.variable_count; ++i) space *= csp.domain_size;
  if (space > 1e7) throw Error(ErrorKind::TooLarge, "csp assignment space exceeds the limit");
  std::vector<int> assign(csp.variable_count, 0);
  for (;;) {
    bool ok = true;
    for (const auto& c : csp.constraints) {
      bool hit = false;
      for (auto [x, y] : c.allowed)
        if (assign[c.a] == x && assign[c.b] == y) {
          hit = true;
          break;
        }
      if (!hit) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    int i = csp.variable_count - 1;
    while (i >= 0 && assign[i] == csp.domain_size - 1) assign[i--] = 0;
    if (i < 0) return false;
    ++assign[i];
  }
}

// The hardness construction: one-step movement instance whose feasibility
// matches the CSP. patternF must carry the CSP's primal graph with one main
// pebble per vertex and nothing else.
inline Instance csp_to_movement(const CSPInstance& csp, const PatternGraph& patternF,
                                const ColorTable& pattern_colors) {
  csp.validate();
  auto mains = pattern_colors.of_kind(ColorKind::Main);
  if (mains.size() != 1 || pattern_colors.size() != 1)
    throw Error(ErrorKind::Validation, "csp pattern uses a single main color");
  int l = csp.variable_count;
  if (patternF.vertex_count() != l)
    throw Error(ErrorKind::PrimalMismatch, "pattern vertex count differs from the csp");
  Graph primal = csp.primal_graph();
  for (int v = 0; v < l; ++v)
    if (patternF.mc.count(mains[0], v) != 1)
      throw Error(ErrorKind::PrimalMismatch, "pattern needs one main pebble per vertex");
  for (auto [a, b] : primal.edges())
    if (!patternF.mc.graph.has_edge(a, b))
      throw Error(ErrorKind::PrimalMismatch, "pattern graph differs from the csp primal graph");
  if (patternF.mc.graph.edge_count() != primal.edge_count())
    throw Error(ErrorKind::PrimalMismatch, "pattern graph differs from the csp primal graph");

  int m = csp.domain_size;
  int k = l;  // one pebble per pattern vertex
  Graph g(m * l + k);
  auto value_vertex = [&](int var, int val) { return var * m + val; };
  auto pebble_vertex = [&](int i) { return m * l + i; };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < m; ++j) g.add_edge(pebble_vertex(i), value_vertex(i, j));
  for (const auto& c : csp.constraints)
    for (auto [x, y] : c.allowed) g.add_edge(value_vertex(c.a, x), value_vertex(c.b, y));

  Instance inst;
  inst.colors = pattern_colors;
  inst.problem.name = "fixed-pattern";
  inst.problem.int_params["vertices"] = l;
  for (auto [a, b] : patternF.mc.graph.edges()) inst.problem.pattern_edges.emplace_back(a, b);
  inst.max_solution_size = l;
  for (int i = 0; i < k; ++i)
    inst.pebbles.push_back(Pebble{i, mains[0], pebble_vertex(i), StepsCost{1}});
  inst.graph = MulticoloredGraph(std::move(g), inst.colors.size());
  inst.rebuild_counts();
  return inst;
}

// Dominating-set hardness instance with k facility pebbles: a hub s over
// b-vertices, client rows c_i, and a (possibly subdivided) b_i - c_j link
// per ordered adjacent source pair.
inline Instance domset_to_facility(const Graph& source, int k, int d) {
  if (k < 1) throw Error(ErrorKind::Validation, "k must be positive");
  if (d < 0) throw Error(ErrorKind::Validation, "d must be nonnegative");
  int n = source.vertex_count();
  int ordered_pairs = 2 * source.edge_count();
  int total = 1 + 2 * n + d * ordered_pairs;
  Graph g(total);
  auto b_of = [&](int i) { return 1 + i; };
  auto c_of = [&](int i) { return 1 + n + i; };
  for (int i = 0; i < n; ++i) g.add_edge(0, b_of(i));
  int next_internal = 1 + 2 * n;
  auto link = [&](int bi, int cj) {
    if (d == 0) {
      g.add_edge(b_of(bi), c_of(cj));
      return;
    }
    int prev = b_of(bi);
    for (int step = 0; step < d; ++step) {
      g.add_edge(prev, next_internal);
      prev = next_internal++;
    }
    g.add_edge(prev, c_of(cj));
  };
  for (auto [a, b] : source.edges()) {
    link(a, b);
    link(b, a);
  }

  Instance inst;
  inst.colors.colors = {{"client", ColorKind::Main}, {"facility", ColorKind::Facility}};
  inst.problem.name = "facility-location-distance";
  inst.problem.int_params["d"] = d;
  inst.max_solution_size = n * (d + 1) + d;
  int id = 0;
  for (int i = 0; i < k; ++i) inst.pebbles.push_back(Pebble{id++, 1, 0, StepsCost{1}});
  for (int i = 0; i < n; ++i) inst.pebbles.push_back(Pebble{id++, 0, c_of(i), StepsCost{1}});
  inst.graph = MulticoloredGraph(std::move(g), inst.colors.size());
  inst.rebuild_counts();
  return inst;
}

// Dominating-set hardness instance for STEINER CONNECTIVITY: k blue
// connectors on a hub s joined to a clique over a_1..a_n, stationary red
// terminals on b_1..b_n wired by source adjacency.
inline Instance domset_to_steiner(const Graph& source, int k) {
  if (k < 1) throw Error(ErrorKind::Validation, "k must be positive");
  int n = source.vertex_count();
  int total = 1 + 2 * n;
  Graph g(total);
  auto a_of = [&](int i) { return 1 + i; };
  auto b_of = [&](int i) { return 1 + n + i; };
  for (int i = 0; i < n; ++i) g.add_edge(0, a_of(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(a_of(i), a_of(j));
  // closed neighborhoods: a_i also serves its own terminal b_i, matching
  // the standard dominating-set semantics the reduction decides
  for (int i = 0; i < n; ++i) g.add_edge(a_of(i), b_of(i));
  for (auto [x, y] : source.edges()) {
    g.add_edge(a_of(x), b_of(y));
    g.add_edge(a_of(y), b_of(x));
  }

  Instance inst;
  inst.colors.colors = {{"red", ColorKind::Main}, {"blue", ColorKind::Facility}};
  inst.problem.name = "steiner";
  inst.max_solution_size = n + k;
  int id = 0;
  for (int i = 0; i < k; ++i) inst.pebbles.push_back(Pebble{id++, 1, 0, StepsCost{1}});
  for (int i = 0; i < n; ++i) {
    TableCost t;
    t.values.assign(total, Cost::inf());
    t.values[b_of(i)] = Cost::zero();
    inst.pebbles.push_back(Pebble{id++, 0, b_of(i), std::move(t)});
  }
  inst.graph = MulticoloredGraph(std::move(g), inst.colors.size());
  inst.rebuild_counts();
  return inst;
}

// Dominating sets of the source graph, brute force. Closed neighborhoods
// are the standard notion; the open variant requires a neighbor in the set
// for every vertex, set members included.
inline bool has_dominating_set(const Graph& g, int k, bool closed = true) {
  int n = g.vertex_count();
  if (n > 25) throw Error(ErrorKind::TooLarge, "dominating set search limited to 25 vertices");
  for (std::uint32_t sub = 0; sub < (std::uint32_t(1) << n); ++sub) {
    if (__builtin_popcount(sub) > k) continue;
    std::uint32_t covered = closed ? sub : 0;
    for (int v = 0; v < n; ++v)
      if (sub & (std::uint32_t(1) << v))
        for (int u : g.neighbors(v)) covered |= std::uint32_t(1) << u;
    if (covered == (std::uint32_t(1) << n) - 1) return true;
  }
  return n == 0;
}

// One-step feasibility of a distance-d facility instance: may every client
// end within distance d of some facility when each pebble moves at most one
// step? Facilities and clients move independently once facility targets are
// fixed, so the check is exhaustive over facility placements only.
inline bool facility_distance_one_step_feasible(const Instance& inst, int d) {
  auto mains = inst.colors.of_kind(ColorKind::Main);
  auto fac = inst.colors.of_kind(ColorKind::Facility);
  if (mains.size() != 1 || fac.size() != 1)
    throw Error(ErrorKind::Validation, "expected one client and one facility color");
  std::vector<int> clients, facilities;
  for (const auto& p : inst.pebbles)
    (p.color == mains[0] ? clients : facilities).push_back(p.id);
  int n = inst.vertex_count();
  std::vector<std::vector<int>> dist(n);
  for (int v = 0; v < n; ++v) dist[v] = inst.graph.graph.bfs_distances(v);

  auto one_step_targets = [&](int v) {
    std::vector<int> t{v};
    for (int u : inst.graph.graph.neighbors(v)) t.push_back(u);
    return t;
  };

  std::vector<std::vector<int>> fac_targets;
  for (int id : facilities) fac_targets.push_back(one_step_targets(inst.pebbles[id].initial_vertex));
  std::vector<size_t> pick(facilities.size(), 0);
  for (;;) {
    std::vector<int> placed;
    for (size_t i = 0; i < facilities.size(); ++i) placed.push_back(fac_targets[i][pick[i]]);
    bool all_ok = true;
    for (int id : clients) {
      bool ok = false;
      for (int t : one_step_targets(inst.pebbles[id].initial_vertex)) {
        for (int f : placed)
          if (dist[t][f] >= 0 && dist[t][f] <= d) {
            ok = true;
            break;
          }
        if (ok) break;
      }
      if (!ok) {
        all_ok = false;
        break;
      }
    }
    if (all_ok) return true;
    int i = static_cast<int>(facilities.size()) - 1;
    while (i >= 0 && pick[i] == fac_targets[i].size() - 1) pick[i--] = 0;
    if (i < 0) return false;
    ++pick[i];
  }
}

// simple edge-list text format: first line "n m", then one "u v" per line
inline Graph read_edge_list(std::istream& in) {
  int n, m;
  if (!(in >> n >> m)) throw Error(ErrorKind::Parse, "edge list must start with 'n m'");
  if (n < 0 || m < 0) throw Error(ErrorKind::Parse, "edge list sizes must be nonnegative");
  Graph g(n);
  for (int i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) throw Error(ErrorKind::Parse, "edge list ended early");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorKind::Parse, "edge endpoint out of range");
    try {
      g.add_edge(u, v);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::Parse, std::string("bad edge: ") + e.what());
    }
  }
  return g;
}

inline Graph read_edge_list_text(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.vertex_count() << " " << g.edge_count() << "\n";
  for (auto [a, b] : g.edges()) out << a << " " << b << "\n";
}

// Random binary CSP over a primal graph: every value pair joins each
// relation independently with the given per-mill probability.
inline CSPInstance random_csp(const Graph& primal, int domain, std::uint64_t seed,
                              int density_permille = 500) {
  CSPInstance csp;
  csp.variable_count = primal.vertex_count();
  csp.domain_size = domain;
  SplitMix64 rng = SplitMix64::stream(seed, 0);
  for (auto [a, b] : primal.edges()) {
    CSPInstance::Constraint c;
    c.a = std::min(a, b);
    c.b = std::max(a, b);
    for (int x = 0; x < domain; ++x)
      for (int y = 0; y < domain; ++y)
        if (rng.next_below(1000) < static_cast<std::uint64_t>(density_permille))
          c.allowed.emplace_back(x, y);
    csp.constraints.push_back(std::move(c));
  }
  return csp;
}

// pattern carrying one main pebble per primal vertex (Theorem-style input)
inline PatternGraph csp_pattern(const Graph& primal, const ColorTable& colors) {
  auto mains = colors.of_kind(ColorKind::Main);
  PatternGraph p{MulticoloredGraph(primal, colors.size())};
  for (int v = 0; v < primal.vertex_count(); ++v) p.mc.add_pebbles(mains[0], v);
  return p;
}

}  // namespace movekit
