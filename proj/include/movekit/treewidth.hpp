#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "movekit/error.hpp"
#include "movekit/graph.hpp"

namespace movekit {

struct TreeDecomposition {
  std::vector<std::vector<int>> bags;          // sorted vertex lists
  std::vector<std::pair<int, int>> tree_edges;  // undirected tree over bag indices

  int node_count() const { return static_cast<int>(bags.size()); }

  int width() const {
    int w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
    return w;
  }

  std::vector<std::vector<int>> node_adjacency() const {
    std::vector<std::vector<int>> adj(bags.size());
    for (auto [a, b] : tree_edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }
};

// Returns the name of the first violated invariant, empty when valid.
inline std::string check_tree_decomposition(const TreeDecomposition& td, const Graph& g) {
  int n = g.vertex_count();
  if (td.bags.empty()) return "decomposition has no nodes";
  if (static_cast<int>(td.tree_edges.size()) != td.node_count() - 1)
    return "tree edge count must be node count - 1";
  for (const auto& b : td.bags)
    for (int v : b)
      if (v < 0 || v >= n) return "bag contains out-of-range vertex";
  // connectivity of the tree itself
  {
    auto adj = td.node_adjacency();
    std::vector<char> seen(td.node_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int cnt = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      ++cnt;
      for (int y : adj[x])
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    if (cnt != td.node_count()) return "tree is not connected";
  }
  std::vector<char> covered(n, 0);
  for (const auto& b : td.bags)
    for (int v : b) covered[v] = 1;
  for (int v = 0; v < n; ++v)
    if (!covered[v]) return "vertex missing from every bag";
  for (auto [u, v] : g.edges()) {
    bool ok = false;
    for (const auto& b : td.bags)
      if (std::binary_search(b.begin(), b.end(), u) && std::binary_search(b.begin(), b.end(), v)) {
        ok = true;
        break;
      }
    if (!ok) return "edge not contained in any bag";
  }
  // occurrence set of each vertex induces a connected subtree
  auto adj = td.node_adjacency();
  for (int v = 0; v < n; ++v) {
    std::vector<int> occ;
    for (int i = 0; i < td.node_count(); ++i)
      if (std::binary_search(td.bags[i].begin(), td.bags[i].end(), v)) occ.push_back(i);
    if (occ.empty()) continue;
    std::vector<char> in(td.node_count(), 0), seen(td.node_count(), 0);
    for (int i : occ) in[i] = 1;
    std::vector<int> stack{occ[0]};
    seen[occ[0]] = 1;
    int cnt = 0;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      ++cnt;
      for (int y : adj[x])
        if (in[y] && !seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
    }
    if (cnt != static_cast<int>(occ.size())) return "vertex occurrence set is disconnected";
  }
  return {};
}

// Exact minimum-width decomposition by dynamic programming over vertex
// subsets (elimination-ordering formulation). Intended for pattern graphs.
inline TreeDecomposition exact_decomposition(const Graph& g, int max_vertices = 15) {
  int n = g.vertex_count();
  if (n < 1) throw Error(ErrorKind::Validation, "decomposition needs at least one vertex");
  if (n > max_vertices)
    throw Error(ErrorKind::TooLarge, "exact decomposition limited to " +
                                         std::to_string(max_vertices) + " vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= std::uint32_t(1) << v;
    adj[v] |= std::uint32_t(1) << u;
  }
  std::uint32_t full = n == 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << n) - 1;

  // back-degree of v when eliminated right after the set S
  auto back_degree = [&](std::uint32_t S, int v) {
    std::uint32_t reach = adj[v] & S;
    for (;;) {
      std::uint32_t next = reach;
      std::uint32_t scan = reach;
      while (scan) {
        int w = __builtin_ctz(scan);
        scan &= scan - 1;
        next |= adj[w] & S;
      }
      if (next == reach) break;
      reach = next;
    }
    std::uint32_t boundary = adj[v];
    std::uint32_t scan = reach;
    while (scan) {
      int w = __builtin_ctz(scan);
      scan &= scan - 1;
      boundary |= adj[w];
    }
    boundary &= ~S & ~(std::uint32_t(1) << v) & full;
    return __builtin_popcount(boundary);
  };

  std::vector<int> f(std::size_t(1) << n, 0);
  std::vector<std::uint8_t> choice(std::size_t(1) << n, 0);
  f[0] = -1;
  for (std::uint32_t S = 1; S <= full; ++S) {
    int best = n + 1;
    int best_v = -1;
    std::uint32_t scan = S;
    while (scan) {
      int v = __builtin_ctz(scan);
      scan &= scan - 1;
      std::uint32_t rest = S & ~(std::uint32_t(1) << v);
      int cand = std::max(f[rest], back_degree(rest, v));
      if (cand < best) {
        best = cand;
        best_v = v;
      }
    }
    f[S] = best;
    choice[S] = static_cast<std::uint8_t>(best_v);
  }

  std::vector<int> order(n);
  std::uint32_t S = full;
  for (int pos = n - 1; pos >= 0; --pos) {
    int v = choice[S];
    order[pos] = v;
    S &= ~(std::uint32_t(1) << v);
  }

  // bags from the elimination order with fill-in
  std::vector<std::uint32_t> h = adj;
  std::vector<int> pos_of(n);
  for (int i = 0; i < n; ++i) pos_of[order[i]] = i;
  TreeDecomposition td;
  td.bags.resize(n);
  std::uint32_t remaining = full;
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    remaining &= ~(std::uint32_t(1) << v);
    std::uint32_t nb = h[v] & remaining;
    td.bags[i].push_back(v);
    std::uint32_t scan = nb;
    while (scan) {
      int w = __builtin_ctz(scan);
      scan &= scan - 1;
      td.bags[i].push_back(w);
    }
    std::sort(td.bags[i].begin(), td.bags[i].end());
    std::uint32_t s1 = nb;
    while (s1) {
      int a = __builtin_ctz(s1);
      s1 &= s1 - 1;
      h[a] |= nb & ~(std::uint32_t(1) << a);
    }
    if (nb) {
      int parent_vertex = -1;
      int best_pos = n;
      std::uint32_t s2 = nb;
      while (s2) {
        int w = __builtin_ctz(s2);
        s2 &= s2 - 1;
        if (pos_of[w] < best_pos) {
          best_pos = pos_of[w];
          parent_vertex = w;
        }
      }
      td.tree_edges.emplace_back(i, pos_of[parent_vertex]);
    } else if (i + 1 < n) {
      td.tree_edges.emplace_back(i, i + 1);
    }
  }
  auto violation = check_tree_decomposition(td, g);
  if (!violation.empty())
    throw Error(ErrorKind::InvalidDecomposition, "internal decomposition invalid: " + violation);
  return td;
}

enum class NiceNodeKind { Leaf, Introduce, Forget, Join };

struct NiceNode {
  NiceNodeKind kind;
  std::vector<int> bag;  // sorted
  std::vector<int> children;
  int vertex = -1;  // introduced or forgotten vertex
};

struct NiceTreeDecomposition {
  std::vector<NiceNode> nodes;  // children precede parents
  int root = -1;
  int width = -1;

  int node_count() const { return static_cast<int>(nodes.size()); }

  TreeDecomposition as_plain() const {
    TreeDecomposition td;
    for (const auto& nd : nodes) td.bags.push_back(nd.bag);
    for (int i = 0; i < node_count(); ++i)
      for (int c : nodes[i].children) td.tree_edges.emplace_back(i, c);
    return td;
  }
};

inline std::string check_nice_decomposition(const NiceTreeDecomposition& nice, const Graph& g) {
  auto base = check_tree_decomposition(nice.as_plain(), g);
  if (!base.empty()) return base;
  for (const auto& nd : nice.nodes) {
    switch (nd.kind) {
      case NiceNodeKind::Leaf:
        if (!nd.children.empty()) return "leaf node has children";
        break;
      case NiceNodeKind::Introduce: {
        if (nd.children.size() != 1) return "introduce node needs one child";
        const auto& cb = nice.nodes[nd.children[0]].bag;
        if (nd.bag.size() != cb.size() + 1) return "introduce must grow bag by one";
        if (!std::includes(nd.bag.begin(), nd.bag.end(), cb.begin(), cb.end()))
          return "introduce bag must contain child bag";
        if (!std::binary_search(nd.bag.begin(), nd.bag.end(), nd.vertex) ||
            std::binary_search(cb.begin(), cb.end(), nd.vertex))
          return "introduce vertex mismatch";
        break;
      }
      case NiceNodeKind::Forget: {
        if (nd.children.size() != 1) return "forget node needs one child";
        const auto& cb = nice.nodes[nd.children[0]].bag;
        if (nd.bag.size() + 1 != cb.size()) return "forget must shrink bag by one";
        if (!std::includes(cb.begin(), cb.end(), nd.bag.begin(), nd.bag.end()))
          return "forget bag must be contained in child bag";
        if (std::binary_search(nd.bag.begin(), nd.bag.end(), nd.vertex) ||
            !std::binary_search(cb.begin(), cb.end(), nd.vertex))
          return "forget vertex mismatch";
        break;
      }
      case NiceNodeKind::Join: {
        if (nd.children.size() != 2) return "join node needs two children";
        if (nice.nodes[nd.children[0]].bag != nd.bag || nice.nodes[nd.children[1]].bag != nd.bag)
          return "join children bags must equal join bag";
        break;
      }
    }
  }
  if (nice.root != nice.node_count() - 1) return "root must be last node";
  if (nice.nodes[nice.root].bag.size() != 1) return "root bag must hold one vertex";
  return {};
}

inline NiceTreeDecomposition make_nice(const TreeDecomposition& td, const Graph& g) {
  auto violation = check_tree_decomposition(td, g);
  if (!violation.empty()) throw Error(ErrorKind::InvalidDecomposition, violation);

  NiceTreeDecomposition nice;
  auto add_node = [&](NiceNodeKind kind, std::vector<int> bag, std::vector<int> children,
                      int vertex) {
    nice.nodes.push_back(NiceNode{kind, std::move(bag), std::move(children), vertex});
    return nice.node_count() - 1;
  };

  // grows/shrinks the subtree top at `idx` until its bag equals `target`
  auto morph_to = [&](int idx, const std::vector<int>& target) {
    std::vector<int> cur = nice.nodes[idx].bag;
    for (int v : std::vector<int>(cur)) {
      if (std::binary_search(target.begin(), target.end(), v)) continue;
      std::vector<int> next;
      for (int x : cur)
        if (x != v) next.push_back(x);
      idx = add_node(NiceNodeKind::Forget, next, {idx}, v);
      cur = next;
    }
    for (int v : target) {
      if (std::binary_search(cur.begin(), cur.end(), v)) continue;
      std::vector<int> next = cur;
      next.insert(std::lower_bound(next.begin(), next.end(), v), v);
      idx = add_node(NiceNodeKind::Introduce, next, {idx}, v);
      cur = next;
    }
    return idx;
  };

  int root_bag = 0;
  for (int i = 1; i < td.node_count(); ++i)
    if (td.bags[i].size() > td.bags[root_bag].size()) root_bag = i;

  auto adj = td.node_adjacency();
  // iterative post-order build from root_bag
  struct Frame {
    int node, parent;
    size_t next_child = 0;
    std::vector<int> built;
  };
  std::vector<Frame> stack;
  stack.push_back({root_bag, -1});
  int top_of_root = -1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    std::vector<int> kids;
    for (int c : adj[f.node])
      if (c != f.parent) kids.push_back(c);
    if (f.next_child < kids.size()) {
      int child = kids[f.next_child++];
      stack.push_back({child, f.node});
      continue;
    }
    // children all built: assemble this node
    int built;
    if (f.built.empty()) {
      std::vector<int> bag = td.bags[f.node];
      std::vector<int> first = bag.empty() ? std::vector<int>{} : std::vector<int>{bag[0]};
      built = add_node(NiceNodeKind::Leaf, first, {}, -1);
      built = morph_to(built, bag);
    } else {
      built = morph_to(f.built[0], td.bags[f.node]);
      for (size_t i = 1; i < f.built.size(); ++i) {
        int other = morph_to(f.built[i], td.bags[f.node]);
        built = add_node(NiceNodeKind::Join, td.bags[f.node], {built, other}, -1);
      }
    }
    int parent_frame = static_cast<int>(stack.size()) - 2;
    stack.pop_back();
    if (parent_frame >= 0)
      stack[parent_frame].built.push_back(built);
    else
      top_of_root = built;
  }

  // reduce the root bag to a single vertex
  while (nice.nodes[top_of_root].bag.size() > 1) {
    std::vector<int> bag = nice.nodes[top_of_root].bag;
    int v = bag.back();
    bag.pop_back();
    top_of_root = add_node(NiceNodeKind::Forget, bag, {top_of_root}, v);
  }
  nice.root = top_of_root;
  nice.width = td.width();

  violation = check_nice_decomposition(nice, g);
  if (!violation.empty())
    throw Error(ErrorKind::InvalidDecomposition, "nice form invalid: " + violation);
  return nice;
}

}  // namespace movekit
