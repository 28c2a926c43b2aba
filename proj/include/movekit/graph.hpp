#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace movekit {

// Simple undirected graph on dense 0-based vertices.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(n) {}

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }

  bool has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    const auto& a = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    int w = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::find(a.begin(), a.end(), w) != a.end();
  }

  void add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw std::out_of_range("graph: edge endpoint out of range");
    if (u == v) throw std::invalid_argument("graph: self-loop rejected");
    if (has_edge(u, v)) throw std::invalid_argument("graph: parallel edge rejected");
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    edges_.emplace_back(std::min(u, v), std::max(u, v));
  }

  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  // Hop distances from src; -1 where unreachable.
  std::vector<int> bfs_distances(int src) const {
    std::vector<int> dist(n_, -1);
    dist[src] = 0;
    std::queue<int> q;
    q.push(src);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int u : adj_[v])
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          q.push(u);
        }
    }
    return dist;
  }

  // Connected components over an arbitrary vertex subset (induced).
  std::vector<std::vector<int>> induced_components(const std::vector<int>& verts) const {
    std::vector<char> in(n_, 0), seen(n_, 0);
    for (int v : verts) in[v] = 1;
    std::vector<std::vector<int>> comps;
    for (int s : verts) {
      if (seen[s]) continue;
      comps.emplace_back();
      std::vector<int> stack{s};
      seen[s] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comps.back().push_back(v);
        for (int u : adj_[v])
          if (in[u] && !seen[u]) {
            seen[u] = 1;
            stack.push_back(u);
          }
      }
      std::sort(comps.back().begin(), comps.back().end());
    }
    return comps;
  }

  bool is_connected_over(const std::vector<int>& verts) const {
    if (verts.empty()) return true;
    return induced_components(verts).size() == 1;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::pair<int, int>> edges_;
};

}  // namespace movekit
