#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "movekit/model.hpp"

namespace movekit {
namespace detail {

// Joint color refinement over two graphs so class ids are comparable across
// them. Seeded by (degree, pebble counts), refined by neighbor class
// multisets until stable.
inline void refine_joint(const MulticoloredGraph& a, const MulticoloredGraph& b,
                         std::vector<int>& cls_a, std::vector<int>& cls_b) {
  int na = a.vertex_count(), nb = b.vertex_count();
  std::vector<std::vector<long long>> sig(na + nb);
  auto seed = [&](const MulticoloredGraph& g, int off) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      sig[off + v] = {g.graph.degree(v)};
      for (int c = 0; c < g.color_count(); ++c) sig[off + v].push_back(g.count(c, v));
    }
  };
  seed(a, 0);
  seed(b, na);
  std::vector<int> cls(na + nb, 0);
  auto assign = [&]() {
    std::vector<std::vector<long long>> sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int i = 0; i < na + nb; ++i)
      cls[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[i]) -
                                sorted.begin());
    return static_cast<int>(sorted.size());
  };
  int groups = assign();
  for (int round = 0; round < na + nb; ++round) {
    auto renew = [&](const MulticoloredGraph& g, int off) {
      for (int v = 0; v < g.vertex_count(); ++v) {
        std::vector<long long> nbcls;
        for (int u : g.graph.neighbors(v)) nbcls.push_back(cls[off + u]);
        std::sort(nbcls.begin(), nbcls.end());
        sig[off + v] = {cls[off + v]};
        sig[off + v].insert(sig[off + v].end(), nbcls.begin(), nbcls.end());
      }
    };
    renew(a, 0);
    renew(b, na);
    int next = assign();
    if (next == groups) break;
    groups = next;
  }
  cls_a.assign(cls.begin(), cls.begin() + na);
  cls_b.assign(cls.begin() + na, cls.end());
}

inline bool iso_backtrack(const MulticoloredGraph& a, const MulticoloredGraph& b,
                          const std::vector<int>& cls_a, const std::vector<int>& cls_b,
                          std::vector<int>& map, std::vector<char>& used, int v) {
  int n = a.vertex_count();
  if (v == n) return true;
  for (int w = 0; w < n; ++w) {
    if (used[w] || cls_a[v] != cls_b[w]) continue;
    bool ok = true;
    for (int u = 0; u < v && ok; ++u)
      if (a.graph.has_edge(u, v) != b.graph.has_edge(map[u], w)) ok = false;
    if (!ok) continue;
    map[v] = w;
    used[w] = 1;
    if (iso_backtrack(a, b, cls_a, cls_b, map, used, v + 1)) return true;
    used[w] = 0;
  }
  return false;
}

}  // namespace detail

// Exact multicolored isomorphism (all pebble counts equal under the bijection).
inline bool multicolored_isomorphic(const MulticoloredGraph& a, const MulticoloredGraph& b) {
  if (a.vertex_count() != b.vertex_count()) return false;
  if (a.color_count() != b.color_count()) return false;
  if (a.graph.edge_count() != b.graph.edge_count()) return false;
  std::vector<int> cls_a, cls_b;
  detail::refine_joint(a, b, cls_a, cls_b);
  auto hist = [](std::vector<int> h) {
    std::sort(h.begin(), h.end());
    return h;
  };
  if (hist(cls_a) != hist(cls_b)) return false;
  std::vector<int> map(a.vertex_count(), -1);
  std::vector<char> used(a.vertex_count(), 0);
  return detail::iso_backtrack(a, b, cls_a, cls_b, map, used, 0);
}

}  // namespace movekit
