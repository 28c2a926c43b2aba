#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "movekit/cost.hpp"
#include "movekit/error.hpp"
#include "movekit/graph.hpp"
#include "movekit/rng.hpp"
#include "movekit/treewidth.hpp"

namespace movekit {

// cost[pattern vertex][host vertex]
using EmbedCostTable = std::vector<std::vector<Cost>>;

struct EmbeddingResult {
  bool feasible = false;
  Cost cost = Cost::inf();
  std::vector<int> embedding;  // pattern vertex -> host vertex
};

namespace detail {

constexpr int kMaxPatternVerts = 15;
constexpr int kMaxBag = 5;
constexpr int kPsiBits = 12;  // host ids per bag slot

struct EmbEntry {
  std::int64_t cost;
  std::array<std::uint16_t, kMaxPatternVerts> emb;  // 0xFFFF where unset

  bool better_than(const EmbEntry& o, int k) const {
    if (cost != o.cost) return cost < o.cost;
    for (int i = 0; i < k; ++i)
      if (emb[i] != o.emb[i]) return emb[i] < o.emb[i];
    return false;
  }
};

struct EmbKey {
  std::uint32_t used;
  std::uint64_t psi;
  bool operator==(const EmbKey& o) const { return used == o.used && psi == o.psi; }
};

struct EmbKeyHash {
  std::size_t operator()(const EmbKey& k) const {
    return SplitMix64::mix((std::uint64_t(k.used) << 40) ^ k.psi);
  }
};

using EmbTable = std::unordered_map<EmbKey, EmbEntry, EmbKeyHash>;

inline std::uint64_t pack_psi(const std::vector<int>& bag,
                              const std::array<std::uint16_t, kMaxPatternVerts>& emb) {
  std::uint64_t code = 0;
  for (size_t i = 0; i < bag.size(); ++i)
    code |= std::uint64_t(emb[bag[i]]) << (kPsiBits * i);
  return code;
}

inline void table_insert(EmbTable& t, int k, EmbKey key, const EmbEntry& e) {
  auto [it, fresh] = t.emplace(key, e);
  if (!fresh && e.better_than(it->second, k)) it->second = e;
}

}  // namespace detail

// Minimum-cost colorful subgraph embedding of F into G for one fixed host
// labeling, by dynamic programming over a nice tree decomposition of F.
// Host labels outside {1..|V(F)|} make a vertex unusable.
inline EmbeddingResult colorful_embedding_dp(const Graph& F, const NiceTreeDecomposition& nice,
                                             const Graph& G, const std::vector<int>& host_labels,
                                             const EmbedCostTable& cost) {
  using namespace detail;
  int kF = F.vertex_count();
  int nG = G.vertex_count();
  if (kF > kMaxPatternVerts || nG >= (1 << kPsiBits))
    throw Error(ErrorKind::TooLarge, "embedding DP size limits exceeded");
  for (const auto& nd : nice.nodes)
    if (static_cast<int>(nd.bag.size()) > kMaxBag)
      throw Error(ErrorKind::TooLarge, "embedding DP bag width limit exceeded");

  EmbeddingResult out;
  if (kF > nG) return out;

  auto usable = [&](int u) { return host_labels[u] >= 1 && host_labels[u] <= kF; };
  auto label_bit = [&](int u) { return std::uint32_t(1) << (host_labels[u] - 1); };

  std::vector<EmbTable> tables(nice.node_count());
  std::array<std::uint16_t, kMaxPatternVerts> empty_emb;
  empty_emb.fill(0xFFFF);

  for (int ni = 0; ni < nice.node_count(); ++ni) {
    const NiceNode& nd = nice.nodes[ni];
    EmbTable& tab = tables[ni];
    switch (nd.kind) {
      case NiceNodeKind::Leaf: {
        int s = static_cast<int>(nd.bag.size());
        std::vector<int> slot(s, 0);
        if (s == 0) {
          table_insert(tab, kF, EmbKey{0, 0}, EmbEntry{0, empty_emb});
          break;
        }
        // enumerate all assignments bag -> V(G)
        for (;;) {
          EmbEntry e{0, empty_emb};
          std::uint32_t used = 0;
          bool ok = true;
          for (int i = 0; i < s && ok; ++i) {
            int u = slot[i];
            if (!usable(u) || (used & label_bit(u)) || cost[nd.bag[i]][u].is_inf()) {
              ok = false;
              break;
            }
            for (int j = 0; j < i && ok; ++j)
              if (F.has_edge(nd.bag[j], nd.bag[i]) && !G.has_edge(slot[j], u)) ok = false;
            if (!ok) break;
            used |= label_bit(u);
            e.cost += cost[nd.bag[i]][u].value();
            e.emb[nd.bag[i]] = static_cast<std::uint16_t>(u);
          }
          if (ok) table_insert(tab, kF, EmbKey{used, pack_psi(nd.bag, e.emb)}, e);
          int i = s - 1;
          while (i >= 0 && slot[i] == nG - 1) slot[i--] = 0;
          if (i < 0) break;
          ++slot[i];
        }
        break;
      }
      case NiceNodeKind::Introduce: {
        const EmbTable& child = tables[nd.children[0]];
        int v = nd.vertex;
        std::vector<int> bag_nbrs;
        for (int w : nd.bag)
          if (w != v && F.has_edge(w, v)) bag_nbrs.push_back(w);
        for (const auto& [ckey, ce] : child) {
          for (int u = 0; u < nG; ++u) {
            if (!usable(u) || (ckey.used & label_bit(u)) || cost[v][u].is_inf()) continue;
            bool ok = true;
            for (int w : bag_nbrs)
              if (!G.has_edge(ce.emb[w], u)) {
                ok = false;
                break;
              }
            if (!ok) continue;
            EmbEntry e = ce;
            e.cost += cost[v][u].value();
            e.emb[v] = static_cast<std::uint16_t>(u);
            table_insert(tab, kF, EmbKey{ckey.used | label_bit(u), pack_psi(nd.bag, e.emb)}, e);
          }
        }
        break;
      }
      case NiceNodeKind::Forget: {
        const EmbTable& child = tables[nd.children[0]];
        for (const auto& [ckey, ce] : child)
          table_insert(tab, kF, EmbKey{ckey.used, pack_psi(nd.bag, ce.emb)}, ce);
        break;
      }
      case NiceNodeKind::Join: {
        const EmbTable& left = tables[nd.children[0]];
        const EmbTable& right = tables[nd.children[1]];
        // group right entries by psi
        std::unordered_map<std::uint64_t, std::vector<const std::pair<const EmbKey, EmbEntry>*>>
            by_psi;
        for (const auto& kv : right) by_psi[kv.first.psi].push_back(&kv);
        for (const auto& [lkey, le] : left) {
          auto it = by_psi.find(lkey.psi);
          if (it == by_psi.end()) continue;
          std::uint32_t l0 = 0;
          std::int64_t shared_cost = 0;
          for (int w : nd.bag) {
            l0 |= label_bit(le.emb[w]);
            shared_cost += cost[w][le.emb[w]].value();
          }
          for (const auto* rkv : it->second) {
            if ((lkey.used & rkv->first.used) != l0) continue;
            EmbEntry e = le;
            e.cost += rkv->second.cost - shared_cost;
            for (int x = 0; x < kF; ++x)
              if (e.emb[x] == 0xFFFF) e.emb[x] = rkv->second.emb[x];
            table_insert(tab, kF, EmbKey{lkey.used | rkv->first.used, lkey.psi}, e);
          }
        }
        break;
      }
    }
    for (int c : nd.children) tables[c] = EmbTable{};
  }

  std::uint32_t full = kF >= 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << kF) - 1;
  const detail::EmbEntry* best = nullptr;
  for (const auto& [key, e] : tables[nice.root])
    if (key.used == full && (!best || e.better_than(*best, kF))) best = &e;
  if (!best) return out;
  out.feasible = true;
  out.cost = Cost(best->cost);
  out.embedding.assign(kF, -1);
  for (int i = 0; i < kF; ++i) out.embedding[i] = best->emb[i];
  return out;
}

// Color-coding wrapper: N = ceil(e^{|V(F)|} * ln(1/eps)) independent random
// labelings; any returned embedding is valid with its exact cost, and with
// probability >= 1-eps the returned cost is the true minimum.
inline EmbeddingResult min_cost_embedding(const Graph& F, const NiceTreeDecomposition& nice,
                                          const Graph& G, const EmbedCostTable& cost,
                                          double failure_prob, std::uint64_t seed,
                                          std::uint64_t* trials_out = nullptr) {
  if (!(failure_prob > 0.0 && failure_prob < 1.0))
    throw Error(ErrorKind::Validation, "failure probability must be in (0,1)");
  int kF = F.vertex_count();
  EmbeddingResult best;
  if (kF > G.vertex_count()) {
    if (trials_out) *trials_out = 0;
    return best;
  }
  auto trials =
      static_cast<std::uint64_t>(std::ceil(std::exp(kF) * std::log(1.0 / failure_prob)));
  if (trials < 1) trials = 1;
  std::vector<int> labels(G.vertex_count());
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(seed, t);
    for (auto& l : labels) l = 1 + static_cast<int>(rng.next_below(kF));
    EmbeddingResult r = colorful_embedding_dp(F, nice, G, labels, cost);
    if (!r.feasible) continue;
    if (!best.feasible || r.cost < best.cost ||
        (r.cost == best.cost && r.embedding < best.embedding))
      best = std::move(r);
  }
  if (trials_out) *trials_out = trials;
  return best;
}

}  // namespace movekit
