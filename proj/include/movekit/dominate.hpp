#pragma once

#include <optional>
#include <vector>

#include "movekit/model.hpp"

namespace movekit {

enum class DominationStatus { Found, NoBijection, NotComparable };

struct DominationResult {
  DominationStatus status = DominationStatus::NoBijection;
  // pattern vertex -> candidate vertex, present iff status == Found
  std::optional<std::vector<int>> mapping;

  bool found() const { return status == DominationStatus::Found; }
};

namespace detail {

struct DomSearch {
  const MulticoloredGraph& cand;
  const MulticoloredGraph& pat;
  const ColorTable& colors;
  bool spanning;
  std::vector<int> map;
  std::vector<char> used;

  bool vertex_ok(int pv, int cv) const {
    for (int c = 0; c < colors.size(); ++c) {
      int pc = pat.count(c, pv), cc = cand.count(c, cv);
      switch (colors.kind(c)) {
        case ColorKind::Main:
          if (pc != cc) return false;
          break;
        case ColorKind::Facility:
          if (cc < pc) return false;
          break;
        case ColorKind::Obnoxious:
          if (cc > pc) return false;
          break;
      }
    }
    int pd = pat.graph.degree(pv), cd = cand.graph.degree(cv);
    return spanning ? cd >= pd : cd == pd;
  }

  bool edges_ok(int pv, int cv) const {
    for (int u = 0; u < pv; ++u) {
      bool pe = pat.graph.has_edge(u, pv);
      bool ce = cand.graph.has_edge(map[u], cv);
      if (spanning ? (pe && !ce) : (pe != ce)) return false;
    }
    return true;
  }

  bool run(int pv) {
    int n = pat.vertex_count();
    if (pv == n) return true;
    for (int cv = 0; cv < n; ++cv) {
      if (used[cv] || !vertex_ok(pv, cv) || !edges_ok(pv, cv)) continue;
      map[pv] = cv;
      used[cv] = 1;
      if (run(pv + 1)) return true;
      used[cv] = 0;
    }
    return false;
  }
};

}  // namespace detail

// Does `candidate` dominate `pattern`? Both graphs share `colors`. In
// spanning mode pattern edges need only map into candidate edges (the right
// check when minimal patterns represent an edge-addition-closed property);
// otherwise edge correspondence must be exact.
inline DominationResult dominates(const MulticoloredGraph& candidate,
                                  const MulticoloredGraph& pattern, const ColorTable& colors,
                                  bool spanning_mode) {
  DominationResult res;
  if (candidate.vertex_count() != pattern.vertex_count()) {
    res.status = DominationStatus::NotComparable;
    return res;
  }
  detail::DomSearch s{candidate, pattern, colors, spanning_mode,
                      std::vector<int>(pattern.vertex_count(), -1),
                      std::vector<char>(pattern.vertex_count(), 0)};
  if (s.run(0)) {
    res.status = DominationStatus::Found;
    res.mapping = s.map;
  }
  return res;
}

}  // namespace movekit
