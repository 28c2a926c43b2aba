#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "movekit/dominate.hpp"
#include "movekit/model.hpp"
#include "movekit/patterns.hpp"

namespace movekit {

enum class VerifyError {
  None,
  WitnessTooLarge,
  MainPebbleOutsideWitness,
  NoDominatedPattern,
  CostBudgetExceeded,
};

struct VerifyOutcome {
  VerifyError error = VerifyError::None;
  Cost cost = Cost::inf();

  bool ok() const { return error == VerifyError::None; }
};

// Post-move configuration induced on the witness set (witness sorted).
inline MulticoloredGraph induced_config(const Instance& inst, const MovementPlan& plan,
                                        const std::vector<int>& witness) {
  int s = static_cast<int>(witness.size());
  std::vector<int> index(inst.vertex_count(), -1);
  for (int i = 0; i < s; ++i) index[witness[i]] = i;
  Graph g(s);
  for (auto [a, b] : inst.graph.graph.edges())
    if (index[a] >= 0 && index[b] >= 0) g.add_edge(index[a], index[b]);
  MulticoloredGraph config(std::move(g), inst.colors.size());
  for (const auto& p : inst.pebbles) {
    int t = plan.target(p.id);
    if (index[t] >= 0) config.add_pebbles(p.color, index[t]);
  }
  return config;
}

namespace detail {

inline VerifyOutcome verify_prelude(const Instance& inst, const MovementPlan& plan,
                                    const std::vector<int>& witness) {
  VerifyOutcome out;
  if (plan.targets.size() != inst.pebbles.size())
    throw Error(ErrorKind::Validation, "plan must assign every pebble");
  for (int t : plan.targets)
    if (t < 0 || t >= inst.vertex_count())
      throw Error(ErrorKind::Validation, "plan target out of range");
  for (int v : witness)
    if (v < 0 || v >= inst.vertex_count())
      throw Error(ErrorKind::Validation, "witness vertex out of range");
  if (!std::is_sorted(witness.begin(), witness.end()) ||
      std::adjacent_find(witness.begin(), witness.end()) != witness.end())
    throw Error(ErrorKind::Validation, "witness must be a sorted vertex set");
  if (static_cast<int>(witness.size()) > inst.max_solution_size) {
    out.error = VerifyError::WitnessTooLarge;
    return out;
  }
  for (const auto& p : inst.pebbles) {
    if (inst.colors.kind(p.color) != ColorKind::Main) continue;
    if (!std::binary_search(witness.begin(), witness.end(), plan.target(p.id))) {
      out.error = VerifyError::MainPebbleOutsideWitness;
      return out;
    }
  }
  return out;
}

inline VerifyOutcome verify_epilogue(const Instance& inst, const MovementPlan& plan,
                                     VerifyOutcome out) {
  Cost c = plan_cost(inst, plan);
  if (c.is_inf() || (inst.budget && c > *inst.budget)) {
    out.error = VerifyError::CostBudgetExceeded;
    return out;
  }
  out.cost = c;
  return out;
}

}  // namespace detail

// Checks a (plan, witness) pair against the property's pattern list: the
// witness is small enough, holds every main pebble's target, and its induced
// post-move configuration dominates some pattern of matching size.
inline VerifyOutcome verify_solution(const Instance& inst, const MovementPlan& plan,
                                     const std::vector<int>& witness,
                                     const std::vector<PatternGraph>& patterns,
                                     bool spanning_mode) {
  VerifyOutcome out = detail::verify_prelude(inst, plan, witness);
  if (!out.ok()) return out;
  MulticoloredGraph config = induced_config(inst, plan, witness);
  bool dominated = false;
  for (const auto& pat : patterns) {
    if (pat.vertex_count() != config.vertex_count()) continue;
    if (dominates(config, pat.mc, inst.colors, spanning_mode).found()) {
      dominated = true;
      break;
    }
  }
  if (!dominated) {
    out.error = VerifyError::NoDominatedPattern;
    return out;
  }
  return detail::verify_epilogue(inst, plan, out);
}

// Same check but answered from the property semantics directly, with no
// enumerated catalog. Agrees with the catalog route on edge-addition-closed
// properties (cross-validated in the test suite).
inline VerifyOutcome verify_solution_semantic(const Instance& inst, const MovementPlan& plan,
                                              const std::vector<int>& witness) {
  VerifyOutcome out = detail::verify_prelude(inst, plan, witness);
  if (!out.ok()) return out;
  MulticoloredGraph config = induced_config(inst, plan, witness);
  if (!property_accepts_config(inst.problem, inst.colors, config)) {
    out.error = VerifyError::NoDominatedPattern;
    return out;
  }
  return detail::verify_epilogue(inst, plan, out);
}

}  // namespace movekit
