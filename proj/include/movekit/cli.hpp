#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "movekit/connectivity.hpp"
#include "movekit/fpt_solver.hpp"
#include "movekit/generators.hpp"
#include "movekit/instance_io.hpp"
#include "movekit/oracle.hpp"
#include "movekit/selftest.hpp"
#include "movekit/steiner_planar.hpp"

namespace movekit {
namespace cli {

struct Args {
  std::string command;
  std::map<std::string, std::string> flags;

  bool has(const std::string& k) const { return flags.count(k) > 0; }

  std::string get(const std::string& k, const std::string& dflt = "") const {
    auto it = flags.find(k);
    return it == flags.end() ? dflt : it->second;
  }

  long long get_int(const std::string& k, long long dflt) const {
    auto it = flags.find(k);
    if (it == flags.end()) return dflt;
    try {
      return std::stoll(it->second);
    } catch (...) {
      throw Error(ErrorKind::Parse, "flag --" + k + " needs an integer value");
    }
  }

  double get_double(const std::string& k, double dflt) const {
    auto it = flags.find(k);
    if (it == flags.end()) return dflt;
    try {
      return std::stod(it->second);
    } catch (...) {
      throw Error(ErrorKind::Parse, "flag --" + k + " needs a numeric value");
    }
  }
};

inline Args parse_args(const std::vector<std::string>& argv) {
  Args a;
  if (argv.empty()) throw Error(ErrorKind::Parse, "missing subcommand");
  a.command = argv[0];
  for (size_t i = 1; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    if (s.rfind("--", 0) != 0) throw Error(ErrorKind::Parse, "unexpected argument: " + s);
    if (i + 1 >= argv.size()) throw Error(ErrorKind::Parse, "flag " + s + " needs a value");
    a.flags[s.substr(2)] = argv[++i];
  }
  return a;
}

inline std::string usage() {
  return "usage: movekit <command> [flags]\n"
         "  solve --instance FILE [--solver auto|fpt|convolution|steiner-planar|oracle]\n"
         "        [--epsilon E] [--seed S] [--objective total|max-steps]\n"
         "  oracle --instance FILE\n"
         "  patterns --problem NAME --k K --l L [--d D] [--o O]\n"
         "  gen-csp --input EDGELIST --domain D --seed S [--density PERMILLE] [--output FILE]\n"
         "  gen-domset-facility --input EDGELIST --k K --d D [--output FILE]\n"
         "  gen-domset-steiner --input EDGELIST --k K [--output FILE]\n"
         "  selftest [--epsilon E] [--seed S]\n";
}

namespace detail {

inline std::string pick_solver(const Instance& inst, const std::string& requested) {
  if (requested != "auto") return requested;
  if (inst.problem.name == "connectivity-collocated" &&
      inst.max_solution_size >= static_cast<int>(inst.pebbles.size()))
    return "convolution";
  if (inst.problem.name == "steiner" && inst.planar) return "steiner-planar";
  if (inst.problem.name == "dispersion") return "oracle";
  return "fpt";
}

inline SolveResult dispatch(const Instance& inst, const std::string& solver, double epsilon,
                            std::uint64_t seed) {
  if (solver == "oracle") return oracle_solve(inst, build::catalog_of(inst));
  if (solver == "convolution") return connectivity_solve(inst);
  if (solver == "steiner-planar") return steiner_planar_solve(inst, epsilon, seed);
  if (solver == "fpt") return solve_fpt(inst, build::catalog_of(inst), epsilon, seed);
  throw Error(ErrorKind::Parse, "unknown solver: " + solver);
}

inline Json result_json(const SolveResult& r, std::uint64_t seed, std::optional<long long> cost_override = {}) {
  Json j;
  if (r.status == SolveStatus::Optimal) {
    j["status"] = "optimal";
    j["cost"] = cost_override ? *cost_override : r.solution->cost.value();
    Json plan = Json::array();
    for (size_t id = 0; id < r.solution->plan.targets.size(); ++id) {
      Json mv;
      mv["id"] = static_cast<int>(id);
      mv["to"] = r.solution->plan.targets[id];
      plan.push_back(std::move(mv));
    }
    j["plan"] = std::move(plan);
    Json wit = Json::array();
    for (int v : r.solution->witness) wit.push_back(v);
    j["witness"] = std::move(wit);
  } else {
    j["status"] = "infeasible";
  }
  j["seed"] = seed;
  j["trials"] = r.trials;
  return j;
}

inline Instance with_step_bound(const Instance& inst, int d) {
  Instance probe = inst;
  for (auto& p : probe.pebbles) p.cost = StepsCost{d};
  probe.rebuild_counts();
  return probe;
}

inline int run_solve(const Args& args, std::ostream& out) {
  if (!args.has("instance")) throw Error(ErrorKind::Parse, "solve needs --instance FILE");
  Instance inst = load_instance(args.get("instance"));
  double epsilon = args.get_double("epsilon", 0.01);
  std::uint64_t seed = static_cast<std::uint64_t>(args.get_int("seed", 0));
  std::string objective = args.get("objective", "total");
  std::string solver = detail::pick_solver(inst, args.get("solver", "auto"));

  if (objective == "total") {
    SolveResult r = dispatch(inst, solver, epsilon, seed);
    out << result_json(r, seed).dump() << "\n";
    return r.status == SolveStatus::Optimal ? 0 : 1;
  }
  if (objective != "max-steps")
    throw Error(ErrorKind::Parse, "objective must be total or max-steps");

  // least step bound d such that a zero-cost plan exists under steps(d)
  int n = inst.vertex_count();
  int probes = 1;
  for (int span = n + 1; span > 1; span = (span + 1) / 2) ++probes;
  double probe_eps = epsilon / probes;
  std::uint64_t trials = 0;
  auto feasible = [&](int d, SolveResult& keep) {
    SolveResult r = dispatch(with_step_bound(inst, d), solver, probe_eps,
                             seed + 1000003ULL * static_cast<std::uint64_t>(d));
    trials += r.trials;
    if (r.status == SolveStatus::Optimal) {
      keep = std::move(r);
      return true;
    }
    return false;
  };
  SolveResult best;
  int lo = 0, hi = n, answer = -1;
  if (!feasible(n, best)) {
    SolveResult none;
    none.trials = trials;
    out << result_json(none, seed).dump() << "\n";
    return 1;
  }
  answer = n;
  hi = n - 1;
  while (lo <= hi) {
    int mid = lo + (hi - lo) / 2;
    SolveResult r;
    if (feasible(mid, r)) {
      answer = mid;
      best = std::move(r);
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  best.trials = trials;
  out << result_json(best, seed, answer).dump() << "\n";
  return 0;
}

inline ColorTable patterns_colors(const std::string& problem, int k) {
  if (problem == "facility-location" || problem == "st-connectivity-bounded" ||
      problem == "st-d-connectivity" || problem == "steiner")
    return ColorTable{{{"red", ColorKind::Main}, {"blue", ColorKind::Facility}}};
  if (problem == "st-connectivity-few")
    return ColorTable{{{"red", ColorKind::Main}, {"blue", ColorKind::Main}}};
  if (problem == "separation")
    return ColorTable{{{"client", ColorKind::Main}, {"waste", ColorKind::Obnoxious}}};
  (void)k;
  return ColorTable{{{"pebble", ColorKind::Main}}};
}

inline int run_patterns(const Args& args, std::ostream& out) {
  std::string problem = args.get("problem");
  if (problem.empty()) throw Error(ErrorKind::Parse, "patterns needs --problem NAME");
  int k = static_cast<int>(args.get_int("k", -1));
  int l = static_cast<int>(args.get_int("l", -1));
  if (k < 1 || l < 1) throw Error(ErrorKind::Parse, "patterns needs --k and --l >= 1");
  ProblemSpec spec;
  spec.name = problem;
  if (args.has("d")) spec.int_params["d"] = args.get_int("d", 1);
  if (args.has("o")) spec.int_params["o"] = args.get_int("o", 0);
  ColorTable colors = patterns_colors(problem, k);
  std::vector<int> main_counts(colors.size(), 0);
  if (problem == "st-connectivity-few") {
    if (k < 2) throw Error(ErrorKind::Parse, "st-connectivity-few needs k >= 2");
    main_counts[0] = 2;
    main_counts[1] = k - 2;
  } else if (problem == "st-connectivity-bounded" || problem == "st-d-connectivity") {
    main_counts[0] = 2;
  } else {
    main_counts[0] = k;
  }
  PatternCatalog cat = minimal_patterns(spec, colors, main_counts, l);
  Json head;
  head["patterns"] = static_cast<int>(cat.patterns.size());
  head["max_pebbles"] = cat.max_pebbles;
  head["treewidth_bound"] = cat.treewidth_bound;
  head["closed_under_edge_addition"] = cat.closed_under_edge_addition;
  out << head.dump() << "\n";
  for (const auto& p : cat.patterns) {
    Json j;
    Json jg;
    jg["n"] = p.vertex_count();
    Json edges = Json::array();
    for (auto [a, b] : p.mc.graph.edges()) edges.push_back(Json::array({a, b}));
    jg["edges"] = std::move(edges);
    j["graph"] = std::move(jg);
    Json colors_json = Json::array();
    for (const auto& c : colors.colors) {
      Json jc;
      jc["name"] = c.name;
      jc["kind"] = c.kind == ColorKind::Main ? "main"
                   : c.kind == ColorKind::Facility ? "facility"
                                                   : "obnoxious";
      colors_json.push_back(std::move(jc));
    }
    j["colors"] = std::move(colors_json);
    Json pebbles = Json::array();
    int id = 0;
    for (int c = 0; c < colors.size(); ++c)
      for (int v = 0; v < p.vertex_count(); ++v)
        for (int x = 0; x < p.mc.count(c, v); ++x) {
          Json jp;
          jp["id"] = id++;
          jp["color"] = colors.name(c);
          jp["at"] = v;
          pebbles.push_back(std::move(jp));
        }
    j["pebbles"] = std::move(pebbles);
    out << j.dump() << "\n";
  }
  return 0;
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open edge list: " + path);
  return read_edge_list(in);
}

inline int emit_instance(const Instance& inst, const Args& args, std::ostream& out) {
  if (args.has("output")) {
    save_instance(inst, args.get("output"));
  } else {
    out << instance_to_text(inst);
  }
  return 0;
}

}  // namespace detail

// Front end used by both the binary and the tests. Exit codes: 0 solved,
// 1 infeasible, 2 usage error, 3 limits exceeded.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  try {
    Args args = parse_args(argv);
    if (args.command == "solve") return detail::run_solve(args, out);
    if (args.command == "oracle") {
      Args forced = args;
      forced.flags["solver"] = "oracle";
      return detail::run_solve(forced, out);
    }
    if (args.command == "patterns") return detail::run_patterns(args, out);
    if (args.command == "gen-csp") {
      if (!args.has("input") || !args.has("domain"))
        throw Error(ErrorKind::Parse, "gen-csp needs --input and --domain");
      Graph primal = detail::read_edge_list_file(args.get("input"));
      ColorTable ct{{{"client", ColorKind::Main}}};
      CSPInstance csp =
          random_csp(primal, static_cast<int>(args.get_int("domain", 2)),
                     static_cast<std::uint64_t>(args.get_int("seed", 0)),
                     static_cast<int>(args.get_int("density", 500)));
      return detail::emit_instance(csp_to_movement(csp, csp_pattern(primal, ct), ct), args, out);
    }
    if (args.command == "gen-domset-facility") {
      if (!args.has("input") || !args.has("k") || !args.has("d"))
        throw Error(ErrorKind::Parse, "gen-domset-facility needs --input, --k and --d");
      Graph source = detail::read_edge_list_file(args.get("input"));
      return detail::emit_instance(
          domset_to_facility(source, static_cast<int>(args.get_int("k", 1)),
                             static_cast<int>(args.get_int("d", 0))),
          args, out);
    }
    if (args.command == "gen-domset-steiner") {
      if (!args.has("input") || !args.has("k"))
        throw Error(ErrorKind::Parse, "gen-domset-steiner needs --input and --k");
      Graph source = detail::read_edge_list_file(args.get("input"));
      return detail::emit_instance(
          domset_to_steiner(source, static_cast<int>(args.get_int("k", 1))), args, out);
    }
    if (args.command == "selftest")
      return selftest::run(out, args.get_double("epsilon", 0.01),
                           static_cast<std::uint64_t>(args.get_int("seed", 0)));
    if (args.command == "help" || args.command == "--help") {
      out << usage();
      return 0;
    }
    throw Error(ErrorKind::Parse, "unknown command: " + args.command);
  } catch (const Error& e) {
    Json j;
    j["status"] = "error";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return e.kind() == ErrorKind::TooLarge ? 3 : 2;
  } catch (const std::exception& e) {
    Json j;
    j["status"] = "error";
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 2;
  }
}

}  // namespace cli
}  // namespace movekit
