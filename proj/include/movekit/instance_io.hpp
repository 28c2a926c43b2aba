#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "movekit/error.hpp"
#include "movekit/model.hpp"

namespace movekit {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* a : allowed)
      if (it.key() == a) known = true;
    if (!known) throw Error(ErrorKind::Parse, "unknown field '" + it.key() + "' in " + where);
  }
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorKind::Parse, "missing field '" + std::string(key) + "' in " + where);
  return *it;
}

inline long long require_int(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_number_integer())
    throw Error(ErrorKind::Parse, "field '" + std::string(key) + "' in " + where + " must be an integer");
  return v.get<long long>();
}

inline std::string require_string(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_string())
    throw Error(ErrorKind::Parse, "field '" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

inline const std::vector<std::string>& known_problems() {
  static const std::vector<std::string> names = {
      "connectivity-distinct",  "connectivity-collocated",
      "matching",               "st-connectivity-few",
      "st-connectivity-bounded", "steiner",
      "st-d-connectivity",      "facility-location",
      "facility-location-distance", "separation",
      "dispersion",             "fixed-pattern"};
  return names;
}

inline std::vector<std::string> problem_param_keys(const std::string& name) {
  if (name == "separation") return {"o"};
  if (name == "st-d-connectivity" || name == "facility-location-distance") return {"d"};
  if (name == "fixed-pattern") return {"vertices", "edges"};
  return {};
}

}  // namespace detail

inline Instance parse_instance(const Json& j) {
  using detail::reject_unknown;
  using detail::require;
  using detail::require_int;
  using detail::require_string;
  if (!j.is_object()) throw Error(ErrorKind::Parse, "instance must be a JSON object");
  reject_unknown(j, {"graph", "planar", "colors", "pebbles", "problem", "l", "budget"}, "instance");

  Instance inst;
  const Json& jg = require(j, "graph", "instance");
  reject_unknown(jg, {"n", "edges"}, "graph");
  long long n = require_int(jg, "n", "graph");
  if (n < 0 || n > 1000000) throw Error(ErrorKind::Parse, "graph.n out of range");
  Graph g(static_cast<int>(n));
  const Json& je = require(jg, "edges", "graph");
  if (!je.is_array()) throw Error(ErrorKind::Parse, "graph.edges must be an array");
  for (const Json& e : je) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw Error(ErrorKind::Parse, "each edge must be a pair [u,v]");
    long long u = e[0].get<long long>(), v = e[1].get<long long>();
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw Error(ErrorKind::Parse, "edge endpoint out of range");
    try {
      g.add_edge(static_cast<int>(u), static_cast<int>(v));
    } catch (const std::exception& ex) {
      throw Error(ErrorKind::Parse, std::string("bad edge: ") + ex.what());
    }
  }

  if (j.contains("planar")) {
    if (!j["planar"].is_boolean()) throw Error(ErrorKind::Parse, "planar must be a boolean");
    inst.planar = j["planar"].get<bool>();
  }

  const Json& jc = require(j, "colors", "instance");
  if (!jc.is_array() || jc.empty()) throw Error(ErrorKind::Parse, "colors must be a non-empty array");
  for (const Json& c : jc) {
    reject_unknown(c, {"name", "kind"}, "color");
    std::string name = require_string(c, "name", "color");
    std::string kind = require_string(c, "kind", "color");
    ColorKind ck;
    if (kind == "main")
      ck = ColorKind::Main;
    else if (kind == "facility")
      ck = ColorKind::Facility;
    else if (kind == "obnoxious")
      ck = ColorKind::Obnoxious;
    else
      throw Error(ErrorKind::Parse, "color kind must be main|facility|obnoxious");
    inst.colors.colors.push_back({name, ck});
  }

  const Json& jp = require(j, "pebbles", "instance");
  if (!jp.is_array()) throw Error(ErrorKind::Parse, "pebbles must be an array");
  for (const Json& p : jp) {
    reject_unknown(p, {"id", "color", "at", "cost"}, "pebble");
    Pebble pb;
    pb.id = static_cast<int>(require_int(p, "id", "pebble"));
    pb.color = inst.colors.index_of(require_string(p, "color", "pebble"));
    pb.initial_vertex = static_cast<int>(require_int(p, "at", "pebble"));
    const Json& jcost = require(p, "cost", "pebble");
    reject_unknown(jcost, {"kind", "max", "values"}, "cost");
    std::string kind = require_string(jcost, "kind", "cost");
    if (kind == "distance") {
      reject_unknown(jcost, {"kind"}, "distance cost");
      pb.cost = DistanceCost{};
    } else if (kind == "steps") {
      reject_unknown(jcost, {"kind", "max"}, "steps cost");
      pb.cost = StepsCost{static_cast<int>(require_int(jcost, "max", "steps cost"))};
    } else if (kind == "moved") {
      reject_unknown(jcost, {"kind"}, "moved cost");
      pb.cost = MovedCost{};
    } else if (kind == "table") {
      reject_unknown(jcost, {"kind", "values"}, "table cost");
      const Json& vals = require(jcost, "values", "table cost");
      if (!vals.is_array()) throw Error(ErrorKind::Parse, "table cost values must be an array");
      TableCost t;
      for (const Json& v : vals) {
        if (v.is_null()) {
          t.values.push_back(Cost::inf());
        } else if (v.is_number_integer()) {
          long long x = v.get<long long>();
          if (x < 0 || x > Cost::kFiniteCap)
            throw Error(ErrorKind::Parse, "cost value outside [0, 2^40]");
          t.values.push_back(Cost(x));
        } else {
          throw Error(ErrorKind::Parse, "table cost values must be integers or null");
        }
      }
      pb.cost = std::move(t);
    } else {
      throw Error(ErrorKind::Parse, "cost kind must be distance|steps|moved|table");
    }
    inst.pebbles.push_back(std::move(pb));
  }

  const Json& jprob = require(j, "problem", "instance");
  reject_unknown(jprob, {"name", "params"}, "problem");
  inst.problem.name = require_string(jprob, "name", "problem");
  const auto& known = detail::known_problems();
  if (std::find(known.begin(), known.end(), inst.problem.name) == known.end())
    throw Error(ErrorKind::Parse, "unknown problem name '" + inst.problem.name + "'");
  const Json& jparams = require(jprob, "params", "problem");
  if (!jparams.is_object()) throw Error(ErrorKind::Parse, "problem.params must be an object");
  auto keys = detail::problem_param_keys(inst.problem.name);
  for (auto it = jparams.begin(); it != jparams.end(); ++it) {
    bool ok = std::find(keys.begin(), keys.end(), it.key()) != keys.end();
    if (!ok)
      throw Error(ErrorKind::Parse,
                  "unknown parameter '" + it.key() + "' for problem " + inst.problem.name);
    if (it.key() == "edges") {
      if (!it->is_array()) throw Error(ErrorKind::Parse, "pattern edges must be an array");
      for (const Json& e : *it) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
          throw Error(ErrorKind::Parse, "each pattern edge must be a pair [u,v]");
        inst.problem.pattern_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    } else {
      if (!it->is_number_integer())
        throw Error(ErrorKind::Parse, "parameter '" + it.key() + "' must be an integer");
      inst.problem.int_params[it.key()] = it->get<long long>();
    }
  }
  for (const auto& key : keys)
    if (key != "edges" && !jparams.contains(key))
      throw Error(ErrorKind::Parse,
                  "problem " + inst.problem.name + " requires parameter '" + key + "'");

  long long l = require_int(j, "l", "instance");
  if (l < 1 || l > 1000000) throw Error(ErrorKind::Parse, "l must be a positive integer");
  inst.max_solution_size = static_cast<int>(l);

  if (j.contains("budget")) {
    if (!j["budget"].is_number_integer()) throw Error(ErrorKind::Parse, "budget must be an integer");
    long long b = j["budget"].get<long long>();
    if (b < 0 || b > Cost::kFiniteCap)
      throw Error(ErrorKind::Parse, "budget outside [0, 2^40]");
    inst.budget = Cost(b);
  }

  inst.graph = MulticoloredGraph(std::move(g), inst.colors.size());
  inst.rebuild_counts();
  try {
    inst.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
  return inst;
}

inline Instance parse_instance_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::Parse, "invalid JSON");
  return parse_instance(j);
}

inline Json instance_to_json(const Instance& inst) {
  Json j;
  Json jg;
  jg["n"] = inst.vertex_count();
  Json edges = Json::array();
  for (auto [a, b] : inst.graph.graph.edges()) edges.push_back(Json::array({a, b}));
  jg["edges"] = std::move(edges);
  j["graph"] = std::move(jg);
  if (inst.planar) j["planar"] = true;
  Json colors = Json::array();
  for (const auto& c : inst.colors.colors) {
    Json jc;
    jc["name"] = c.name;
    jc["kind"] = c.kind == ColorKind::Main ? "main"
                 : c.kind == ColorKind::Facility ? "facility"
                                                 : "obnoxious";
    colors.push_back(std::move(jc));
  }
  j["colors"] = std::move(colors);
  Json pebbles = Json::array();
  for (const auto& p : inst.pebbles) {
    Json jp;
    jp["id"] = p.id;
    jp["color"] = inst.colors.name(p.color);
    jp["at"] = p.initial_vertex;
    Json jc;
    if (std::holds_alternative<DistanceCost>(p.cost)) {
      jc["kind"] = "distance";
    } else if (const auto* s = std::get_if<StepsCost>(&p.cost)) {
      jc["kind"] = "steps";
      jc["max"] = s->max_steps;
    } else if (std::holds_alternative<MovedCost>(p.cost)) {
      jc["kind"] = "moved";
    } else {
      const auto& t = std::get<TableCost>(p.cost);
      jc["kind"] = "table";
      Json vals = Json::array();
      for (Cost c : t.values) {
        if (c.is_inf())
          vals.push_back(nullptr);
        else
          vals.push_back(c.value());
      }
      jc["values"] = std::move(vals);
    }
    jp["cost"] = std::move(jc);
    pebbles.push_back(std::move(jp));
  }
  j["pebbles"] = std::move(pebbles);
  Json jprob;
  jprob["name"] = inst.problem.name;
  Json params = Json::object();
  for (const auto& key : detail::problem_param_keys(inst.problem.name)) {
    if (key == "edges") {
      Json pe = Json::array();
      for (auto [a, b] : inst.problem.pattern_edges) pe.push_back(Json::array({a, b}));
      params["edges"] = std::move(pe);
    } else {
      params[key] = inst.problem.param(key, 0);
    }
  }
  jprob["params"] = std::move(params);
  j["problem"] = std::move(jprob);
  j["l"] = inst.max_solution_size;
  if (inst.budget) j["budget"] = inst.budget->value();
  return j;
}

inline std::string instance_to_text(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write instance file: " + path);
  out << instance_to_text(inst);
}

}  // namespace movekit
