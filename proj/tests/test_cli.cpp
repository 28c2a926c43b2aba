#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "movekit/cli.hpp"
#include "test_helpers.hpp"

using namespace movekit;
using namespace movekit::build;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp_instance(const Instance& inst, const std::string& name) {
  std::string path = std::string("cli_test_") + name + ".json";
  save_instance(inst, path);
  return path;
}

}  // namespace

TEST_CASE("solve emits single-line json with stable keys") {
  ProblemSpec pr{"connectivity-collocated", {}, {}};
  Instance inst =
      instance(path(5), one_main(), {{"pebble", 0}, {"pebble", 2}, {"pebble", 4}}, pr, 3);
  std::string file = write_temp_instance(inst, "p5");
  auto r = run_cli({"solve", "--instance", file, "--solver", "convolution"});
  CHECK(r.code == 0);
  CHECK(r.out.find("{\"status\":\"optimal\",\"cost\":2,\"plan\":[") == 0);
  CHECK(r.out.find("\"seed\":0,\"trials\":0}") != std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);

  auto fpt = run_cli({"solve", "--instance", file, "--solver", "fpt", "--seed", "3"});
  CHECK(fpt.code == 0);
  CHECK(fpt.out.find("\"status\":\"optimal\",\"cost\":2,") != std::string::npos);
  std::remove(file.c_str());
}

TEST_CASE("max-steps objective reports the least feasible bound") {
  ProblemSpec pr{"connectivity-collocated", {}, {}};
  Instance inst =
      instance(path(5), one_main(), {{"pebble", 0}, {"pebble", 2}, {"pebble", 4}}, pr, 3);
  std::string file = write_temp_instance(inst, "msteps");
  auto r = run_cli({"solve", "--instance", file, "--solver", "oracle", "--objective",
                    "max-steps"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"status\":\"optimal\",\"cost\":1,") != std::string::npos);
  std::remove(file.c_str());
}

TEST_CASE("usage and limit errors map to exit codes") {
  auto usage = run_cli({"solve"});
  CHECK(usage.code == 2);
  CHECK(usage.err.find("instance") != std::string::npos);

  auto unknown = run_cli({"frobnicate"});
  CHECK(unknown.code == 2);

  auto missing = run_cli({"solve", "--instance", "does_not_exist.json"});
  CHECK(missing.code == 2);

  // malformed file: the offending field is named
  {
    std::ofstream f("cli_bad.json");
    f << R"({"graph": {"n": 1, "edges": []}, "colors": [{"name":"a","kind":"main"}],
         "pebbles": [], "problem": {"name":"connectivity-distinct","params":{}},
         "l": 1, "mystery": true})";
  }
  auto bad = run_cli({"solve", "--instance", "cli_bad.json"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("mystery") != std::string::npos);
  std::remove("cli_bad.json");

  // oracle plan space blowup surfaces as exit 3
  ProblemSpec pr{"connectivity-collocated", {}, {}};
  std::vector<PebbleSpec> many(8, PebbleSpec{"pebble", 0});
  Instance big = instance(complete(10), one_main(), many, pr, 8);
  std::string file = write_temp_instance(big, "big");
  auto limit = run_cli({"solve", "--instance", file, "--solver", "oracle"});
  CHECK(limit.code == 3);
  std::remove(file.c_str());
}

TEST_CASE("infeasible instances exit with code 1") {
  Graph split(4);
  split.add_edge(0, 1);
  ProblemSpec pr{"connectivity-collocated", {}, {}};
  Instance inst = instance(split, one_main(), {{"pebble", 0}, {"pebble", 2}}, pr, 2);
  std::string file = write_temp_instance(inst, "inf");
  auto r = run_cli({"solve", "--instance", file});
  CHECK(r.code == 1);
  CHECK(r.out.find("\"status\":\"infeasible\"") != std::string::npos);
  std::remove(file.c_str());
}

TEST_CASE("auto solver picks per problem") {
  // connectivity-collocated -> convolution (trials stay 0)
  ProblemSpec pr{"connectivity-collocated", {}, {}};
  Instance conn = instance(path(3), one_main(), {{"pebble", 0}, {"pebble", 2}}, pr, 2);
  std::string file = write_temp_instance(conn, "auto1");
  auto r = run_cli({"solve", "--instance", file});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"trials\":0") != std::string::npos);
  std::remove(file.c_str());

  // dispersion -> oracle
  ProblemSpec dp{"dispersion", {}, {}};
  Instance disp = instance(path(3), one_main(),
                           {{"pebble", 0, StepsCost{1}}, {"pebble", 1, StepsCost{1}}}, dp, 2);
  file = write_temp_instance(disp, "auto2");
  r = run_cli({"solve", "--instance", file});
  CHECK(r.code == 0);
  std::remove(file.c_str());
}

TEST_CASE("gen commands emit loadable instances") {
  {
    std::ofstream f("cli_edges.txt");
    f << "3 3\n0 1\n1 2\n0 2\n";
  }
  auto csp = run_cli({"gen-csp", "--input", "cli_edges.txt", "--domain", "2", "--seed", "5"});
  CHECK(csp.code == 0);
  CHECK_NOTHROW(parse_instance_text(csp.out));

  auto fac = run_cli({"gen-domset-facility", "--input", "cli_edges.txt", "--k", "1", "--d", "1"});
  CHECK(fac.code == 0);
  Instance fi = parse_instance_text(fac.out);
  CHECK(fi.vertex_count() == 13);

  auto st = run_cli({"gen-domset-steiner", "--input", "cli_edges.txt", "--k", "1"});
  CHECK(st.code == 0);
  CHECK_NOTHROW(parse_instance_text(st.out));
  std::remove("cli_edges.txt");
}

TEST_CASE("patterns command lists catalogs") {
  auto r = run_cli({"patterns", "--problem", "matching", "--k", "4", "--l", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"patterns\":1") != std::string::npos);
  auto sep = run_cli({"patterns", "--problem", "separation", "--k", "2", "--l", "3", "--o", "1"});
  CHECK(sep.code == 0);
}

TEST_CASE("fixed-seed runs are byte-identical") {
  auto a = run_cli({"selftest", "--seed", "11", "--epsilon", "0.05"});
  auto b = run_cli({"selftest", "--seed", "11", "--epsilon", "0.05"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  ProblemSpec pr{"connectivity-collocated", {}, {}};
  Instance inst =
      instance(path(5), one_main(), {{"pebble", 0}, {"pebble", 2}, {"pebble", 4}}, pr, 3);
  std::string file = write_temp_instance(inst, "det");
  auto x = run_cli({"solve", "--instance", file, "--solver", "fpt", "--seed", "21"});
  auto y = run_cli({"solve", "--instance", file, "--solver", "fpt", "--seed", "21"});
  CHECK(x.out == y.out);
  std::remove(file.c_str());
}

TEST_CASE("oracle and fpt agree on the selftest corpus") {
  for (const auto& entry : selftest::corpus()) {
    if (!entry.run_fpt) continue;
    PatternCatalog cat = catalog_of(entry.instance);
    auto slow = oracle_solve(entry.instance, cat);
    auto fast = solve_fpt(entry.instance, cat, 0.01, 5);
    INFO(entry.name);
    REQUIRE(slow.status == fast.status);
    if (slow.status == SolveStatus::Optimal)
      CHECK(slow.solution->cost == fast.solution->cost);
  }
}
