#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;

namespace {

const std::string kConfigs = LGTK_CONFIG_DIR;

struct Run {
  int status = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lgtk");
  std::ostringstream out, err;
  Run r;
  r.status = lgtk::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("secondary of the four-point interval is a quadrilateral") {
  const auto r = run({"secondary", kConfigs + "/interval4.json"});
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["polytope"]["dim"] == 2);
  CHECK(j["polytope"]["vertices"].size() == 4);
  CHECK(j["triangulations"].size() == 4);
  CHECK(j["triangulations"][0]["cells"][0]["vertices"] == json({0, 1}));

  const auto off = run({"secondary", kConfigs + "/interval4.json", "--format", "off"});
  CHECK(off.out.rfind("OFF\n4 1 4\n", 0) == 0);
}

TEST_CASE("E2 commands") {
  auto r = run({"mpp", kConfigs + "/e2.json", "--sharpen", "0"});
  REQUIRE(r.status == 0);
  auto j = json::parse(r.out);
  CHECK(j["polytope"]["vertices"].size() == 36);
  CHECK(j["paths"].size() == 36);

  // 36 vertices, 54 edges, 20 facets.
  r = run({"mpp", kConfigs + "/e2.json", "--sharpen", "0", "--format", "off"});
  CHECK(r.out.rfind("OFF\n36 20 54\n", 0) == 0);

  r = run({"triangulations", kConfigs + "/e2.json"});
  CHECK(json::parse(r.out)["count"] == 32);

  r = run({"secondary", kConfigs + "/e2.json", "--format", "off"});
  CHECK(r.status == 2);
  CHECK(r.err.find("dimension") != std::string::npos);
}

TEST_CASE("lafforgue labels interval facets") {
  const auto r = run({"lafforgue", kConfigs + "/interval4.json", "--faces"});
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["facets"].size() == 8);
  CHECK(j["polytope"]["f_vector"] == json({1, 12, 18, 8, 1}));
}

TEST_CASE("an subcommands") {
  const auto a = run({"an", "tree", "--n", "7", "--J", "2,4"});
  const auto b = run({"an", "tree", "--n", "7", "--J", "2,4"});
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j["J"] == json({1, 2, 4, 8}));
  CHECK(j["stage_edge_counts"] == json({1, 2, 4}));

  const auto dot = run({"an", "tree", "--n", "3", "--format", "dot"});
  CHECK(dot.out.rfind("graph", 0) == 0);
  const auto q = json::parse(run({"an", "quiver", "--n", "3", "--J", "2"}).out);
  CHECK(q["arrows"].size() == 2);
  const auto p = json::parse(run({"an", "perversity", "--n", "3", "--J", "2"}).out);
  CHECK(p["strong_shifted"] == true);
}

TEST_CASE("monodromy command") {
  auto r = run({"monodromy", "--n", "4", "--J", "3", "--seed", "2"});
  REQUIRE(r.status == 0);
  auto j = json::parse(r.out);
  CHECK(j["match"] == true);
  CHECK(j["stages"].size() == 2);
  CHECK(j["numeric_tree"].size() == 4);

  r = run({"monodromy", "--n", "3", "--trials", "5"});
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["matched"] == 5);

  r = run({"monodromy", "--n", "3", "--J", "2", "--s", "0.9"});
  CHECK(r.status == 3);
  CHECK(r.err.find("numeric failure") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run({}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  CHECK(run({"secondary", "/nonexistent.json"}).status == 2);
  CHECK(run({"an", "tree", "--n", "3", "--J", "7"}).status == 2);
  CHECK(run({"mpp", kConfigs + "/e2.json", "--sharpen", "9"}).status == 2);

  const std::string bad = "lgtk_cli_test_bad.json";
  std::ofstream(bad) << "{\"points\": [[0, 1], [2]]}";
  CHECK(run({"secondary", bad}).status == 2);
  std::ofstream(bad) << "{not json";
  CHECK(run({"secondary", bad}).status == 2);
  std::remove(bad.c_str());
}

TEST_CASE("output file") {
  const std::string path = "lgtk_cli_test_out.json";
  REQUIRE(run({"-o", path, "an", "quiver", "--n", "2"}).status == 0);
  std::ifstream in(path);
  CHECK(json::parse(in)["n"] == 2);
  std::remove(path.c_str());
}
