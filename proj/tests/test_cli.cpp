#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"

using namespace surfrep::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  args.push_back("--json");
  const Run r = run(args);
  REQUIRE(r.code == 0);
  return Json::parse(r.out);
}

std::string config(const std::string& name) { return std::string(SURFREP_CONFIG_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(SURFREP_TEST_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("fox prints the commutator derivatives") {
  const Json r = run_json({"fox", "x1*x2*x1^-1*x2^-1", "--n", "2"});
  CHECK(r["result"]["derivatives"][0]["derivative"] == "-x1^-1*x2^-1 + x2*x1^-1*x2^-1");
  CHECK(r["result"]["derivatives"][1]["derivative"] == "x1^-1*x2^-1 - x2^-1");
  CHECK(r["checks"][0]["passed"] == true);
}

TEST_CASE("fox of the empty word is zero") {
  const Json r = run_json({"fox", "", "--n", "3"});
  REQUIRE(r["result"]["derivatives"].size() == 3);
  for (const auto& d : r["result"]["derivatives"]) CHECK(d["derivative"] == "0");
}

TEST_CASE("input errors exit with code 3") {
  const Run bad_word = run({"fox", "x1*y2"});
  CHECK(bad_word.code == 3);
  CHECK(bad_word.err.find("position") != std::string::npos);
  CHECK(run({"fox", "x3", "--n", "2"}).code == 3);
  CHECK(run({"cohomology", "--rep", "torus:[0.1,0.2]"}).code == 3);
  CHECK(run({"cohomology", "--rep", "bogus:1"}).code == 3);
  CHECK(run({"cohomology", "--config", "/nonexistent.json"}).code == 3);
  CHECK(run({"cohomology", "--config", write_temp("broken.json", "{\"group\": ")}).code == 3);
  CHECK(run({"cohomology", "--tol-rank", "-1"}).code == 3);
  CHECK(run({"reduction", "so5"}).code == 3);
  CHECK(run({"nosuchcommand"}).code == 3);
  CHECK(run({"holonomy-check", "--config", config("cohomology_torus.json")}).code == 3);
}

TEST_CASE("cohomology at the three genus-2 strata") {
  struct Case {
    const char* rep;
    std::vector<int> h;
    const char* label;
  };
  for (const Case& c : {Case{"central:[+,+,+,+]", {3, 12, 3}, "G"}, Case{"torus:[0.7,1.1,2.3,0.4]", {1, 8, 1}, "(T)"},
                        Case{"random:42", {0, 6, 0}, "Z"}}) {
    const Json r = run_json({"cohomology", "--rep", c.rep});
    CHECK(r["result"]["h_dims"].get<std::vector<int>>() == c.h);
    CHECK(r["result"]["stratum"]["label"] == c.label);
  }
  const Json from_file = run_json({"cohomology", "--config", config("cohomology_torus.json")});
  CHECK(from_file["result"]["h_dims"].get<std::vector<int>>() == std::vector<int>{1, 8, 1});
}

TEST_CASE("off-variety representations are flagged") {
  const std::string path = write_temp("offvariety.json", R"({"group": "SU2", "genus": 1,
    "rep": [[[1, 0], [0, 1]], [[0, 1], [-1, 0]]], "central": "-I"})");
  const Run r = run({"cohomology", "--config", path, "--json"});
  CHECK(r.code == 2);
  const Json j = Json::parse(r.out);
  CHECK(j["result"]["on_variety"] == false);
  CHECK_FALSE(j["result"].contains("h_dims"));
}

TEST_CASE("explicit matrices for a twisted genus-1 representation") {
  const Json r = run_json({"cohomology", "--config", config("genus1_twisted.json")});
  CHECK(r["result"]["h_dims"].get<std::vector<int>>() == std::vector<int>{0, 0, 0});
}

TEST_CASE("cone span at the torus point") {
  const Json r = run_json({"cone-span", "--rep", "torus:[0.7,1.1,2.3,0.4]", "--samples", "40"});
  CHECK(r["result"]["cone"]["span_dim_h1"] == 8);
}

TEST_CASE("stratify counts central points and labels the strata") {
  const Json r = run_json({"stratify", "--config", config("stratify.json")});
  CHECK(r["result"]["central_points"] == 16);
  REQUIRE(r["result"]["points"].size() == 3);
  CHECK(r["result"]["points"][1]["stratum"]["fixed_subspace_dim"] == 4);
}

TEST_CASE("reduction models") {
  const Json so3 = run_json({"reduction", "so3", "--samples", "500", "--seed", "1"});
  CHECK(so3["result"]["zariski_dim"] == 10);
  CHECK(so3["result"]["relation_residual_max"].get<double>() < 1e-9);
  const Json so2 = run_json({"reduction", "so2"});
  CHECK(so2["result"]["zariski_dim"] == 3);
}

TEST_CASE("holonomy check from a config file") {
  const Json r = run_json({"holonomy-check", "--config", config("holonomy.json")});
  CHECK(r["result"]["fd_error"].get<double>() < 1e-6);
}

TEST_CASE("reports are deterministic") {
  const Run a = run({"genus2-su2-report", "--seed", "7", "--samples", "60", "--json"});
  const Run b = run({"genus2-su2-report", "--seed", "7", "--samples", "60", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Json j = Json::parse(a.out);
  CHECK(j["status"] == "ok");
  CHECK_FALSE(j.contains("wall_time_s"));
  const Run timed = run({"cone-span", "--rep", "random:3", "--samples", "20", "--json", "--timing"});
  CHECK(Json::parse(timed.out).contains("wall_time_s"));
}

TEST_CASE("plain-text table mirrors the report") {
  const Run r = run({"cohomology", "--rep", "torus:[0.7,1.1,2.3,0.4]"});
  CHECK(r.code == 0);
  CHECK(r.out.find("h_dims") != std::string::npos);
  CHECK(r.out.find("PASS duality_h0_h2") != std::string::npos);
  CHECK(r.out.find("status: ok") != std::string::npos);
}
