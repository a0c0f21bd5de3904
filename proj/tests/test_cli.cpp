#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(MANIN_CLI_PATH) + " " + args + " 2> cli_stderr.txt";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

nlohmann::json json_file(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("validate --fan builtin:p2 --out v.json") == 0);
  CHECK(json_file("v.json")["ok"] == true);
  CHECK(run("frobnicate") == 64);
  CHECK(run("count --no-such-flag") == 64);
  {
    std::ofstream bad("bad_fan.json");
    bad << "{\"dim\": 1, \"rays\": [[1]";
  }
  CHECK(run("validate --fan bad_fan.json") == 65);
  {
    std::ofstream idx("bad_index.json");
    idx << R"({"dim": 1, "rays": [[1], [-1]], "maxCones": [[0], [5]]})";
  }
  CHECK(run("constants --fan bad_index.json") == 65);
  {
    std::ofstream half("half.json");
    half << R"({"dim": 1, "rays": [[1]], "maxCones": [[0]]})";
  }
  CHECK(run("validate --fan half.json --out h.json") == 2);
  CHECK(json_file("h.json")["ok"] == false);
  CHECK(run("constants --fan half.json") == 2);
}

TEST_CASE("constants") {
  REQUIRE(run("constants --fan builtin:p1 --pmax 100000 --out c.json") == 0);
  auto j = json_file("c.json");
  CHECK(j["alpha"] == "1/2");
  CHECK(j["rank"] == 1);
  CHECK(j["arch_volume"].get<double>() == 4.0);
  CHECK(std::fabs(j["theta"].get<double>() - 1.2158) < 1e-4);
  CHECK(j["tau"]["lo"].get<double>() <= j["tau"]["value"].get<double>());
  CHECK(j["config"]["pmax"].get<double>() == 100000.0);
}

TEST_CASE("count writes B,N,predicted,ratio") {
  REQUIRE(run("count --fan builtin:p1 --bounds 1e2 --out n.csv") == 0);
  std::istringstream in(slurp("n.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "B,N,predicted,ratio");
  CHECK(row.rfind("100,126,", 0) == 0);
  REQUIRE(run("count --fan builtin:p1xp1 --bounds 1e2,1e3,1e4 --format json --out n.json") == 0);
  auto j = json_file("n.json");
  CHECK(j["rows"][2]["N"] == 143748);
  CHECK(j.contains("fit"));
}

TEST_CASE("height") {
  REQUIRE(run("height --fan builtin:p1 --x 3/2 --out h1.json") == 0);
  auto j = json_file("h1.json");
  CHECK(j["exact"] == "9");
  CHECK(std::fabs(j["height"].get<double>() - 9.0) < 1e-12);
  CHECK(run("height --fan builtin:p2 --x 0,1") == 64);
  CHECK(run("height --fan builtin:p2 --x 1/2") == 64);
}

TEST_CASE("deterministic output and resolved config") {
  REQUIRE(run("count --fan builtin:p2 --bounds 1e3,1e4 --threads 1 --format json --out d1.json") == 0);
  REQUIRE(run("count --fan builtin:p2 --bounds 1e3,1e4 --threads 1 --format json --out d2.json") == 0);
  // identical apart from the echoed output path
  auto d1 = json_file("d1.json"), d2 = json_file("d2.json");
  CHECK(d1["config"]["out"] == "d1.json");
  d1["config"].erase("out");
  d2["config"].erase("out");
  CHECK(d1.dump() == d2.dump());
  CHECK(json_file("d1.json")["config"]["threads"] == 1);
  // thread count comes from the environment when --threads is absent
  REQUIRE(std::system((std::string("MANIN_TORIC_THREADS=2 ") + MANIN_CLI_PATH +
                       " count --fan builtin:p2 --bounds 1e3,1e4 --format json --out d3.json 2>/dev/null")
                          .c_str()) == 0);
  auto j3 = json_file("d3.json");
  CHECK(j3["config"]["threads"] == 2);
  CHECK(j3["rows"] == json_file("d1.json")["rows"]);
  CHECK(slurp("cli_stderr.txt").find("config:") != std::string::npos);
}

TEST_CASE("zeta and csv fallback") {
  REQUIRE(run("zeta --fan builtin:p1 --s 2 --B 1e4 --format csv --out z.csv") == 0);
  CHECK(slurp("z.csv").find("points,") != std::string::npos);
  CHECK(run("zeta --fan builtin:p1 --s 1") == 64);
}

TEST_CASE("fibration subcommands") {
  REQUIRE(run("fibration --n 2 --lambda-fiber rho --alpha-base 2 --B 300 --out f.json") == 0);
  auto j = json_file("f.json");
  CHECK(j["passed"] == true);
  CHECK(j["fibration"]["points"] == j["toric"]["points"]);
  REQUIRE(run("fibration constants --n 2 --pmax 100000 --out fc.json") == 0);
  auto c = json_file("fc.json");
  CHECK(c["fibration"]["alpha"] == "1/8");
  CHECK(c["toric"]["alpha"] == "1/8");
  CHECK(c["tau_overlap"] == true);
  CHECK(run("fibration --section x7") == 64);
}

TEST_CASE("tauber and bounds-sweep") {
  REQUIRE(run("tauber --oracle zeta --X 1000.5 --k 1 --T 1000 --out t.json") == 0);
  auto t = json_file("t.json");
  CHECK(t["N"] == 1000.0);
  CHECK(t["N_in_bracket"] == true);
  CHECK(run("tauber --oracle nothing") == 64);
  REQUIRE(run("bounds-sweep --kind plus --max-decade 3 --extra-decades 1 --out b.json") == 0);
  CHECK(json_file("b.json")["passed"] == true);
  CHECK(run("bounds-sweep --kind sideways") == 64);
}

TEST_CASE("poisson-check routes") {
  CHECK(run("poisson-check --fan builtin:p2") == 2);
  REQUIRE(run("poisson-check --fan builtin:p1 --B 1e5 --radius 60 --fourier-pmax 200 --tol 1e-3 --out p.json") == 0);
  auto j = json_file("p.json");
  CHECK(j["route"] == "direct");
  CHECK(j["passed"] == true);
}
