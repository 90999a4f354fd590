#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"

using namespace possalloc;
namespace fs = std::filesystem;

namespace {

const char* kModel = R"({
  "w0": 100, "r": 0, "k": 0.1, "mu": 1,
  "risk": {"kind": "triangular", "a": 0, "alpha": 2, "beta": 2},
  "utility": {"family": "crra", "a": 0.5},
  "operator": "T1"
})";

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string write_config(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "possalloc_cli_tests";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

std::string config(const std::string& name, const std::string& model, const std::string& extra = "") {
  return write_config(name, "{\"model\": " + model + (extra.empty() ? "" : ", " + extra) + "}");
}

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

TEST_CASE("moments command") {
  const auto path = config("moments.json",
                           R"({"w0": 100, "risk": {"kind":"triangular","a":0,"alpha":3,"beta":3},
                               "utility": {"family":"crra","a":0.5}, "operator":"T1"})");
  const auto r = run({"moments", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Var_T") != std::string::npos);
  CHECK(r.out.find("1.5") != std::string::npos);
  CHECK(r.out.find("max |quadrature - closed form|") != std::string::npos);

  const auto doc = json::parse(run({"moments", path, "--format", "document"}).out);
  CHECK(doc.at("max_discrepancy").get<double>() < 1e-8);
  CHECK(std::abs(doc.at("quadrature").at("skewness").get<double>()) < 1e-12);

  const auto tab = config("tab.json",
                          R"({"w0": 100, "risk": {"kind":"tabulated","gamma":[0,1],"a1":[-1,0],"a2":[1,0]},
                              "utility": {"family":"crra","a":0.5}, "operator":"T1"})");
  const auto t = run({"moments", tab});
  CHECK(t.code == 0);
  CHECK(t.out.find("n/a") != std::string::npos);

  const auto crisp = config("crisp.json",
                            R"({"w0": 100, "risk": {"kind":"triangular","a":0,"alpha":0,"beta":0},
                                "utility": {"family":"crra","a":0.5}, "operator":"T2"})");
  const auto c = json::parse(run({"moments", crisp, "--format", "document"}).out);
  for (const char* key : {"variance", "skewness", "kurtosis"}) {
    CHECK(c.at("quadrature").at(key).get<double>() == 0.0);
  }
}

TEST_CASE("allocate command") {
  const auto path = config("alloc.json", kModel);
  const auto r = run({"allocate", path});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  const auto order2 = std::find_if(rows.begin(), rows.end(),
                                   [](const std::string& l) { return l.rfind("order2", 0) == 0; });
  REQUIRE(order2 != rows.end());
  CHECK(order2->find(" 30 ") != std::string::npos);
  CHECK(r.out.find("order3") != std::string::npos);
  CHECK(r.out.find("oracle") != std::string::npos);

  const auto only2 = run({"allocate", path, "--order", "2"});
  CHECK(only2.out.find("order3") == std::string::npos);

  const auto verbose = run({"allocate", path, "--verbose"});
  CHECK(verbose.out.find("F6") != std::string::npos);
  CHECK(verbose.out.find("alpha'''(0)") != std::string::npos);

  const auto tiny = run({"allocate", path, "--k", "1e-4", "--format", "csv"});
  REQUIRE(tiny.code == 0);
  const auto csv = lines(tiny.out);
  REQUIRE(csv.size() == 4);
  const double a2 = std::stod(split(csv[1])[1]);
  const double a3 = std::stod(split(csv[2])[1]);
  const double ao = std::stod(split(csv[3])[1]);
  CHECK(std::abs(a2 - ao) / ao < 5e-6);
  CHECK(std::abs(a3 - ao) / ao < 5e-6);
}

TEST_CASE("allocate reports oracle and domain failures per row") {
  // optimum pushed past the domain edge: approximations still print
  const auto path = config("edge.json", kModel);
  const auto r = run({"allocate", path, "--k", "0.6"});
  CHECK(r.code == 0);
  CHECK(r.out.find("oracle failed") != std::string::npos);
  CHECK(r.out.find("support endpoint x=-2") != std::string::npos);
  CHECK(r.err.find("outside [0, w0") != std::string::npos);

  const auto zero = run({"allocate", path, "--k", "0"});
  CHECK(zero.code == cli::kExitConfig);
}

TEST_CASE("sweep command") {
  const auto path = config("sweep.json", kModel);
  const auto r = run({"sweep", path, "--k-min", "0.05", "--k-max", "0.25", "--steps", "5"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "k,alpha_order2,alpha_order3,alpha_oracle,err2,err3");
  CHECK(r.out.find('\r') == std::string::npos);
  // the last k has no interior optimum: empty oracle cells
  const auto last = split(rows[5]);
  REQUIRE(last.size() == 6);
  CHECK(last[3].empty());
  CHECK(last[4].empty());
  CHECK(r.err.find("crossover") != std::string::npos);

  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const auto c = split(rows[i]);
    CHECK(std::stod(c[5]) <= std::stod(c[4]));
  }

  const auto again = run({"sweep", path, "--k-min", "0.05", "--k-max", "0.25", "--steps", "5"});
  CHECK(again.out == r.out);

  const auto from_zero = run({"sweep", path, "--k-min", "0", "--k-max", "0.1", "--steps", "3"});
  const auto first = split(lines(from_zero.out)[1]);
  CHECK(std::stod(first[0]) == 0.0);
  CHECK(std::stod(first[1]) == 0.0);
  CHECK(std::stod(first[2]) == 0.0);
  CHECK(std::stod(first[3]) == 0.0);

  CHECK(run({"sweep", path, "--steps", "1"}).code == cli::kExitConfig);
  CHECK(run({"sweep", path, "--k-min", "-1"}).code == cli::kExitConfig);
}

TEST_CASE("flags override the config file") {
  const auto path = config("precedence.json", kModel, R"("order": 2, "format": "csv")");
  const auto file = run({"allocate", path});
  CHECK(file.out.rfind("method,alpha", 0) == 0);
  CHECK(file.out.find("order3") == std::string::npos);
  const auto flags = run({"allocate", path, "--order", "3", "--format", "table"});
  CHECK(flags.out.find("order3") != std::string::npos);
  CHECK(flags.out.rfind("k = 0.1", 0) == 0);

  const auto cfg = cli::load_config(cli::Command::allocate, path, {});
  CHECK(cfg.order == 2);
  cli::Overrides o;
  o.nodes = 16;
  o.k = 0.2;
  const auto overridden = cli::load_config(cli::Command::allocate, path, o);
  CHECK(overridden.model->op().quadrature().outer_nodes == 16);
  CHECK(overridden.model->k() == 0.2);
}

TEST_CASE("verify command") {
  const auto suite = run({"verify"});
  CHECK(suite.code == 0);
  CHECK(suite.out.find("FAIL") == std::string::npos);

  const auto good = config("good.json", kModel);
  CHECK(run({"verify", good}).code == 0);

  const auto broken = config("broken.json",
                             R"({"w0": 100, "k": 0.1, "risk": {"kind":"triangular","a":0,"alpha":2,"beta":2},
                                 "utility": {"family":"crra","a":0.5}, "operator":"T1",
                                 "weighting": {"kind":"power","scale":3,"exponent":1}})");
  const auto b = run({"verify", broken, "--format", "document"});
  CHECK(b.code == cli::kExitFailure);
  const auto doc = json::parse(b.out);
  const auto& checks = doc.at(0).at("checks");
  const auto weighting = std::find_if(checks.begin(), checks.end(),
                                      [](const json& c) { return c.at("name") == "weighting"; });
  REQUIRE(weighting != checks.end());
  CHECK_FALSE(weighting->at("passed").get<bool>());
  CHECK(weighting->at("residual").get<double>() == Catch::Approx(0.5).margin(1e-9));

  const auto convex = config("convex.json",
                             R"({"w0": 100, "k": 0.1, "risk": {"kind":"triangular","a":0,"alpha":2,"beta":2},
                                 "utility": {"family":"polynomial","coefficients":[0,1,0.01]},
                                 "operator":"T1"})");
  const auto c = run({"verify", convex});
  CHECK(c.code == cli::kExitFailure);
  const auto out = lines(c.out);
  CHECK(std::any_of(out.begin(), out.end(), [](const std::string& l) {
    return l.rfind("FAIL", 0) == 0 && l.find("model/concavity") != std::string::npos;
  }));
}

TEST_CASE("errors and exit codes") {
  CHECK(run({"allocate", "/nonexistent/config.json"}).code == cli::kExitConfig);
  CHECK(run({}).code == cli::kExitConfig);
  CHECK(run({"frobnicate"}).code == cli::kExitConfig);

  const auto bad = write_config("syntax.json", "{\"model\": {\n  \"w0\": ,\n}}");
  const auto r = run({"moments", bad});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("line") != std::string::npos);

  const auto missing = config("missing.json", R"({"w0": 100, "utility": {"family":"crra","a":0.5}})");
  const auto m = run({"moments", missing});
  CHECK(m.code == cli::kExitConfig);
  CHECK(m.err.find("model.risk") != std::string::npos);

  const auto help = run({"--help"});
  CHECK(help.code == 0);
}
