#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "doctest.h"
#include "stratwave/config.hpp"
#include "stratwave/error.hpp"
#include "stratwave/runner.hpp"

using namespace stratwave;

namespace {

// ConfigInvalid message for a rejected document.
std::string rejection(const json& j) {
  try {
    parse_experiment(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  FAIL("config accepted");
  return "";
}

json dichotomy_doc() {
  return json::parse(R"({
    "experiment": "dichotomy",
    "model": {"symbol": {"kind": "kdv"}, "m": 3, "n": 1, "k": 1, "eta": 1.0},
    "grid": {"N": 16384, "L": 800},
    "solver": {"dt": 0.002, "T": 0.5},
    "window": [10, 150],
    "params": {"gamma": 3.0}
  })");
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("model round trip") {
  for (const char* name : {"ost", "gost:3", "bo_perturbed", "chen_lee", "dgbo_perturbed:0.25"}) {
    const Model m = preset(name, 0.7);
    const json j = model_to_json(m);
    json clean = j;
    clean.erase("alpha");
    const Model back = parse_model(clean);
    CHECK(model_to_json(back) == j);
  }
  const Model p = parse_model(json::parse(R"({"preset": "gost:2", "eta": 0.5})"));
  CHECK(p.params.k == 2);
  CHECK(p.params.eta == 0.5);
}

TEST_CASE("model errors carry JSON pointers") {
  auto msg = [](const char* text) {
    try {
      parse_model(json::parse(text), "/model");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigInvalid);
      return std::string(e.what());
    }
    FAIL("accepted");
    return std::string();
  };
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 3, "n": 5})"), "/model/n"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 3, "n": 5})"), "n != 5 + 4d"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 3, "n": 9})"), "/model/n"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 4, "n": 1})"), "/model/m"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "n": 1})"), "/model/m"));
  CHECK(contains(msg(R"({"symbol": {"kind": "ilw"}, "m": 3, "n": 1})"), "/model/symbol/kind"));
  CHECK(contains(msg(R"({"symbol": {"kind": "dgbo", "a": 1.5}, "m": 3, "n": 1})"), "/model/symbol/a"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 3, "n": 1, "eta": -1})"), "/model/eta"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 3, "n": 1, "colour": 1})"), "/model/colour"));
  CHECK(contains(msg(R"({"preset": "nope"})"), "/model/preset"));
  CHECK(contains(msg(R"({"symbol": {"kind": "kdv"}, "m": 3.5, "n": 1})"), "/model/m"));
}

TEST_CASE("grid, datum, solver and window parsing") {
  const Grid g = parse_grid_spec("N=1024,L=50");
  CHECK(g.size() == 1024);
  CHECK(g.half_length() == 50.0);
  CHECK_THROWS_AS(parse_grid_spec("N=1000,L=50"), Error);
  CHECK_THROWS_AS(parse_grid_spec("N=1024,Q=50"), Error);
  CHECK_THROWS_AS(parse_grid_spec("N=abc"), Error);

  for (const char* text : {R"({"kind": "algebraic", "gamma": 2.5, "c": 0.5})",
                           R"({"kind": "zero_mean_algebraic", "gamma": 3})",
                           R"({"kind": "gaussian", "sigma": 2, "amplitude": 0.1})",
                           R"({"kind": "growth", "gamma": 0.3, "C0": 0.01})"}) {
    const InitialDatum d = parse_datum(json::parse(text));
    CHECK(datum_to_json(parse_datum(datum_to_json(d))) == datum_to_json(d));
  }
  CHECK_THROWS_AS(parse_datum(json::parse(R"({"kind": "growth", "gamma": 0.7, "C0": 0.01})")), Error);
  CHECK_THROWS_AS(parse_datum(json::parse(R"({"kind": "triangle"})")), Error);

  const SolverConfig c = parse_solver(json::parse(R"({"dt": 0.01, "T": 2, "mode": "picard", "snapshots": [1, 2]})"));
  CHECK(c.mode == SolverMode::picard);
  CHECK(c.snapshot_times.size() == 2);
  CHECK(parse_solver(solver_to_json(c)).dt == c.dt);
  CHECK_THROWS_AS(parse_solver(json::parse(R"({"dt": 0.5, "T": 0.1})")), Error);
  CHECK_THROWS_AS(parse_solver(json::parse(R"({"snapshots": [3]})")), Error);
  CHECK_THROWS_AS(parse_solver(json::parse(R"({"mode": "rk4"})")), Error);

  CHECK(parse_window(json::parse("[20, 200]")).b == 200.0);
  CHECK(parse_window_spec("20,200").a == 20.0);
  CHECK_THROWS_AS(parse_window_spec("200,20"), Error);
  CHECK(parse_number_list("0.25,0.5,1").size() == 3);
  CHECK_THROWS_AS(parse_number_list("0.25,x"), Error);
}

TEST_CASE("experiment configs") {
  const ExperimentConfig c = parse_experiment(dichotomy_doc());
  CHECK(c.kind == ExperimentKind::dichotomy);
  CHECK(c.setup.grid.size() == 16384);
  CHECK(c.setup.dt == 0.002);
  CHECK(c.setup.window.a == 10.0);
  CHECK(c.raw == dichotomy_doc());
  for (ExperimentKind k : {ExperimentKind::dichotomy, ExperimentKind::weighted, ExperimentKind::growth,
                           ExperimentKind::lowerbound, ExperimentKind::energy}) {
    CHECK(parse_experiment_kind(to_string(k)) == k);
  }
}

TEST_CASE("experiment config rejections") {
  json j = dichotomy_doc();
  j["model"]["n"] = 5;
  const std::string n5 = rejection(j);
  CHECK(contains(n5, "/model/n"));
  CHECK(contains(n5, "n != 5 + 4d"));

  j = dichotomy_doc();
  j["experiment"] = "sweep";
  CHECK(contains(rejection(j), "/experiment"));

  j = dichotomy_doc();
  j.erase("model");
  CHECK(contains(rejection(j), "/model"));

  j = dichotomy_doc();
  j["window"] = {10, 500};
  CHECK(contains(rejection(j), "/window"));

  j = dichotomy_doc();
  j["params"]["gamma"] = 2.0;
  CHECK(contains(rejection(j), "/params/gamma"));

  j = dichotomy_doc();
  j["params"]["bogus"] = 1;
  CHECK(contains(rejection(j), "/params/bogus"));

  j = dichotomy_doc();
  j["extra"] = true;
  CHECK(contains(rejection(j), "/extra"));

  j = dichotomy_doc();
  j["seed"] = -3;
  CHECK(contains(rejection(j), "/seed"));

  j = dichotomy_doc();
  j["experiment"] = "weighted";
  j["params"] = {{"p", 2.0}, {"gamma", 0.5}};
  CHECK(contains(rejection(j), "/datum"));

  j = dichotomy_doc();
  j["experiment"] = "lowerbound";
  j["params"] = {{"windows", {{10, 60}, {60, 1000}}}};
  CHECK(contains(rejection(j), "/params/windows/1"));
}

TEST_CASE("excluded parameters are caught before any compute") {
  json j = dichotomy_doc();
  j["model"] = {{"preset", "chen_lee"}};
  try {
    parse_experiment(j);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExcludedParameters);
  }
}

TEST_CASE("run_experiment report") {
  const ExperimentOutcome o = run_experiment(parse_experiment(dichotomy_doc()));
  CHECK(o.passed);
  CHECK(o.report["passed"] == true);
  CHECK(o.report.contains("exponent_nonzero_mean"));
  CHECK(o.report.contains("exponent_zero_mean"));
  CHECK(o.report["experiment"] == "dichotomy");

  json g = dichotomy_doc();
  g["experiment"] = "growth";
  g["params"] = {{"gamma", 0.3}, {"C0", 0.01}, {"snapshots", 2}};
  const ExperimentOutcome go = run_experiment(parse_experiment(g));
  CHECK(go.passed);
  CHECK(go.report["envelopes"].size() == 3);
}

TEST_CASE("suites and criteria") {
  CHECK(criterion_ids().size() == 18);
  CHECK(is_known_criterion("K-TAIL-1"));
  CHECK_FALSE(is_known_criterion("K-TAIL-3"));

  const auto dir = std::filesystem::temp_directory_path() / ("stratwave-suite-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.txt") << "# kernel checks\nK-MASS\n  K-SEMI  # semigroup\n\n";
  std::ofstream(dir / "b.json") << R"({"criteria": ["CL-GUARD", "XYZ"]})";
  std::ofstream(dir / "c.json") << R"({"criteria": [1]})";
  CHECK(read_suite((dir / "a.txt").string()) == std::vector<std::string>{"K-MASS", "K-SEMI"});
  CHECK(read_suite((dir / "b.json").string()) == std::vector<std::string>{"CL-GUARD", "XYZ"});
  CHECK_THROWS_AS(read_suite((dir / "c.json").string()), Error);
  CHECK_THROWS_AS(read_suite((dir / "missing").string()), Error);
  std::filesystem::remove_all(dir);

  const AcceptanceSummary s = run_acceptance({"CL-GUARD", "XYZ", "K-MOD-EVEN"}, 2);
  REQUIRE(s.results.size() == 3);
  CHECK(s.results[0].status == "pass");
  CHECK(s.results[1].status == "skipped");
  CHECK(s.results[2].status == "pass");
  CHECK_FALSE(s.all_passed());
  const json sj = summary_to_json(s);
  CHECK(sj["criteria"].size() == 3);
  CHECK(sj["criteria"][1]["status"] == "skipped");
  CHECK(contains(format_table(s), "2 passed"));
}
