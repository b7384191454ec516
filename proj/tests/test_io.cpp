#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "doctest.h"
#include "json.hpp"
#include "dnnsolve/catalog.hpp"
#include "dnnsolve/loss.hpp"
#include "dnnsolve/problem_io.hpp"
#include "dnnsolve/report.hpp"
#include "dnnsolve/solve.hpp"

using namespace dnnsolve;
namespace fs = std::filesystem;

namespace {

const char* kHeat = R"({
  "id": "heat", "dims": 2, "outputs": 1,
  "domain": {"box": [[0, 1], [0, 1]]},
  "residual": [["-", ["u", 0, [1, 0]], ["*", 0.05, ["u", 0, [0, 2]]]]],
  "conditions": {
    "initial": [["-", ["u", 0], ["sin", ["*", 3, "pi", "x"]]]],
    "boundary": [{"faces": [[1, 0], [1, 1]], "residual": [["u", 0]]}]},
  "solution": [["*", ["sin", ["*", 3, "pi", "x"]], ["exp", ["*", -0.45, "pi", "pi", "t"]]]],
  "hyper": {"N": 10, "counts": {"bulk": 1000, "boundary": 200, "initial": 200},
            "alphas": {"alpha0": 10, "alpha_boundary": 1}, "adam_epochs": 210}
})";

double total_loss(const BenchmarkCase& c, std::uint64_t seed) {
  const ProblemSpec& s = c.spec;
  const CollocationSet pts = sample(s, {120, s.boundary.empty() ? 0 : 40, s.initial ? 20 : 0}, seed);
  Objective obj(s, pts, c.defaults.alphas);
  return obj.loss(checks::random_params(6, s.dims, s.outputs, s.domain.extents, seed)).total;
}

std::string strip_wall_time(const std::string& report) {
  auto j = nlohmann::ordered_json::parse(report);
  j.erase("wall_seconds");
  if (j.contains("comparison")) {
    for (auto& row : j["comparison"]) {
      if (row["column"] == "time") row.erase("run"), row.erase("delta");
    }
  }
  return j.dump();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("a file-defined problem matches the catalog case it spells out") {
  const BenchmarkCase f = problem_from_json(kHeat), c = get_case("C.4");
  CHECK(f.id == "heat");
  CHECK(f.defaults.neurons == 10);
  CHECK(f.defaults.alphas.alpha0 == 10.0);
  CHECK(total_loss(f, 3) == doctest::Approx(total_loss(c, 3)).epsilon(1e-12));
  for (double t : {0.0, 0.4, 0.9}) {
    const double x[2] = {t, 0.37};
    double a = 0.0, b = 0.0;
    f.analytic(x, &a);
    c.analytic(x, &b);
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
  }
  // Embedded trees survive export.
  const BenchmarkCase again = problem_from_json(problem_to_json(f));
  CHECK(total_loss(again, 4) == doctest::Approx(total_loss(f, 4)).epsilon(1e-14));
}

TEST_CASE("every catalog case round-trips through its file form") {
  for (const auto& id : list_cases()) {
    const BenchmarkCase c = get_case(id);
    const BenchmarkCase back = problem_from_json(problem_to_json(c));
    INFO(id);
    CHECK(back.id == c.id);
    CHECK(back.params == c.params);
    CHECK(back.defaults.neurons == c.defaults.neurons);
    CHECK(back.defaults.adam_epochs == c.defaults.adam_epochs);
    CHECK(back.defaults.counts.bulk == c.defaults.counts.bulk);
    CHECK(back.defaults.alphas.alpha_boundary == c.defaults.alphas.alpha_boundary);
  }
  const BenchmarkCase m = problem_from_json(R"({"residual": "B.10", "dims": 1, "outputs": 1, "params": {"m": 2}})");
  CHECK(m.params.at("m") == 2.0);
}

TEST_CASE("malformed problem files are rejected") {
  CHECK_THROWS_AS(problem_from_json("{"), ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"residual": "Z.1", "dims": 1, "outputs": 1})"), ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"id": "p", "dims": 1, "outputs": 1, "domain": {"box": [[0, 1]]},
                                        "residual": [["tan", ["u", 0]]]})"),
                  ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"id": "p", "dims": 1, "outputs": 1, "domain": {"box": [[0, 1]]},
                                        "residual": [["pow", "t", ["u", 0]]]})"),
                  ConfigError);
  CHECK_THROWS_AS(problem_from_json(R"({"id": "p", "dims": 1, "outputs": 1, "domain": {"box": [[0, 1]]},
                                        "residual": [["u", 0, [4]]]})"),
                  ConfigError);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), ConfigError);
}

TEST_CASE("reports are reproducible apart from wall time") {
  const BenchmarkCase c = get_case("B.5");
  SolveOptions opt;
  opt.seed = 2;
  opt.adam_epochs = 5;
  opt.bfgs_max_iters = 30;
  const TrainingReport a = solve(c, opt), b = solve(c, opt);
  CHECK(strip_wall_time(report_json(a, c)) == strip_wall_time(report_json(b, c)));
  opt.threads = 3;
  const TrainingReport t = solve(c, opt);
  CHECK(t.loss.total == a.loss.total);
  const auto j = nlohmann::json::parse(report_json(a, c));
  CHECK(j["case"] == "B.5");
  CHECK(j["epochs"]["adam"] == 5);
  CHECK(j["config"]["neurons"] == 35);
  const std::string trace = loss_trace_csv(a);
  CHECK(trace.rfind("epoch,loss,lr\n", 0) == 0);
}

#ifdef DNNSOLVE_CLI
TEST_CASE("command line exit codes and outputs") {
  const std::string cli = DNNSOLVE_CLI;
  const fs::path dir = fs::temp_directory_path() / "dnnsolve_cli_test";
  fs::remove_all(dir);
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > " + (dir / "stdout.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  fs::create_directories(dir);
  CHECK(run("solve --case X.9") == 2);
  CHECK(slurp(dir / "stdout.txt").find("B.10") != std::string::npos);
  CHECK(run("solve --case C.1 --neurons 0") == 2);
  CHECK(run("frobnicate") == 2);

  const fs::path out = dir / "c1";
  CHECK(run("solve --case C.1 --alpha0 10 --alphab 1 --adam-epochs 2 --bfgs-max-iters 3 --grid-dump --out " +
            out.string()) == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "checkpoint.json"));
  CHECK(fs::exists(out / "grid.csv"));
  const auto rep = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(rep["config"]["alpha0"] == 10.0);
  CHECK(rep["config"]["alpha_boundary"] == 1.0);
  CHECK(slurp(dir / "stdout.txt").rfind("C.1 log10(L)=", 0) == 0);

  const fs::path problem = dir / "heat.json";
  std::ofstream(problem) << kHeat;
  CHECK(run("solve --problem " + problem.string() + " --adam-epochs 1 --bfgs-max-iters 1 --out " + (dir / "heat").string()) == 0);

  CHECK(run("landscape --toy ho --grid omega=1:20:3,phi=0:0:1 --out " + (dir / "ho.csv").string()) == 0);
  std::ifstream ho(dir / "ho.csv");
  int rows = 0;
  for (std::string s; std::getline(ho, s);) ++rows;
  CHECK(rows == 4);
  CHECK(run("landscape --toy wave --grid wt=1:2:2,wx=1:2:2,wy=1:2:2 --out " + (dir / "w").string()) == 0);
  CHECK(fs::exists(dir / "w_bulk.csv"));
  CHECK(fs::exists(dir / "w_initial.csv"));
  CHECK(fs::exists(dir / "w_boundary.csv"));
  fs::remove_all(dir);
}
#endif
