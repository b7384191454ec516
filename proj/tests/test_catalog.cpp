#include <set>

#include "checks.hpp"
#include "doctest.h"
#include "dnnsolve/catalog.hpp"

using namespace dnnsolve;

TEST_CASE("catalog lists ten, twelve and eleven cases") {
  CHECK(list_cases(1).size() == 10);
  CHECK(list_cases(2).size() == 12);
  CHECK(list_cases(3).size() == 11);
  CHECK(list_cases().size() == 33);
  CHECK_THROWS_AS(get_case("X.9"), ConfigError);
  CHECK_THROWS_AS(get_case("B.1", {{"zeta", 1.0}}), ConfigError);
}

TEST_CASE("closed-form solutions satisfy their corrected equations") {
  for (const auto& id : list_cases()) {
    const BenchmarkCase c = get_case(id);
    if (!c.analytic_taylor) continue;
    const auto g = checks::catalog_gate(c);
    INFO(id << " bulk " << g.max_bulk << " conditions " << g.max_condition);
    CHECK(g.max_bulk <= 1e-8);
    CHECK(g.max_condition <= 1e-10);
  }
}
