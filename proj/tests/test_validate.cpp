#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dnnsolve/catalog.hpp"
#include "dnnsolve/oracles.hpp"
#include "dnnsolve/validate.hpp"

using namespace dnnsolve;

TEST_CASE("RK4 oracle reproduces closed forms") {
  for (const char* id : {"B.2", "B.7", "B.9"}) {
    const BenchmarkCase c = get_case(id);
    const OdeSolution s = ode_oracle(c);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double t = c.spec.domain.extents[0].first + (c.spec.domain.extents[0].second - c.spec.domain.extents[0].first) * i / 1000.0;
      double u = 0.0;
      c.analytic(&t, &u);
      worst = std::max(worst, std::abs(s(t) - u));
    }
    INFO(id);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("delay oracle on the first interval") {
  // With history t - 1 the first unit interval is u' - u/2 = 2 - t.
  const OdeSolution s = ode_oracle(get_case("B.6"));
  for (double t : {0.1, 0.5, 0.9, 1.0}) CHECK(s(t) == doctest::Approx(std::exp(0.5 * t) + 2 * t).epsilon(1e-10));
  CHECK(s.slope(0.5) == doctest::Approx(0.5 * std::exp(0.25) + 2).epsilon(1e-10));
}

TEST_CASE("oracle rejects boundary value problems") {
  CHECK_THROWS_AS(ode_oracle(get_case("B.10")), ConfigError);
}

TEST_CASE("grid solver without advection matches the heat kernel") {
  BurgersConfig cfg;
  cfg.advection = false;
  cfg.nu = 0.1;
  cfg.nx = 256;
  cfg.nt = 512;
  cfg.initial = [](double x) { return std::sin(std::numbers::pi * x); };
  const BurgersSolution s = burgers_oracle(cfg);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (double t : {0.25, 1.0}) {
    for (double x : {0.1, 0.5, 0.8}) {
      CHECK(s(t, x) == doctest::Approx(std::exp(-0.1 * pi2 * t) * std::sin(std::numbers::pi * x)).epsilon(1e-4));
    }
  }
}

TEST_CASE("disk oracle with a constant source") {
  // Laplacian of r^2 is 4; boundary value 1 on the unit circle.
  DiskPoissonConfig cfg;
  cfg.boundary_value = 1.0;
  const DiskPoisson s([](double, double) { return 4.0; }, cfg);
  for (auto [t, x] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.3, -0.4}, {-0.7, 0.1}, {0.05, 0.9}}) {
    CHECK(std::abs(s(t, x) - (t * t + x * x)) <= 1e-10);
  }
}

TEST_CASE("disk oracle with an angular mode") {
  // u = (1 - r^2) t has Laplacian -8 t and vanishes on the circle.
  const DiskPoisson s([](double t, double) { return -8.0 * t; });
  for (auto [t, x] : std::vector<std::pair<double, double>>{{0.02, 0.0}, {0.3, -0.4}, {-0.7, 0.1}, {0.05, 0.9}}) {
    CHECK(std::abs(s(t, x) - (1.0 - t * t - x * x) * t) <= 1e-10);
  }
}

TEST_CASE("evaluation grids") {
  CHECK(eval_grid(get_case("B.1").spec.domain).size() == 200);
  CHECK(eval_grid(get_case("C.4").spec.domain).size() == 2500);
  CHECK(eval_grid(get_case("D.4").spec.domain).size() == 27000);
  const auto disk = eval_grid(get_case("C.11").spec.domain);
  CHECK(disk.size() < 2500);
  CHECK(disk.size() > 1800);
  for (const auto& p : disk) CHECK(std::hypot(p[0], p[1]) <= 1.0 + 1e-12);
}

TEST_CASE("reference selection") {
  CHECK(reference_for(get_case("B.3")).source == "analytic");
  CHECK(reference_for(get_case("B.6")).source == "ode_oracle");
  CHECK(reference_for(get_case("B.1")).source == "ode_oracle");
  CHECK(has_reference(get_case("C.10")));
}

TEST_CASE("comparison against the published row") {
  const BenchmarkCase c = get_case("B.3");
  RunSummary run;
  run.seconds = 12.0;
  run.epochs = 500;
  run.L = 1e-5;
  run.L_bulk = 1e-5;
  run.L_initial = 1e-12;
  run.r = 1e-6;
  const auto rows = compare_report(run, c);
  bool saw_r = false;
  for (const auto& r : rows) {
    if (r.column == "L") CHECK(*r.delta == doctest::Approx(-5.0 - *c.reference.L));
    if (r.column == "r") {
      saw_r = true;
      CHECK(*r.run == doctest::Approx(-6.0));
      CHECK(*r.delta == doctest::Approx(-6.0 - *c.reference.r));
    }
  }
  CHECK(saw_r);
}
