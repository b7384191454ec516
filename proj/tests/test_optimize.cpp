#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dnnsolve/catalog.hpp"
#include "dnnsolve/optimize.hpp"
#include "dnnsolve/rng.hpp"

using namespace dnnsolve;

namespace {

double inf_norm(std::span<const double> g) {
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("BFGS on a 10-dimensional quadratic") {
  // f = 0.5 x^T A x - c^T x with A = diag(1..10) plus a rank-one coupling.
  const int n = 10;
  std::vector<double> diag(n), u(n), c(n);
  for (int i = 0; i < n; ++i) {
    diag[static_cast<std::size_t>(i)] = i + 1.0;
    u[static_cast<std::size_t>(i)] = 0.3 * std::sin(i + 1.0);
    c[static_cast<std::size_t>(i)] = std::cos(2.0 * i);
  }
  FlatObjective f = [&](std::span<const double> x, std::span<double> g) {
    double ux = 0.0;
    for (int i = 0; i < n; ++i) ux += u[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    double v = 0.5 * ux * ux;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      v += 0.5 * diag[k] * x[k] * x[k] - c[k] * x[k];
      g[k] = diag[k] * x[k] + ux * u[k] - c[k];
    }
    return v;
  };
  std::vector<double> x(n, 1.0);
  BfgsConfig cfg;
  cfg.grad_tol_inf = 1e-10;
  const BfgsResult r = bfgs_minimize(f, x, cfg);
  std::vector<double> g(n);
  f(x, g);
  CHECK(r.stop_reason == "converged");
  CHECK(r.iters <= 30);
  CHECK(inf_norm(g) < 1e-10);
}

TEST_CASE("BFGS on Rosenbrock") {
  FlatObjective f = [](std::span<const double> x, std::span<double> g) {
    const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2.0 * a - 400.0 * x[0] * b;
    g[1] = 200.0 * b;
    return a * a + 100.0 * b * b;
  };
  std::vector<double> x = {-1.2, 1.0};
  const BfgsResult r = bfgs_minimize(f, x, BfgsConfig{});
  CHECK(std::abs(x[0] - 1.0) < 1e-6);
  CHECK(std::abs(x[1] - 1.0) < 1e-6);
  CHECK(r.f < 1e-12);
}

TEST_CASE("zero iteration cap leaves the point alone") {
  FlatObjective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * x[0];
    return x[0] * x[0];
  };
  std::vector<double> x = {3.0};
  BfgsConfig cfg;
  cfg.max_iters = 0;
  const BfgsResult r = bfgs_minimize(f, x, cfg);
  CHECK(x[0] == 3.0);
  CHECK(r.iters == 0);
  CHECK(r.stop_reason == "max_iters");
}

TEST_CASE("plateau schedule halves after the patience window") {
  PlateauSchedule s(0.1, PlateauConfig{});
  CHECK(s.observe(1.0) == 0.1);
  for (int i = 0; i < 29; ++i) CHECK(s.observe(1.0 - 1e-6 * i) == 0.1);
  CHECK(s.observe(0.99995) == doctest::Approx(0.05));
  // A real improvement resets the counter.
  CHECK(s.observe(0.5) == doctest::Approx(0.05));
  for (int i = 0; i < 29; ++i) s.observe(0.5);
  CHECK(s.observe(0.5) == doctest::Approx(0.025));

  PlateauSchedule floor(4e-6, PlateauConfig{});
  for (int i = 0; i < 200; ++i) floor.observe(1.0);
  CHECK(floor.lr() == doctest::Approx(1e-6));
}

TEST_CASE("ADAM step follows the bias-corrected update") {
  AdamConfig cfg;
  Adam a(1, cfg);
  std::vector<double> x = {1.0};
  const std::vector<double> g = {0.5};
  a.step(x, g, 0.1);
  // First step moves by lr * g / |g| up to eps.
  CHECK(x[0] == doctest::Approx(0.9).epsilon(1e-7));
  a.step(x, g, 0.1);
  CHECK(x[0] == doctest::Approx(0.8).epsilon(1e-7));
  CHECK(a.steps() == 2);
}

TEST_CASE("ADAM epochs lower the loss and are reproducible") {
  const BenchmarkCase c = get_case("B.2");
  const CollocationSet pts = sample(c.spec, {400, 0, 1}, 0);
  Objective obj(c.spec, pts, c.defaults.alphas);
  AdamConfig cfg;
  cfg.epochs = 20;
  NetParams a = init_params(10, 1, 1, c.spec.domain.extents, 0), b = a;
  const double before = obj.loss(a).total;
  const AdamResult ra = train_adam(a, obj, cfg, 0);
  train_adam(b, obj, cfg, 0);
  CHECK(ra.epochs_run == 20);
  CHECK(ra.trace.back().loss < before);
  CHECK(a.flatten() == b.flatten());
}
