#include <cmath>
#include <vector>

#include "doctest.h"
#include "dnnsolve/catalog.hpp"
#include "dnnsolve/problem.hpp"

using namespace dnnsolve;

TEST_CASE("box sampling: counts, faces and normals") {
  const Domain d = Domain::box({{0.0, 1.0}, {-1.0, 3.0}});
  const std::vector<Face> faces = {{1, 0}, {1, 1}, {0, 1}};
  const CollocationSet s = sample(d, faces, {500, 90, 40}, 1);
  CHECK(s.bulk.size() == 500);
  CHECK(s.boundary.size() == 90);
  CHECK(s.initial.size() == 40);
  for (const auto& p : s.bulk) CHECK(d.contains(std::span<const double>(p.x.data(), 2)));
  for (const auto& p : s.initial) {
    CHECK(p.x[0] == 0.0);
    CHECK(p.normal[0] == -1.0);
  }
  // Measures 1, 1, 4: the last face gets two thirds of the points.
  std::vector<int> per(3);
  for (const auto& p : s.boundary) {
    const Face f = faces[static_cast<std::size_t>(p.term)];
    ++per[static_cast<std::size_t>(p.term)];
    const double edge = f.side ? d.extents[static_cast<std::size_t>(f.axis)].second : d.extents[static_cast<std::size_t>(f.axis)].first;
    CHECK(p.x[static_cast<std::size_t>(f.axis)] == edge);
    CHECK(p.normal[static_cast<std::size_t>(f.axis)] == (f.side ? 1.0 : -1.0));
  }
  CHECK(per == std::vector<int>{15, 15, 60});
}

TEST_CASE("disk sampling stays inside and puts boundary points on the circle") {
  const Domain d = Domain::disk({0.5, -0.2}, 2.0);
  const std::vector<Face> faces = {Face::circle()};
  const CollocationSet s = sample(d, faces, {400, 100, 0}, 9);
  for (const auto& p : s.bulk) CHECK(std::hypot(p.x[0] - 0.5, p.x[1] + 0.2) < 2.0);
  for (const auto& p : s.boundary) {
    CHECK(std::hypot(p.x[0] - 0.5, p.x[1] + 0.2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::hypot(p.normal[0], p.normal[1]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((p.x[0] - 0.5) * p.normal[0] + (p.x[1] + 0.2) * p.normal[1] > 0.0);
  }
  CHECK_THROWS_AS(sample(d, faces, {10, 10, 5}, 9), ConfigError);
}

TEST_CASE("sampling depends only on the seed") {
  const Domain d = Domain::box({{0.0, 1.0}, {0.0, 1.0}, {0.0, 2.0}});
  const auto a = sample(d, {}, {50, 50, 50}, 3), b = sample(d, {}, {50, 50, 50}, 3), c = sample(d, {}, {50, 50, 50}, 4);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.bulk[i].x == b.bulk[i].x);
    CHECK(a.boundary[i].x == b.boundary[i].x);
  }
  CHECK(a.bulk[0].x != c.bulk[0].x);
}

TEST_CASE("malformed definitions are rejected") {
  CHECK_THROWS_AS(Domain::box({{1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(Domain::disk({0.0, 0.0}, -1.0), ConfigError);
  ProblemSpec s = get_case("C.4").spec;
  s.boundary.push_back(s.boundary.front());
  CHECK_THROWS_AS(s.validate(), ConfigError);
  ProblemSpec t = get_case("C.4").spec;
  t.outputs = 9;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  const ProblemSpec u = get_case("B.1").spec;
  CHECK_THROWS_AS(sample(u, {10, 10, 1}, 0), ConfigError);
}

TEST_CASE("condition terms on exact partials") {
  // u = x^2 + 3y on the unit square.
  PartialsFn f = [](const double* x, const MultiIndex& mi, double* out) {
    if (mi.is_zero()) out[0] = x[0] * x[0] + 3 * x[1];
    else if (mi == MultiIndex{1, 0}) out[0] = 2 * x[0];
    else if (mi == MultiIndex{0, 1}) out[0] = 3.0;
    else if (mi == MultiIndex{2, 0}) out[0] = 2.0;
    else out[0] = 0.0;
  };
  const double x[2] = {0.5, 1.0}, n[2] = {0.0, 1.0};
  const Term dir = dirichlet(2, 1, [](const double* p, double* o) { o[0] = p[0] * p[0] + 3 * p[1]; });
  CHECK(eval_term(dir, 2, 1, x, n, f)[0] == doctest::Approx(0.0));
  const Term neu = neumann(2, 1, [](const double*, double* o) { o[0] = 1.0; });
  CHECK(eval_term(neu, 2, 1, x, n, f)[0] == doctest::Approx(2.0));
  const Term ic = initial_condition(2, 1, [](const double*, double* o) { o[0] = 0.0; },
                                    [](const double*, double* o) { o[0] = 0.0; });
  const auto r = eval_term(ic, 2, 1, x, n, f);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(3.25));
  CHECK(r[1] == doctest::Approx(1.0));
  const Term per = periodic(2, 1, 0, {0.0, 1.0}, true);
  const double lo[2] = {0.0, 0.4}, nl[2] = {-1.0, 0.0};
  const auto rp = eval_term(per, 2, 1, lo, nl, f);
  CHECK(rp[0] == doctest::Approx(-1.0));
  CHECK(rp[1] == doctest::Approx(-2.0));
}
