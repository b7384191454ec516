#include <cmath>
#include <numbers>
#include <vector>

#include "checks.hpp"
#include "doctest.h"
#include "dnnsolve/network.hpp"

using namespace dnnsolve;

namespace {

// Direct transcription of the network formula.
std::vector<double> reference_eval(const NetParams& p, const std::vector<double>& x) {
  std::vector<double> u(static_cast<std::size_t>(p.outputs));
  for (int l = 0; l < p.outputs; ++l) {
    double s = p.a[static_cast<std::size_t>(l)];
    for (int k = 0; k < p.neurons; ++k) {
      double F = 1.0, S = 1.0;
      for (int j = 0; j < p.dims; ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        F *= std::sin(p.omega_at(j, k) * xj + p.phi_at(j, k));
        S *= 1.0 / (1.0 + std::exp(-(p.w_at(j, k) * xj + p.b_at(j, k))));
      }
      s += p.amp(l, 0, k) * F + p.amp(l, 1, k) * S + p.amp(l, 2, k) * F * S;
    }
    u[static_cast<std::size_t>(l)] = s;
  }
  return u;
}

}  // namespace

TEST_CASE("parameter count") {
  CHECK(NetParams::count(35, 1, 1) == 4 * 35 + 106);
  CHECK(NetParams::count(10, 3, 2) == 120 + 2 * 31);
  CHECK(NetParams(7, 2, 2).flatten().size() == NetParams::count(7, 2, 2));
}

TEST_CASE("flat order is omega, phi, w, b, d, a") {
  NetParams p(3, 2, 2);
  const auto blocks = p.blocks();
  REQUIRE(blocks.size() == 6);
  const char* names[] = {"omega", "phi", "w", "b", "d", "a"};
  const std::size_t sizes[] = {6, 6, 6, 6, 18, 2};
  std::size_t at = 0;
  for (int i = 0; i < 6; ++i) {
    CHECK(std::string(blocks[static_cast<std::size_t>(i)].name) == names[i]);
    CHECK(blocks[static_cast<std::size_t>(i)].begin == at);
    at += sizes[i];
    CHECK(blocks[static_cast<std::size_t>(i)].end == at);
  }
  std::vector<double> flat(p.size());
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = static_cast<double>(i);
  p.unflatten(flat);
  CHECK(p.omega_at(1, 0) == 3.0);
  CHECK(p.phi_at(0, 0) == 6.0);
  CHECK(p.amp(1, 2, 2) == 24.0 + 9 + 6 + 2);
  CHECK(p.a[1] == 43.0);
  CHECK(p.flatten() == flat);
}

TEST_CASE("initialization ranges and reproducibility") {
  const std::vector<Extent> dom = {{0.0, 2.0}, {-1.0, 1.0}};
  const NetParams p = init_params(20, 2, 1, dom, 5);
  const double pi = std::numbers::pi;
  for (int k = 0; k < 20; ++k) {
    for (int j = 0; j < 2; ++j) {
      CHECK(p.omega_at(j, k) >= pi / 2.0);
      CHECK(p.omega_at(j, k) <= 20 * pi / 2.0);
      CHECK(p.w_at(j, k) >= 0.0);
      CHECK(p.w_at(j, k) <= 1e-3);
      CHECK(p.phi_at(j, k) == 0.0);
      CHECK(p.b_at(j, k) == 0.0);
    }
  }
  for (double v : p.d) CHECK(v == 1e-4);
  CHECK(p.a[0] == 0.0);
  CHECK(init_params(20, 2, 1, dom, 5).flatten() == p.flatten());
  CHECK(init_params(20, 2, 1, dom, 6).flatten() != p.flatten());
}

TEST_CASE("forward evaluation matches the formula") {
  const std::vector<Extent> dom = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  for (int dims = 1; dims <= 3; ++dims) {
    const std::vector<Extent> d(dom.begin(), dom.begin() + dims);
    const NetParams p = checks::random_params(9, dims, 2, d, 11);
    const std::vector<double> x = {0.3, 0.77, 0.12};
    const std::vector<double> xs(x.begin(), x.begin() + dims);
    const auto got = eval(p, xs);
    const auto want = reference_eval(p, xs);
    for (int l = 0; l < 2; ++l) CHECK(got[static_cast<std::size_t>(l)] == doctest::Approx(want[static_cast<std::size_t>(l)]).epsilon(1e-13));
  }
}

TEST_CASE("input partials agree with finite differences") {
  for (int dims = 1; dims <= 3; ++dims) {
    INFO("dims " << dims);
    CHECK(checks::jet_check(dims, 2, 20, 100 + static_cast<std::uint64_t>(dims)) <= 1e-6);
  }
}

TEST_CASE("checkpoint round trip is exact") {
  const NetParams p = checks::random_params(6, 2, 2, {{0.0, 1.0}, {0.0, 2.0}}, 3);
  const NetParams q = checkpoint_from_json(checkpoint_json(p));
  CHECK(q.flatten() == p.flatten());
  CHECK(q.neurons == 6);
  CHECK(q.domain == p.domain);
}
