#include <cmath>
#include <vector>

#include "doctest.h"
#include "dnnsolve/diffengine.hpp"
#include "dnnsolve/errors.hpp"

using namespace dnnsolve;

TEST_CASE("sine jet has the closed-form derivatives") {
  const double w = 3.7, p = -0.4, x = 0.31;
  const Jet1 j = jet_sin(w, p, x);
  const double z = w * x + p;
  CHECK(j[0] == doctest::Approx(std::sin(z)).epsilon(1e-15));
  CHECK(j[1] == doctest::Approx(w * std::cos(z)).epsilon(1e-14));
  CHECK(j[2] == doctest::Approx(-w * w * std::sin(z)).epsilon(1e-14));
  CHECK(j[3] == doctest::Approx(-w * w * w * std::cos(z)).epsilon(1e-14));
}

TEST_CASE("sigmoid jet matches differences of the logistic function") {
  const double w = 1.9, b = 0.3;
  auto sig = [&](double x) { return 1.0 / (1.0 + std::exp(-(w * x + b))); };
  for (double x : {-2.0, -0.2, 0.0, 0.7, 3.0}) {
    const Jet1 j = jet_sigmoid(w, b, x);
    const double h = 1e-3;
    const double d1 = (sig(x + h) - sig(x - h)) / (2 * h);
    const double d2 = (sig(x + h) - 2 * sig(x) + sig(x - h)) / (h * h);
    const double d3 = (sig(x + 2 * h) - 2 * sig(x + h) + 2 * sig(x - h) - sig(x - 2 * h)) / (2 * h * h * h);
    CHECK(j[0] == doctest::Approx(sig(x)).epsilon(1e-15));
    CHECK(j[1] == doctest::Approx(d1).epsilon(1e-6));
    CHECK(j[2] == doctest::Approx(d2).epsilon(1e-4));
    CHECK(j[3] == doctest::Approx(d3).epsilon(1e-3));
  }
}

TEST_CASE("sigmoid pieces stay finite far in the tails") {
  for (double z : {-800.0, -40.0, 40.0, 800.0}) {
    const SigmoidParts s = sigmoid_parts(z);
    CHECK(std::isfinite(s.sigma));
    CHECK(s.q >= 0.0);
    CHECK(s.q <= 0.25);
    CHECK(std::abs(s.one_m2s) <= 1.0);
  }
  const SigmoidParts tiny = sigmoid_parts(-40.0);
  CHECK(tiny.q == doctest::Approx(std::exp(-40.0)).epsilon(1e-12));
}

TEST_CASE("Leibniz product to third order") {
  const Jet1 a = jet_sin(2.0, 0.1, 0.4), b = jet_sigmoid(-1.3, 0.2, 0.4);
  const Jet1 p = jet_mul(a, b);
  CHECK(p[0] == doctest::Approx(a[0] * b[0]));
  CHECK(p[1] == doctest::Approx(a[1] * b[0] + a[0] * b[1]));
  CHECK(p[2] == doctest::Approx(a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2]));
  CHECK(p[3] == doctest::Approx(a[3] * b[0] + 3 * a[2] * b[1] + 3 * a[1] * b[2] + a[0] * b[3]));
}

TEST_CASE("separable partial picks one derivative per factor") {
  const std::vector<Jet1> f = {jet_sin(1.5, 0.2, 0.3), jet_sin(2.5, -0.1, 0.6), jet_sigmoid(0.7, 0.0, 0.1)};
  CHECK(separable_partial(f, MultiIndex{1, 0, 2}) == doctest::Approx(f[0][1] * f[1][0] * f[2][2]));
  CHECK(separable_partial(f, MultiIndex{0, 3, 0}) == doctest::Approx(f[0][0] * f[1][3] * f[2][0]));
  CHECK_THROWS_AS(MultiIndex({2, 2, 0}), UnsupportedOrder);
}

TEST_CASE("multi-index codes are distinct and ordered") {
  CHECK(MultiIndex{1, 2}.code() == 1 + 4 * 2);
  CHECK(MultiIndex{0, 0, 3}.code() == 48);
  CHECK(MultiIndex{1}.with_dims(3) == MultiIndex{1, 0, 0});
  CHECK(MultiIndex::zero(2).is_zero());
}
