#include <algorithm>
#include <cmath>
#include <vector>

#include "checks.hpp"
#include "doctest.h"
#include "dnnsolve/catalog.hpp"
#include "dnnsolve/kernels.hpp"
#include "dnnsolve/loss.hpp"

using namespace dnnsolve;

TEST_CASE("scalar and AVX2 kernels agree on loss and gradient") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available; skipped");
    return;
  }
  for (const char* id : {"B.4", "C.6", "D.3"}) {
    const BenchmarkCase c = get_case(id);
    const ProblemSpec& s = c.spec;
    const CollocationSet pts = sample(s, {300, s.boundary.empty() ? 0 : 100, s.initial ? 60 : 0}, 4);
    // Neuron count not a multiple of the lane width exercises the padding.
    const NetParams theta = checks::random_params(13, s.dims, s.outputs, s.domain.extents, 8);
    Objective scalar(s, pts, c.defaults.alphas, 1, kernels::Backend::Scalar);
    Objective avx(s, pts, c.defaults.alphas, 1, kernels::Backend::Avx2);
    std::vector<double> gs(theta.size()), ga(theta.size());
    const double ls = scalar.loss_grad(theta, gs).total;
    const double la = avx.loss_grad(theta, ga).total;
    INFO(id);
    CHECK(la == doctest::Approx(ls).epsilon(1e-12));
    double gmax = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      gmax = std::max(gmax, std::abs(gs[i]));
      diff = std::max(diff, std::abs(gs[i] - ga[i]));
    }
    CHECK(diff <= 1e-11 * gmax);
  }
}

TEST_CASE("padding rounds up to the lane width") {
  CHECK(kernels::padded(1) == 4);
  CHECK(kernels::padded(35) == 36);
  CHECK(kernels::padded(40) == 40);
  CHECK(kernels::resolve(kernels::Backend::Scalar) == kernels::Backend::Scalar);
}
