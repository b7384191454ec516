#pragma once

// Independent checks shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <string>

#include "dnnsolve/catalog.hpp"
#include "dnnsolve/network.hpp"

namespace checks {

struct GateResult {
  double max_bulk = 0.0;       // max |residual| of the analytic solution
  double max_condition = 0.0;  // max |mismatch| over initial and boundary points
};

/// Feeds exact partials of the closed form (Taylor arithmetic) into every
/// term of the case at sampled points.
GateResult catalog_gate(const dnnsolve::BenchmarkCase& c, int points = 1000, std::uint64_t seed = 7);

/// Parameters with every block randomized to O(1) values, so no gradient
/// component is trivially small.
dnnsolve::NetParams random_params(int neurons, int dims, int outputs,
                                  const std::vector<dnnsolve::Extent>& domain, std::uint64_t seed);

struct GradCheck {
  double worst_rel = 0.0;
  std::size_t worst_index = 0;
  std::size_t n = 0;
};

/// loss_grad against Richardson-extrapolated central differences of loss.
/// Relative error is |g - fd| / max(|g|, |fd|, 1e-3 max|g|).
GradCheck gradient_check(const dnnsolve::BenchmarkCase& c, std::uint64_t seed, int bulk = 128,
                         int boundary = 64, int initial = 32);

/// Worst relative error of eval_jet partials up to order 3 against
/// Richardson finite differences of lower-order partials.
double jet_check(int dims, int outputs, int samples, std::uint64_t seed);

}  // namespace checks
