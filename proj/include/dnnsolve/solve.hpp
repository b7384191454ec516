#pragma once

// End-to-end run of one case: initialize, sample, ADAM, BFGS, validate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnnsolve/catalog.hpp"
#include "dnnsolve/kernels.hpp"
#include "dnnsolve/optimize.hpp"

namespace dnnsolve {

/// Unset fields fall back to the case defaults.
struct SolveOptions {
  std::uint64_t seed = 0;
  std::optional<int> neurons;
  std::optional<double> alpha0, alpha_boundary;
  std::optional<int> adam_epochs;
  std::optional<Counts> counts;
  int bfgs_max_iters = 20000;
  double bfgs_grad_tol = 1e-8;
  int threads = 1;
  kernels::Backend backend = kernels::Backend::Auto;
  bool compute_r = true;
};

struct RunConfig {
  int neurons = 0;
  Counts counts;
  LossWeights alphas;
  int adam_epochs = 0;
  int batch_size = 0;
  double lr0 = 0.0;
  int bfgs_max_iters = 0;
  double bfgs_grad_tol = 0.0;
  int threads = 1;
};

struct TrainingReport {
  std::string case_id;
  std::uint64_t seed = 0;
  RunConfig config;
  std::vector<std::string> corrections;
  LossBreakdown loss;
  std::optional<double> r;
  std::string r_source;
  int adam_epochs = 0;
  int bfgs_iters = 0;
  int bfgs_restarts = 0;  // inverse-Hessian resets
  double wall_seconds = 0.0;
  std::string stop_reason;  // converged | max_iters | line_search_failed | aborted
  bool aborted = false;
  std::string message;
  NetParams theta;
  std::vector<EpochRecord> adam_trace;
  std::vector<double> bfgs_trace;
};

TrainingReport solve(const BenchmarkCase& c, const SolveOptions& opt);

}  // namespace dnnsolve
