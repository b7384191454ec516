#pragma once

// Two-phase training: mini-batch ADAM with a plateau learning-rate schedule,
// then full-batch BFGS with a strong-Wolfe line search.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dnnsolve/loss.hpp"
#include "dnnsolve/network.hpp"

namespace dnnsolve {

/// Reduce-on-plateau rule: after `patience` consecutive observations that
/// fail to beat the best value by more than `min_delta`, multiply the rate
/// by `factor`, never going below `floor`.
struct PlateauConfig {
  double factor = 0.5;
  int patience = 30;
  double min_delta = 1e-4;
  double floor = 1e-6;
};

class PlateauSchedule {
 public:
  PlateauSchedule(double lr0, PlateauConfig cfg);
  double lr() const { return lr_; }
  /// Feed one monitored value; returns the rate to use from now on.
  double observe(double value);

 private:
  PlateauConfig cfg_;
  double lr_;
  double best_;
  int wait_ = 0;
};

struct AdamConfig {
  int epochs = 150;
  int batch_size = 256;
  double lr0 = 0.1;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  PlateauConfig plateau;
};

/// Plain ADAM state over a flat parameter vector.
class Adam {
 public:
  Adam(std::size_t n, const AdamConfig& cfg);
  void step(std::span<double> x, std::span<const double> g, double lr);
  long steps() const { return t_; }

 private:
  double b1_, b2_, eps_;
  std::vector<double> m_, v_;
  long t_ = 0;
  double b1t_ = 1.0, b2t_ = 1.0;
};

struct EpochRecord {
  int epoch;
  double loss;  // full-set total after the epoch
  double lr;    // rate used during the epoch
};

struct AdamResult {
  int epochs_run = 0;
  std::vector<EpochRecord> trace;
  bool aborted = false;
  std::string message;
};

inline constexpr std::uint64_t kShuffleStream = 3;

/// Runs cfg.epochs epochs. On a non-finite loss it stops, restores the last
/// good parameters and reports aborted.
AdamResult train_adam(NetParams& theta, const Objective& obj, const AdamConfig& cfg,
                      std::uint64_t seed);

struct BfgsConfig {
  double grad_tol_inf = 1e-8;
  int max_iters = 20000;
  double c1 = 1e-4, c2 = 0.9;
  int max_line_evals = 40;
};

struct BfgsResult {
  int iters = 0;
  int evals = 0;
  double f = 0.0;
  double grad_inf = 0.0;
  int restarts = 0;  // inverse-Hessian resets after a failed line search
  std::string stop_reason;  // converged | max_iters | line_search_failed
  std::vector<double> trace;  // objective after each iteration
};

/// f(x, g) returns the value and writes the gradient.
using FlatObjective = std::function<double(std::span<const double>, std::span<double>)>;

BfgsResult bfgs_minimize(const FlatObjective& f, std::vector<double>& x, const BfgsConfig& cfg);

BfgsResult train_bfgs(NetParams& theta, const Objective& obj, const BfgsConfig& cfg);

}  // namespace dnnsolve
