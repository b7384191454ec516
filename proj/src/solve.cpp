#include "dnnsolve/solve.hpp"

#include <chrono>

#include "dnnsolve/validate.hpp"

namespace dnnsolve {

TrainingReport solve(const BenchmarkCase& c, const SolveOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const ProblemSpec& spec = c.spec;

  TrainingReport rep;
  rep.case_id = c.id;
  rep.seed = opt.seed;
  rep.corrections = c.notes;

  RunConfig& cfg = rep.config;
  cfg.neurons = opt.neurons.value_or(c.defaults.neurons);
  cfg.counts = opt.counts.value_or(c.defaults.counts);
  cfg.alphas = c.defaults.alphas;
  if (opt.alpha0) cfg.alphas.alpha0 = *opt.alpha0;
  if (opt.alpha_boundary) cfg.alphas.alpha_boundary = *opt.alpha_boundary;
  cfg.adam_epochs = opt.adam_epochs.value_or(c.defaults.adam_epochs);
  cfg.bfgs_max_iters = opt.bfgs_max_iters;
  cfg.bfgs_grad_tol = opt.bfgs_grad_tol;
  cfg.threads = opt.threads;
  if (cfg.neurons < 1) throw ConfigError("neurons must be >= 1");
  if (cfg.adam_epochs < 0 || cfg.bfgs_max_iters < 0) throw ConfigError("iteration counts must be >= 0");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");

  AdamConfig adam;
  adam.epochs = cfg.adam_epochs;
  cfg.batch_size = adam.batch_size;
  cfg.lr0 = adam.lr0;

  rep.theta = init_params(cfg.neurons, spec.dims, spec.outputs, spec.domain.extents, opt.seed);
  const Objective obj(spec, sample(spec, cfg.counts, opt.seed), cfg.alphas, cfg.threads, opt.backend);

  const AdamResult ar = train_adam(rep.theta, obj, adam, opt.seed);
  rep.adam_epochs = ar.epochs_run;
  rep.adam_trace = ar.trace;
  if (ar.aborted) {
    rep.aborted = true;
    rep.stop_reason = "aborted";
    rep.message = ar.message;
  } else {
    BfgsConfig bc;
    bc.max_iters = cfg.bfgs_max_iters;
    bc.grad_tol_inf = cfg.bfgs_grad_tol;
    try {
      const BfgsResult br = train_bfgs(rep.theta, obj, bc);
      rep.bfgs_iters = br.iters;
      rep.bfgs_restarts = br.restarts;
      rep.bfgs_trace = br.trace;
      rep.stop_reason = br.stop_reason;
    } catch (const NumericError& e) {
      rep.aborted = true;
      rep.stop_reason = "aborted";
      rep.message = e.what();
    }
  }

  try {
    rep.loss = obj.loss(rep.theta);
  } catch (const NumericError& e) {
    rep.aborted = true;
    rep.stop_reason = "aborted";
    rep.message = e.what();
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (opt.compute_r && !rep.aborted && has_reference(c)) {
    const Reference ref = reference_for(c);
    rep.r = rms_error(rep.theta, c, ref);
    rep.r_source = ref.source;
  }
  return rep;
}

}  // namespace dnnsolve
