#include <cmath>
#include <limits>

#include "dnnsolve/errors.hpp"
#include "dnnsolve/optimize.hpp"
#include "dnnsolve/rng.hpp"

namespace dnnsolve {

PlateauSchedule::PlateauSchedule(double lr0, PlateauConfig cfg)
    : cfg_(cfg), lr_(lr0), best_(std::numeric_limits<double>::infinity()) {
  if (!(cfg.factor > 0.0 && cfg.factor < 1.0)) throw ConfigError("plateau factor must lie in (0, 1)");
  if (cfg.patience < 1) throw ConfigError("plateau patience must be >= 1");
}

double PlateauSchedule::observe(double value) {
  if (value < best_ - cfg_.min_delta) {
    best_ = value;
    wait_ = 0;
    return lr_;
  }
  if (++wait_ >= cfg_.patience) {
    if (lr_ > cfg_.floor) lr_ = std::max(lr_ * cfg_.factor, cfg_.floor);
    wait_ = 0;
  }
  return lr_;
}

Adam::Adam(std::size_t n, const AdamConfig& cfg)
    : b1_(cfg.beta1), b2_(cfg.beta2), eps_(cfg.eps), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> x, std::span<const double> g, double lr) {
  ++t_;
  b1t_ *= b1_;
  b2t_ *= b2_;
  const double a = lr * std::sqrt(1.0 - b2t_) / (1.0 - b1t_);
  for (std::size_t i = 0; i < x.size(); ++i) {
    m_[i] = b1_ * m_[i] + (1.0 - b1_) * g[i];
    v_[i] = b2_ * v_[i] + (1.0 - b2_) * g[i] * g[i];
    x[i] -= a * m_[i] / (std::sqrt(v_[i]) + eps_);
  }
}

AdamResult train_adam(NetParams& theta, const Objective& obj, const AdamConfig& cfg,
                      std::uint64_t seed) {
  if (cfg.batch_size < 1) throw ConfigError("batch size must be >= 1");
  AdamResult res;
  Rng rng = Rng::stream(seed, kShuffleStream);
  PlateauSchedule sched(cfg.lr0, cfg.plateau);
  Adam adam(theta.size(), cfg);

  std::vector<double> x = theta.flatten();
  std::vector<double> good = x;
  std::vector<double> g(x.size());
  std::vector<PointRef> refs = obj.all_refs();
  const auto bs = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = sched.lr();
    rng.shuffle(refs.begin(), refs.end());
    double full;
    try {
      for (std::size_t at = 0; at < refs.size(); at += bs) {
        const std::size_t end = std::min(refs.size(), at + bs);
        theta.unflatten(x);
        obj.loss_grad(theta, std::span<const PointRef>(refs.data() + at, end - at), g);
        adam.step(x, g, lr);
      }
      theta.unflatten(x);
      full = obj.loss(theta).total;
    } catch (const NumericError& e) {
      theta.unflatten(good);
      res.aborted = true;
      res.message = e.what();
      return res;
    }
    good = x;
    res.trace.push_back({epoch, full, lr});
    res.epochs_run = epoch + 1;
    sched.observe(full);
  }
  theta.unflatten(x);
  return res;
}

}  // namespace dnnsolve
