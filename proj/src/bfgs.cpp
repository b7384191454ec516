#include <algorithm>
#include <cmath>
#include <limits>

#include "dnnsolve/errors.hpp"
#include "dnnsolve/optimize.hpp"

namespace dnnsolve {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

struct Probe {
  double a, f, d;
  std::vector<double> g;
};

class LineSearch {
 public:
  LineSearch(const FlatObjective& f, const std::vector<double>& x, const std::vector<double>& p,
             double f0, double d0, const BfgsConfig& cfg, int& evals)
      : f_(f), x_(x), p_(p), f0_(f0), d0_(d0), cfg_(cfg), evals_(evals), trial_(x.size()) {}

  // Returns true with `out` at a strong-Wolfe point. When the search runs
  // out of evaluations it falls back to the best weak-Wolfe point seen, then
  // to the best decreasing one. Kinks of the loss (a group driven to zero)
  // make the strong condition unreachable; accepting a point past the kink
  // lets the update learn it.
  bool run(double a_init, Probe& out) {
    Probe prev{0.0, f0_, d0_, {}};
    double a = a_init;
    for (int i = 0; i < cfg_.max_line_evals; ++i) {
      Probe cur = probe(a);
      if (!(cur.f <= f0_ + cfg_.c1 * a * d0_) || (i > 0 && cur.f >= prev.f)) {
        return zoom(prev, cur, out);
      }
      if (std::fabs(cur.d) <= -cfg_.c2 * d0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.d >= 0.0) return zoom(cur, prev, out);
      prev = std::move(cur);
      a *= 2.0;
    }
    return fallback(out);
  }

 private:
  Probe probe(double a) {
    for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + a * p_[i];
    Probe pr{a, 0.0, 0.0, std::vector<double>(x_.size())};
    ++evals_;
    try {
      pr.f = f_(trial_, pr.g);
      pr.d = dot(pr.g, p_);
      if (!std::isfinite(pr.f) || !std::isfinite(pr.d)) pr.f = std::numeric_limits<double>::infinity();
    } catch (const NumericError&) {
      pr.f = std::numeric_limits<double>::infinity();
    }
    if (std::isinf(pr.f)) pr.d = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(pr.f) && pr.f < best_.f) best_ = pr;
    if (std::isfinite(pr.f) && pr.f <= f0_ + cfg_.c1 * a * d0_ && pr.d >= cfg_.c2 * d0_ && pr.f < weak_.f) weak_ = pr;
    return pr;
  }

  bool zoom(Probe lo, Probe hi, Probe& out) {
    while (evals_left()) {
      const double span = hi.a - lo.a;
      double a = interpolate(lo, hi);
      const double lo_b = std::min(lo.a, hi.a) + 0.1 * std::fabs(span);
      const double hi_b = std::max(lo.a, hi.a) - 0.1 * std::fabs(span);
      if (!std::isfinite(a) || a < lo_b || a > hi_b) a = lo.a + 0.5 * span;
      if (std::fabs(span) <= 1e-16 * std::max(1.0, std::fabs(lo.a))) break;
      Probe cur = probe(a);
      if (!(cur.f <= f0_ + cfg_.c1 * a * d0_) || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::fabs(cur.d) <= -cfg_.c2 * d0_) {
          out = std::move(cur);
          return true;
        }
        if (cur.d * (hi.a - lo.a) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return fallback(out);
  }

  bool fallback(Probe& out) {
    if (std::isfinite(weak_.f)) {
      out = weak_;
      return true;
    }
    if (!(best_.f < f0_)) return false;
    out = best_;
    return true;
  }

  bool evals_left() const { return used() < cfg_.max_line_evals; }
  int used() const { return evals_ - start_; }

  static double interpolate(const Probe& lo, const Probe& hi) {
    if (!std::isfinite(hi.f) || !std::isfinite(hi.d) || !std::isfinite(lo.d)) return NAN;
    const double d1 = lo.d + hi.d - 3.0 * (lo.f - hi.f) / (lo.a - hi.a);
    const double disc = d1 * d1 - lo.d * hi.d;
    if (disc < 0.0) return NAN;
    const double d2 = std::copysign(std::sqrt(disc), hi.a - lo.a);
    return hi.a - (hi.a - lo.a) * (hi.d + d2 - d1) / (hi.d - lo.d + 2.0 * d2);
  }

  const FlatObjective& f_;
  const std::vector<double>& x_;
  const std::vector<double>& p_;
  double f0_, d0_;
  const BfgsConfig& cfg_;
  int& evals_;
  int start_ = evals_;
  std::vector<double> trial_;
  Probe best_{0.0, std::numeric_limits<double>::infinity(), 0.0, {}};
  Probe weak_{0.0, std::numeric_limits<double>::infinity(), 0.0, {}};
};

}  // namespace

BfgsResult bfgs_minimize(const FlatObjective& f, std::vector<double>& x, const BfgsConfig& cfg) {
  if (!(cfg.grad_tol_inf > 0.0)) throw ConfigError("BFGS gradient tolerance must be positive");
  const std::size_t n = x.size();
  BfgsResult res;
  std::vector<double> g(n);
  res.f = f(x, g);
  ++res.evals;
  res.grad_inf = inf_norm(g);
  if (!std::isfinite(res.f)) throw NumericError("BFGS started at a non-finite objective");
  if (res.grad_inf < cfg.grad_tol_inf) {
    res.stop_reason = "converged";
    return res;
  }
  if (cfg.max_iters <= 0) {
    res.stop_reason = "max_iters";
    return res;
  }

  // Dense inverse Hessian, row-major.
  std::vector<double> H(n * n, 0.0);
  auto reset = [&](double scale) {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = scale;
  };
  reset(1.0);
  bool scaled = false;
  bool fresh = true;  // H is a multiple of the identity
  std::vector<double> p(n), s(n), y(n), Hy(n);

  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const double* row = &H[i * n];
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * g[j];
      p[i] = -acc;
    }
    double d0 = dot(g, p);
    if (!(d0 < 0.0)) {
      reset(1.0);
      scaled = false;
      fresh = true;
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      d0 = dot(g, p);
    }
    const double a0 = fresh ? std::min(1.0, 1.0 / res.grad_inf) : 1.0;

    LineSearch ls(f, x, p, res.f, d0, cfg, res.evals);
    Probe hit;
    if (!ls.run(a0, hit)) {
      // Retry once along the steepest descent before giving up.
      if (fresh) {
        res.stop_reason = "line_search_failed";
        return res;
      }
      reset(1.0);
      scaled = false;
      fresh = true;
      ++res.restarts;
      continue;
    }
    fresh = false;

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = hit.a * p[i];
      y[i] = hit.g[i] - g[i];
      x[i] += s[i];
    }
    g = std::move(hit.g);
    res.f = hit.f;
    res.grad_inf = inf_norm(g);
    ++res.iters;
    res.trace.push_back(res.f);

    const double sy = dot(s, y);
    const double yy = dot(y, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * yy)) {
      if (!scaled) {
        reset(sy / yy);
        scaled = true;
      }
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = &H[i * n];
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * y[j];
        Hy[i] = acc;
      }
      const double yHy = dot(y, Hy);
      const double c = rho * rho * (sy + yHy);
      // Update the upper triangle and mirror it so H stays exactly symmetric.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          const double v = H[i * n + j] + c * s[i] * s[j] - rho * (Hy[i] * s[j] + s[i] * Hy[j]);
          H[i * n + j] = v;
          H[j * n + i] = v;
        }
      }
    }

    if (res.grad_inf < cfg.grad_tol_inf) {
      res.stop_reason = "converged";
      return res;
    }
    if (res.iters >= cfg.max_iters) {
      res.stop_reason = "max_iters";
      return res;
    }
  }
}

BfgsResult train_bfgs(NetParams& theta, const Objective& obj, const BfgsConfig& cfg) {
  NetParams work = theta;
  std::vector<double> x = theta.flatten();
  const FlatObjective f = [&](std::span<const double> v, std::span<double> g) {
    work.unflatten(v);
    return obj.loss_grad(work, g).total;
  };
  BfgsResult r = bfgs_minimize(f, x, cfg);
  theta.unflatten(x);
  return r;
}

}  // namespace dnnsolve
